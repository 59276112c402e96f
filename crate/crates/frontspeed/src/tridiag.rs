//! Thomas elimination for tridiagonal systems.

use crate::error::{FrontError, Result};

/// Solve A x = rhs where A has subdiagonal `sub`, diagonal `diag`, and
/// superdiagonal `sup` (lengths n-1, n, n-1). Requires nonvanishing pivots,
/// which holds for the diagonally dominant and SPD systems used here.
pub fn solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(sub.len(), n - 1);
    assert_eq!(sup.len(), n - 1);
    assert_eq!(rhs.len(), n);
    let mut c = vec![0.0; n - 1];
    let mut d = vec![0.0; n];
    let mut piv = diag[0];
    if piv == 0.0 {
        return Err(FrontError::NoConvergence("singular tridiagonal system".into()));
    }
    d[0] = rhs[0] / piv;
    for i in 1..n {
        c[i - 1] = sup[i - 1] / piv;
        piv = diag[i] - sub[i - 1] * c[i - 1];
        if piv == 0.0 {
            return Err(FrontError::NoConvergence("singular tridiagonal system".into()));
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / piv;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}
