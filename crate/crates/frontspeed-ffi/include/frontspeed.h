#ifndef FRONTSPEED_H
#define FRONTSPEED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call outcome. Nonzero values mirror the CLI exit codes.
 */
typedef enum {
  /**
   * Success; out-pointers hold results.
   */
  FS_STATUS_OK = 0,
  /**
   * A parameter or profile spec failed validation.
   */
  FS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The computation did not converge or left its domain.
   */
  FS_STATUS_NUMERICAL_FAILURE = 3,
  /**
   * File access failed (table profiles).
   */
  FS_STATUS_IO_FAILURE = 4,
  /**
   * A required pointer was null.
   */
  FS_STATUS_NULL_POINTER = 5,
} FsStatus;

/**
 * Opaque reaction-profile handle.
 */
typedef struct FsProfile FsProfile;

/**
 * Exact cutoff-linear speed scales at one epsilon.
 */
typedef struct {
  double epsilon;
  double phi_star;
  double c_l;
  double c_bd;
  double c_kpp;
  double c_zfk;
  double m;
  double m_zfk_bound;
} FsSpeedReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Solve the angle equation phi tan phi = |log eps| / 2.
 *
 * # Safety
 * `out` must be a valid pointer to a double.
 */
FsStatus fs_phi_star(double epsilon, double *out);

/**
 * Full speed report for the cutoff-linear profile.
 *
 * # Safety
 * `out` must be a valid pointer to an `FsSpeedReport`.
 */
FsStatus fs_speed_report(double epsilon, FsSpeedReport *out);

/**
 * Parse a profile spec (`linear`, `fisher`, `cubic`, `power:B=..,eta=..`,
 * `table:path`) at the given cutoff. On success `*out` owns the handle.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
FsStatus fs_profile_parse(const char *spec, double epsilon, FsProfile **out);

/**
 * Release a profile handle. Null is a no-op.
 *
 * # Safety
 * `profile` must have come from [`fs_profile_parse`] and not been freed.
 */
void fs_profile_free(FsProfile *profile);

/**
 * Rigorous two-sided speed bracket for the profile.
 *
 * # Safety
 * `profile`, `lower`, and `upper` must be valid pointers.
 */
FsStatus fs_speed_bracket(const FsProfile *profile, double *lower, double *upper);

/**
 * Traveling-wave speed by phase-plane shooting, bisected to `tol`.
 *
 * # Safety
 * `profile` and `out` must be valid pointers.
 */
FsStatus fs_shoot_speed(const FsProfile *profile, double tol, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRONTSPEED_H */
