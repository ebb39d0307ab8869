#ifndef GRAVIDIFF_H
#define GRAVIDIFF_H

/* Generated by cbindgen; do not edit. */

#include <stddef.h>
#include <stdint.h>

#define GD_UNITS_MODEL 0

#define GD_UNITS_SI 1

#define GD_CONSTANT_SOLVED 0

#define GD_CONSTANT_PRINTED 1

typedef enum GdStatus {
  GD_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GD_STATUS_ERR_NULL = 1,
  GD_STATUS_ERR_DOMAIN = 2,
  GD_STATUS_ERR_INVALID = 3,
  /**
   * Evaluation hit a zero of an Airy denominator.
   */
  GD_STATUS_ERR_POLE = 4,
  GD_STATUS_ERR_PARSE = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  GD_STATUS_ERR_PANIC = 6,
  /**
   * The caller-provided buffer is too small.
   */
  GD_STATUS_ERR_BUFFER = 7,
} GdStatus;

/**
 * Opaque grid of complex amplitudes.
 */
typedef struct GdField GdField;

/**
 * Opaque quasi-time map for one beam in a uniform field.
 */
typedef struct GdMap GdMap;

/**
 * Opaque particle species.
 */
typedef struct GdSpecies GdSpecies;

typedef struct GdComplex {
  double re;
  double im;
} GdComplex;

typedef struct GdAiry {
  double ai;
  double ai_prime;
  double bi;
  double bi_prime;
} GdAiry;

typedef struct GdSensitivity {
  double c_star;
  double e_kin;
  double width;
  double z_focus_0;
  double z_focus_prime_0;
  double epsilon;
  double z_focus_shifted;
  double dz_de;
} GdSensitivity;

/**
 * One row of the beam-realization table. `temperature` is NaN when the row
 * has none.
 */
typedef struct GdTableRow {
  char species[32];
  double temperature;
  double width;
  double e_kin_ev;
  double z_focus_0;
  double z_focus_prime_0;
  /**
   * Number of annotation flags attached to the row.
   */
  uint32_t n_flags;
} GdTableRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gd_version(void);

/**
 * Message of the last failure on this thread, or null if none.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *gd_last_error(void);

void gd_clear_error(void);

/**
 * The solved focus constant c*.
 */
double gd_focus_constant(void);

/**
 * # Safety
 * `result` must be null or point to writable memory for one `GdComplex`.
 */
enum GdStatus gd_fresnel(struct GdComplex z, struct GdComplex *result);

/**
 * # Safety
 * `result` must be null or point to writable memory for one `GdAiry`.
 */
enum GdStatus gd_airy(double x, struct GdAiry *result);

/**
 * n-th zero of Ai, counting from 1.
 *
 * # Safety
 * `result` must be null or point to a writable `double`.
 */
enum GdStatus gd_airy_zero(size_t n, double *result);

/**
 * Looks up a built-in species by name (`neutron`, `NH3`, `Cs-133`, `Rb-87`, `K-39`, `model`).
 *
 * # Safety
 * `name` must be null or a NUL-terminated string; `result` must be null or
 * point to a writable pointer.
 */
enum GdStatus gd_species_preset(const char *name, struct GdSpecies **result);

/**
 * Species with separate inertial and gravitational masses.
 *
 * # Safety
 * As for [`gd_species_preset`].
 */
enum GdStatus gd_species_new(const char *name,
                             double m_inertial,
                             double m_grav,
                             struct GdSpecies **result);

/**
 * Inertial mass of a species, or NaN for a null handle.
 *
 * # Safety
 * `species` must be null or a live handle.
 */
double gd_species_mass(const struct GdSpecies *species);

/**
 * # Safety
 * `species` must be null or a handle not yet freed.
 */
void gd_species_free(struct GdSpecies *species);

/**
 * Quasi-time map for total energy `energy` (zero at the plate), force
 * `force`, mass `mass` and Planck constant `hbar`.
 *
 * # Safety
 * `result` must be null or point to a writable pointer.
 */
enum GdStatus gd_map_new(double energy,
                         double force,
                         double mass,
                         double hbar,
                         struct GdMap **result);

/**
 * # Safety
 * `map` must be null or a handle not yet freed.
 */
void gd_map_free(struct GdMap *map);

/**
 * Classical turning point, or NaN for a null handle.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
double gd_map_turning_point(const struct GdMap *map);

/**
 * Quasi-time at height `z`. `classical` receives 1 on the real branch and 0
 * beyond the turning point; it may be null.
 *
 * # Safety
 * `map` must be a live handle; `tau` must point to a writable `GdComplex`;
 * `classical` must be null or writable.
 */
enum GdStatus gd_map_tau(const struct GdMap *map,
                         double z,
                         struct GdComplex *tau,
                         int32_t *classical);

/**
 * Height reached at real quasi-time `tau`.
 *
 * # Safety
 * `map` must be a live handle; `z` must point to a writable `double`.
 */
enum GdStatus gd_map_z(const struct GdMap *map, double tau, double *z);

/**
 * Paraxial amplitudes on an `nx × nz` grid below (or above) the plate.
 *
 * A single slit of width `width` is used when `half_separation` is zero,
 * otherwise two slits centred at `±half_separation`.
 *
 * # Safety
 * `map` must be a live handle; `result` must point to a writable pointer.
 */
enum GdStatus gd_pattern_grid(const struct GdMap *map,
                              double width,
                              double half_separation,
                              double x_min,
                              double x_max,
                              size_t nx,
                              double z_min,
                              double z_max,
                              size_t nz,
                              struct GdField **result);

/**
 * Number of grid nodes, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
size_t gd_field_len(const struct GdField *field);

/**
 * Copies the amplitudes, row-major in z then x, into `buffer`.
 *
 * # Safety
 * `field` must be a live handle; `buffer` must hold `capacity` elements.
 */
enum GdStatus gd_field_copy(const struct GdField *field, struct GdComplex *buffer, size_t capacity);

/**
 * # Safety
 * `field` must be null or a handle not yet freed.
 */
void gd_field_free(struct GdField *field);

/**
 * Focus depth and its response to `δg/g` and `δm_g/m_i` for a beam
 * entering the slit with kinetic energy `e_kin`.
 *
 * # Safety
 * `species` must be a live handle; `result` must point to a writable
 * `GdSensitivity`.
 */
enum GdStatus gd_sensitivity(const struct GdSpecies *species,
                             double g,
                             double e_kin,
                             double width,
                             double delta_g_over_g,
                             double delta_mg_over_mi,
                             uint32_t units_code,
                             uint32_t constant_code,
                             struct GdSensitivity *result);

/**
 * Fills `rows` with the beam-realization table at standard gravity.
 *
 * `count` always receives the number of rows; when `capacity` is too small
 * nothing is written and `GD_ERR_BUFFER` is returned.
 *
 * # Safety
 * `rows` must hold `capacity` elements (it may be null when `capacity` is
 * 0); `count` must point to a writable `size_t`.
 */
enum GdStatus gd_table1(uint32_t constant_code,
                        struct GdTableRow *rows,
                        size_t capacity,
                        size_t *count);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GRAVIDIFF_H */
