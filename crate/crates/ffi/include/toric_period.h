#ifndef TORIC_PERIOD_H
#define TORIC_PERIOD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum TpStatus {
  TP_STATUS_OK = 0,
  TP_STATUS_NULL_POINTER = 1,
  TP_STATUS_INVALID_ARGUMENT = 2,
  TP_STATUS_PARSE = 3,
  TP_STATUS_PRECISION = 4,
  TP_STATUS_BUDGET = 5,
  TP_STATUS_INCOMPATIBLE_CHARACTERS = 6,
  TP_STATUS_UNSUPPORTED = 7,
  TP_STATUS_NOT_RATIONAL = 8,
  TP_STATUS_INTERNAL = 99,
} TpStatus;

/*
 A character of `E^×`.
 */
typedef struct TpCharacter TpCharacter;

/*
 `Q_p(√D)` at a fixed working precision.
 */
typedef struct TpField TpField;

/*
 The supercuspidal representation induced from a character `θ`.
 */
typedef struct TpRepresentation TpRepresentation;

/*
 An exact period value with its refinement certificate.
 */
typedef struct TpValue TpValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread (empty after success).
 The pointer stays valid until the next library call on this thread.
 */
const char *tp_last_error(void);

/*
 Library version as a static string.
 */
const char *tp_version(void);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void tp_string_free(char *s);

/*
 Creates `Q_p(√d)` with `precision` p-adic digits.

 # Safety
 `out` must be a valid pointer to writable storage for one handle.
 */
enum TpStatus tp_field_new(uint64_t p, uint32_t precision, int64_t d, struct TpField **out);

/*
 # Safety
 `h` must be null or a handle from `tp_field_new`, not yet freed.
 */
void tp_field_free(struct TpField *h);

/*
 Parses a character written as `LEVEL:UNIF:a,b=ANGLE;...`.

 # Safety
 `field` must be a live field handle, `spec` a NUL-terminated string and
 `out` writable.
 */
enum TpStatus tp_character_parse(const struct TpField *field,
                                 const char *spec,
                                 struct TpCharacter **out);

/*
 # Safety
 `chi` must be a live character handle and `out` writable.
 */
enum TpStatus tp_character_conductor(const struct TpCharacter *chi, uint32_t *out);

/*
 # Safety
 `h` must be null or a handle from `tp_character_parse`, not yet freed.
 */
void tp_character_free(struct TpCharacter *h);

/*
 Builds the representation compactly induced from `theta`.

 # Safety
 `theta` must be a live character handle and `out` writable.
 */
enum TpStatus tp_representation_new(const struct TpCharacter *theta, struct TpRepresentation **out);

/*
 Conductor exponent `c(π)`.

 # Safety
 `rep` must be a live handle and `out` writable.
 */
enum TpStatus tp_representation_conductor(const struct TpRepresentation *rep, uint32_t *out);

/*
 # Safety
 `h` must be null or a handle from `tp_representation_new`, not yet freed.
 */
void tp_representation_free(struct TpRepresentation *h);

/*
 `{φ₁, φ₂}` for test vectors written `u,v;u,v;...`. `vector2` may be null
 to pair `φ₁` with itself. `cyclo_cap = 0` selects the default cap.

 # Safety
 Handles must be live, strings NUL-terminated (or null for `vector2`), and
 `out` writable.
 */
enum TpStatus tp_period_integral(const struct TpRepresentation *rep,
                                 const struct TpCharacter *chi,
                                 const char *vector1,
                                 const char *vector2,
                                 uint32_t max_refine,
                                 uint64_t cyclo_cap,
                                 struct TpValue **out);

/*
 Floating-point approximation (advisory).

 # Safety
 `v` must be a live value handle; `re` and `im` writable.
 */
enum TpStatus tp_value_approx(const struct TpValue *v, double *re, double *im);

/*
 The refinement level `m` and whether levels `m`, `m+1` agreed.

 # Safety
 `v` must be a live value handle; `m` and `equal` writable.
 */
enum TpStatus tp_value_certificate(const struct TpValue *v, uint32_t *m, bool *equal);

/*
 Exact value as JSON `{"order": n, "coeffs": [...]}`; free with
 `tp_string_free`.

 # Safety
 `v` must be a live value handle and `out` writable.
 */
enum TpStatus tp_value_to_json(const struct TpValue *v, char **out);

/*
 The value as a fraction of 64-bit integers, if it is rational and fits.

 # Safety
 `v` must be a live value handle; `num` and `den` writable.
 */
enum TpStatus tp_value_rational(const struct TpValue *v, int64_t *num, int64_t *den);

/*
 # Safety
 `h` must be null or a value handle, not yet freed.
 */
void tp_value_free(struct TpValue *h);

/*
 `β⁰₃` for `x³ + y³ = p`, `p ≡ 4, 7 mod 9`, as `num/den`.

 # Safety
 `num` and `den` must be writable.
 */
enum TpStatus tp_sylvester_beta(uint64_t p, uint32_t precision, int64_t *num, int64_t *den);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORIC_PERIOD_H */
