#ifndef SUGENO_H
#define SUGENO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Values accepted by the `formula` argument of [`sugeno_eval`].
typedef enum SugenoFormula {
  SUGENO_FORMULA_LEVEL = 0,
  SUGENO_FORMULA_SUBSET = 1,
  SUGENO_FORMULA_SORTED = 2,
} SugenoFormula;

// Result of every fallible call.
typedef enum SugenoStatus {
  // The value was computed or the property holds.
  SUGENO_STATUS_OK = 0,
  // The property is violated; a witness is available.
  SUGENO_STATUS_VIOLATED = 1,
  // Malformed input, mismatched chains or arity, or an exceeded cap.
  SUGENO_STATUS_INPUT_ERROR = 2,
  // A required pointer argument was null.
  SUGENO_STATUS_NULL_POINTER = 3,
  // A string argument was not valid UTF-8.
  SUGENO_STATUS_INVALID_UTF8 = 4,
  // An internal error; the library state is still usable.
  SUGENO_STATUS_PANIC = 5,
} SugenoStatus;

typedef struct SugenoCapacity SugenoCapacity;

typedef struct SugenoEpimorphism SugenoEpimorphism;

typedef struct SugenoTable SugenoTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message of the last failed call on this thread, or null.
//
// The pointer stays valid until the next call into this library on the
// same thread.
const char *sugeno_last_error(void);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void sugeno_string_free(char *s);

// Parses a capacity document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum SugenoStatus sugeno_capacity_from_json(const char *json, struct SugenoCapacity **out);

// # Safety
// `capacity` must be a live handle; `out` must be a valid pointer.
enum SugenoStatus sugeno_capacity_to_json(const struct SugenoCapacity *capacity, char **out);

// Number of criteria, or 0 for a null handle.
//
// # Safety
// `capacity` must be null or a live handle.
size_t sugeno_capacity_arity(const struct SugenoCapacity *capacity);

// # Safety
// `capacity` must be null or a handle not yet freed.
void sugeno_capacity_free(struct SugenoCapacity *capacity);

// Evaluates the integral of a comma-separated input vector; the value is
// written in shortest exact form.
//
// # Safety
// `capacity` must be a live handle, `input` a NUL-terminated string and
// `out` a valid pointer.
enum SugenoStatus sugeno_eval(const struct SugenoCapacity *capacity,
                              const char *input,
                              int formula,
                              char **out);

// Materializes the table of a capacity on a finite chain.
//
// # Safety
// `capacity` must be a live handle; `out` must be a valid pointer.
enum SugenoStatus sugeno_table_from_capacity(const struct SugenoCapacity *capacity,
                                             struct SugenoTable **out);

// Parses a table document; non-monotone tables are input errors.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum SugenoStatus sugeno_table_from_json(const char *json, struct SugenoTable **out);

// # Safety
// `table` must be a live handle; `out` must be a valid pointer.
enum SugenoStatus sugeno_table_to_json(const struct SugenoTable *table, char **out);

// # Safety
// `table` must be null or a handle not yet freed.
void sugeno_table_free(struct SugenoTable *table);

// Recognizes a Sugeno integral. Returns `SUGENO_STATUS_OK` and the
// capacity, or `SUGENO_STATUS_VIOLATED` and a witness document.
//
// # Safety
// `table` must be a live handle and `out_capacity` a valid pointer;
// `out_witness` may be null.
enum SugenoStatus sugeno_recognize(const struct SugenoTable *table,
                                   struct SugenoCapacity **out_capacity,
                                   char **out_witness);

// Checks one property by name: `sugeno`, `idempotent`,
// `comonotone-maxitive`, `min-homogeneous`, `median-decomposable`,
// `compatible` or `scale-invariant`.
//
// # Safety
// `table` must be a live handle and `property` a NUL-terminated string;
// `out_witness` may be null.
enum SugenoStatus sugeno_check(const struct SugenoTable *table,
                               const char *property,
                               char **out_witness);

// A built-in epimorphism: `decimal-half-up`, `centesimal-half-up`,
// `linguistic-bmge` or `identity` (on the unit interval).
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be a valid pointer.
enum SugenoStatus sugeno_epimorphism_builtin(const char *name, struct SugenoEpimorphism **out);

// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum SugenoStatus sugeno_epimorphism_from_json(const char *json, struct SugenoEpimorphism **out);

// # Safety
// `epimorphism` must be a live handle; `out` must be a valid pointer.
enum SugenoStatus sugeno_epimorphism_to_json(const struct SugenoEpimorphism *epimorphism,
                                             char **out);

// # Safety
// `epimorphism` must be null or a handle not yet freed.
void sugeno_epimorphism_free(struct SugenoEpimorphism *epimorphism);

// The capacity `φ(m)(I) = φ(m(I))` on the target chain.
//
// # Safety
// Both handles must be live; `out` must be a valid pointer.
enum SugenoStatus sugeno_pushforward(const struct SugenoEpimorphism *epimorphism,
                                     const struct SugenoCapacity *capacity,
                                     struct SugenoCapacity **out);

// Compares `φ(Su_m(x))` with `Su_φ(m)(φ(x))` and writes both sides as a
// JSON document. Returns `SUGENO_STATUS_VIOLATED` when they differ.
//
// # Safety
// Both handles must be live, `input` a NUL-terminated string and `out` a
// valid pointer.
enum SugenoStatus sugeno_map(const struct SugenoEpimorphism *epimorphism,
                             const struct SugenoCapacity *capacity,
                             const char *input,
                             char **out);

// Exhaustive verification on the `chain_size`-chain: `theorem1`
// (compatible tables are Sugeno tables), `theorem2` (scale invariance) or
// `prop1` (congruences are interval partitions; `arity` is ignored).
// `max_grid` caps the grid of enumerated tables. The report is written as
// JSON; `SUGENO_STATUS_VIOLATED` means the statement failed on the instance.
//
// # Safety
// `which` must be a NUL-terminated string; `out` must be a valid pointer.
enum SugenoStatus sugeno_verify(const char *which,
                                size_t chain_size,
                                size_t arity,
                                size_t max_grid,
                                char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUGENO_H */
