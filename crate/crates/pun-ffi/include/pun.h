/* C interface to the pun property checker. */

#ifndef PUN_H
#define PUN_H

/* This file is generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of a C API call.
 */
typedef enum PunStatus {
  PUN_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PUN_STATUS_NULL_ARGUMENT = 1,
  /**
   * The source text was not valid UTF-8.
   */
  PUN_STATUS_INVALID_UTF8 = 2,
  PUN_STATUS_PARSE_ERROR = 3,
  PUN_STATUS_TYPE_ERROR = 4,
  PUN_STATUS_EVAL_ERROR = 5,
  /**
   * No argument-free definition with the requested name.
   */
  PUN_STATUS_NOT_FOUND = 6,
  /**
   * An internal invariant failed; the library state is unchanged.
   */
  PUN_STATUS_INTERNAL = 7,
} PunStatus;

/**
 * A parsed and typechecked pun program (opaque).
 */
typedef struct PunProgram PunProgram;

/**
 * Property-run settings; get defaults from [`pun_run_config_default`].
 */
typedef struct PunRunConfig {
  /**
   * Random tests per property.
   */
  uint32_t tests;
  /**
   * Generation seed; equal seeds give byte-identical reports.
   */
  uint64_t seed;
  /**
   * Largest generation size.
   */
  uint32_t max_size;
  /**
   * Evaluation step budget per test.
   */
  uint64_t fuel;
} PunRunConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The default run configuration: 50 tests, seed 0, max size 10, fuel
 * 100000.
 */
struct PunRunConfig pun_run_config_default(void);

/**
 * Parse and typecheck `source` (NUL-terminated pun text). On success,
 * writes a program handle to `out_program`. On failure, writes a rendered
 * diagnostic to `out_error` (when non-null); free it with
 * [`pun_string_free`].
 *
 * # Safety
 * `source` must point to a NUL-terminated string. `out_program` must be a
 * valid pointer. `out_error` may be null.
 */
enum PunStatus pun_program_new(const char *source,
                               struct PunProgram **out_program,
                               char **out_error);

/**
 * Release a program handle. Null is a no-op.
 *
 * # Safety
 * `program` must have come from [`pun_program_new`] and not been freed.
 */
void pun_program_free(struct PunProgram *program);

/**
 * Number of properties declared in the program.
 *
 * # Safety
 * `program` must be a live handle from [`pun_program_new`].
 */
uint32_t pun_program_property_count(const struct PunProgram *program);

/**
 * Run every property. Writes the full report (one block per property,
 * newline-terminated) to `out_report` and the number of properties that
 * did not pass to `out_failures`. A failing property still returns
 * `PUN_STATUS_OK`; inspect `out_failures`.
 *
 * # Safety
 * `program` must be a live handle; `config` must point to a valid
 * configuration. `out_report` and `out_failures` may be null.
 */
enum PunStatus pun_program_check(const struct PunProgram *program,
                                 const struct PunRunConfig *config,
                                 char **out_report,
                                 uint32_t *out_failures);

/**
 * Evaluate the argument-free definition `name` and write its printed
 * value to `out_value`. Evaluation failures (for instance out of fuel)
 * write the diagnostic to `out_error` and return `PUN_STATUS_EVAL_ERROR`.
 *
 * # Safety
 * `program` must be a live handle; `name` must be NUL-terminated.
 * `out_value` and `out_error` may be null.
 */
enum PunStatus pun_program_eval(const struct PunProgram *program,
                                const char *name,
                                uint64_t fuel,
                                char **out_value,
                                char **out_error);

/**
 * Free a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `string` must have been returned by a `pun_*` call and not been freed.
 */
void pun_string_free(char *string);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PUN_H */
