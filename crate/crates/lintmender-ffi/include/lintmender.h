/* C interface for lintmender. Strings returned through out-parameters are owned by the caller and must be released with lm_string_free. */

#ifndef LINTMENDER_H
#define LINTMENDER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes for every `lm_*` call.
 */
typedef enum LmStatus {
  LmStatus_Ok = 0,
  LmStatus_NullArgument = 1,
  LmStatus_InvalidUtf8 = 2,
  LmStatus_InvalidConfig = 3,
  LmStatus_LexError = 4,
  LmStatus_ParseError = 5,
  LmStatus_EditError = 6,
  LmStatus_DensityUndefined = 7,
  LmStatus_Panic = 8,
} LmStatus;

/**
 * Detection and repair options. Opaque: create with `lm_options_new`,
 * configure with the setters, release with `lm_options_free`.
 */
typedef struct LmOptions LmOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread, or null. Caller owns the string.
 */
char *lm_last_error(void);

/**
 * Release a string returned by any `lm_*` function.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by this library.
 */
void lm_string_free(char *s);

/**
 * Library version as a static string; do not free.
 */
const char *lm_version(void);

struct LmOptions *lm_options_new(void);

/**
 * # Safety
 * `opts` must be null or a pointer from `lm_options_new`.
 */
void lm_options_free(struct LmOptions *opts);

/**
 * Suffix appended to unsuffixed integer literals (default `i32`).
 *
 * # Safety
 * `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
 */
enum LmStatus lm_options_set_int_suffix(struct LmOptions *opts, const char *value);

/**
 * Suffix appended to unsuffixed float literals (default `f64`).
 *
 * # Safety
 * `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
 */
enum LmStatus lm_options_set_float_suffix(struct LmOptions *opts, const char *value);

/**
 * Comment body inserted above undocumented unsafe blocks.
 *
 * # Safety
 * `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
 */
enum LmStatus lm_options_set_safety_comment(struct LmOptions *opts, const char *value);

/**
 * Comma-separated subset of the native lints to run.
 *
 * # Safety
 * `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
 */
enum LmStatus lm_options_set_lints(struct LmOptions *opts, const char *value);

/**
 * Comma-separated lints whose suggestions are applied regardless of their
 * applicability tag.
 *
 * # Safety
 * `opts` comes from `lm_options_new`; `value` is a NUL-terminated string.
 */
enum LmStatus lm_options_set_promote(struct LmOptions *opts, const char *value);

/**
 * # Safety
 * `opts` comes from `lm_options_new`.
 */
enum LmStatus lm_options_set_public_only_debug(struct LmOptions *opts, bool value);

/**
 * # Safety
 * `opts` comes from `lm_options_new`.
 */
enum LmStatus lm_options_set_assume_integer_idents(struct LmOptions *opts, bool value);

/**
 * # Safety
 * `opts` comes from `lm_options_new`.
 */
enum LmStatus lm_options_set_max_rounds(struct LmOptions *opts, uint32_t rounds);

/**
 * Detect findings in one file. `out_json` receives a JSON array of
 * `{lint, line, lo, hi, message, fixable}` objects.
 *
 * # Safety
 * Pointer arguments follow the crate-wide rules: `opts` from
 * `lm_options_new`, strings NUL-terminated, `out_json` a valid location.
 */
enum LmStatus lm_scan(struct LmOptions *opts,
                      const char *name,
                      const char *content,
                      char **out_json);

/**
 * Repair one file's contents to a fixpoint. `out_content` receives the fixed
 * text; `out_rounds` and `out_converged` report how the fixpoint ended.
 *
 * # Safety
 * Pointer arguments follow the crate-wide rules.
 */
enum LmStatus lm_fix(struct LmOptions *opts,
                     const char *name,
                     const char *content,
                     char **out_content,
                     uint32_t *out_rounds,
                     bool *out_converged);

/**
 * Unified diff between `content` and its fixed form (empty string when
 * nothing changes).
 *
 * # Safety
 * Pointer arguments follow the crate-wide rules.
 */
enum LmStatus lm_diff(struct LmOptions *opts,
                      const char *name,
                      const char *content,
                      char **out_diff);

/**
 * Apply a diagnostics stream's admissible suggestions for one named file to
 * `content`. Machine-applicable suggestions always apply; promoted lints
 * apply regardless of their tag. `out_applied`/`out_skipped` receive the
 * suggestion counts (skipped includes other files' suggestions).
 *
 * # Safety
 * Pointer arguments follow the crate-wide rules.
 */
enum LmStatus lm_apply_suggestions(struct LmOptions *opts,
                                   const char *stream,
                                   const char *file_name,
                                   const char *content,
                                   char **out_content,
                                   uintptr_t *out_applied,
                                   uintptr_t *out_skipped);

/**
 * Warnings-per-KLOC. `out_reported` receives the truncated integer;
 * `out_exact` a 4-decimal string.
 *
 * # Safety
 * Out-pointers must be valid locations or null.
 */
enum LmStatus lm_density(uint64_t warnings,
                         uint64_t lines,
                         uint64_t *out_reported,
                         char **out_exact);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINTMENDER_H */
