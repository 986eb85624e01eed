#ifndef CBR_H
#define CBR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes, plus argument errors.
 */
typedef enum CbrStatus {
  CbrOk = 0,
  CbrErrDomain = 1,
  CbrErrParse = 2,
  CbrErrNullArgument = 3,
  CbrErrInvalidUtf8 = 4,
} CbrStatus;

/**
 * An immutable diagram handle.
 */
typedef struct CbrDiagram CbrDiagram;

/**
 * An immutable representation handle.
 */
typedef struct CbrRepresentation CbrRepresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the most recent error on this thread. The pointer stays
 * valid until the next failing call on the same thread. Never null.
 */
const char *cbr_last_error_message(void);

/**
 * Parse a diagram from its JSON form.
 *
 * # Safety
 * `text` must be a valid nul-terminated string; `out` must be writable.
 */
enum CbrStatus cbr_diagram_from_json(const char *text, struct CbrDiagram **out);

/**
 * Parse a diagram from the one-line expression language.
 *
 * # Safety
 * `text` must be a valid nul-terminated string; `out` must be writable.
 */
enum CbrStatus cbr_diagram_from_expr(const char *text, struct CbrDiagram **out);

/**
 * Serialize a diagram to canonical JSON. Free the result with
 * `cbr_string_free`.
 *
 * # Safety
 * `d` must be a live diagram handle; `out` must be writable.
 */
enum CbrStatus cbr_diagram_to_json(const struct CbrDiagram *d, char **out);

/**
 * `out = second ∘ first` (the first argument is applied first).
 *
 * # Safety
 * `first` and `second` must be live diagram handles; `out` must be writable.
 */
enum CbrStatus cbr_diagram_compose(const struct CbrDiagram *first,
                                   const struct CbrDiagram *second,
                                   struct CbrDiagram **out);

/**
 * `out = left ⊗ right`.
 *
 * # Safety
 * `left` and `right` must be live diagram handles; `out` must be writable.
 */
enum CbrStatus cbr_diagram_tensor(const struct CbrDiagram *left,
                                  const struct CbrDiagram *right,
                                  struct CbrDiagram **out);

/**
 * Writes 1 to `out` if the diagrams are equal, 0 otherwise.
 *
 * # Safety
 * `a` and `b` must be live diagram handles; `out` must be writable.
 */
enum CbrStatus cbr_diagram_equal(const struct CbrDiagram *a,
                                 const struct CbrDiagram *b,
                                 int32_t *out);

/**
 * # Safety
 * `d` must be null or a handle not freed before.
 */
void cbr_diagram_free(struct CbrDiagram *d);

/**
 * Parse a representation from its JSON form.
 *
 * # Safety
 * `text` must be a valid nul-terminated string; `out` must be writable.
 */
enum CbrStatus cbr_representation_from_json(const char *text, struct CbrRepresentation **out);

/**
 * The representation with identity counit matrices of the given dimensions,
 * assigned to colors 0, 1, ….
 *
 * # Safety
 * `dims` must point to `len` readable entries; `out` must be writable.
 */
enum CbrStatus cbr_representation_standard(const uintptr_t *dims,
                                           uintptr_t len,
                                           struct CbrRepresentation **out);

/**
 * # Safety
 * `r` must be null or a handle not freed before.
 */
void cbr_representation_free(struct CbrRepresentation *r);

/**
 * Evaluate a diagram to its exact rational matrix, returned as JSON. Free
 * the result with `cbr_string_free`.
 *
 * # Safety
 * `rep` and `d` must be live handles; `out` must be writable.
 */
enum CbrStatus cbr_eval_to_json(const struct CbrRepresentation *rep,
                                const struct CbrDiagram *d,
                                char **out);

/**
 * Decide faithfulness for the dimension list. Writes 1 or 0 to `faithful`;
 * when unfaithful and `witness_json` is non-null, also writes the integer
 * witness vector as a JSON array (free with `cbr_string_free`), otherwise
 * writes null there.
 *
 * # Safety
 * `dims` must point to `len` readable entries; outputs must be writable.
 */
enum CbrStatus cbr_check_faithful(const uint64_t *dims,
                                  uintptr_t len,
                                  int32_t *faithful,
                                  char **witness_json);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not freed before.
 */
void cbr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CBR_H */
