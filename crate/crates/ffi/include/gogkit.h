#ifndef GOGKIT_H
#define GOGKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GogStatus {
  GOG_STATUS_OK = 0,
  GOG_STATUS_NULL_POINTER = 1,
  GOG_STATUS_INVALID_UTF8 = 2,
  GOG_STATUS_PARSE_ERROR = 3,
  GOG_STATUS_INVALID_INPUT = 4,
  GOG_STATUS_UNPRESENTABLE = 5,
  GOG_STATUS_ATTACHMENT_UNDECIDABLE = 6,
  GOG_STATUS_ATTACHMENT_FAILED = 7,
  GOG_STATUS_INVALID_MARKING = 8,
  GOG_STATUS_BAD_PARAMETER = 9,
  GOG_STATUS_PANIC = 10,
} GogStatus;

typedef enum GogTriState {
  GOG_TRI_STATE_YES = 0,
  GOG_TRI_STATE_NO = 1,
  GOG_TRI_STATE_UNKNOWN = 2,
} GogTriState;

/**
 * A parsed graph of groups.
 */
typedef struct GogGraph GogGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * The pointer stays valid until the next call on this thread.
 */
const char *gog_last_error(void);

/**
 * Parses `.gog` text. `lenient` keeps unknown sections and keys.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GogStatus gog_graph_parse(const char *text, bool lenient, struct GogGraph **out);

/**
 * # Safety
 * `g` must come from this library and not be used afterwards. Null is ignored.
 */
void gog_graph_free(struct GogGraph *g);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void gog_string_free(char *s);

/**
 * Canonical `.gog` text of `g`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GogStatus gog_graph_serialize(const struct GogGraph *g, char **out);

/**
 * # Safety
 * `g` must be a live handle; pointers must be valid.
 */
enum GogStatus gog_graph_counts(const struct GogGraph *g, size_t *vertices, size_t *edges);

/**
 * Counts hard errors and undecided checks.
 *
 * # Safety
 * `g` must be a live handle; pointers must be valid.
 */
enum GogStatus gog_graph_validate(const struct GogGraph *g, size_t *errors, size_t *unchecked);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GogStatus gog_is_minimal(const struct GogGraph *g, enum GogTriState *out);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GogStatus gog_is_reduced(const struct GogGraph *g, enum GogTriState *out);

/**
 * # Safety
 * Both handles must be live and `out` a valid pointer.
 */
enum GogStatus gog_equivalent(const struct GogGraph *a,
                              const struct GogGraph *b,
                              enum GogTriState *out);

/**
 * Collapses the `count` named edges into a new graph.
 *
 * # Safety
 * `g` must be a live handle, `edges` an array of `count` strings, `out` valid.
 */
enum GogStatus gog_graph_collapse(const struct GogGraph *g,
                                  const char *const *edges,
                                  size_t count,
                                  struct GogGraph **out);

/**
 * Refines `g` using refinement-data text.
 *
 * # Safety
 * `g` must be a live handle, `data` a NUL-terminated string, `out` valid.
 */
enum GogStatus gog_graph_refine(const struct GogGraph *g, const char *data, struct GogGraph **out);

/**
 * Builds member `n` of an integer-parameter family.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out` valid.
 */
enum GogStatus gog_family_graph(const char *id, uint64_t n, struct GogGraph **out);

/**
 * The certificate of member `n` as `key: value` lines, e.g. `index: 5`.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out` valid.
 */
enum GogStatus gog_family_certificate(const char *id, uint64_t n, char **out);

/**
 * Number of sandwich classes over `<sub>` in the ambient group.
 * `ambient` reads `m` or `m / (r1), (r2)`; `sub` reads `(a, b), (c, d)`.
 *
 * # Safety
 * Strings must be NUL-terminated and `out` valid.
 */
enum GogStatus gog_sandwich_classes(const char *ambient, const char *sub, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GOGKIT_H */
