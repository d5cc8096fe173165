#ifndef STREAMTABLE_H
#define STREAMTABLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum StStatus {
  StOk = 0,
  StNullPointer = 1,
  StInvalidUtf8 = 2,
  StParseError = 3,
  StDomainError = 4,
  StPanic = 5,
} StStatus;

/**
 * Search objectives for `st_search_brute`.
 */
typedef enum StObjective {
  /**
   * Minimize excess area over no-split layouts.
   */
  StMinExcess = 0,
  /**
   * Minimize splits over zero-excess packed layouts.
   */
  StMinSplits = 1,
} StObjective;

/**
 * Opaque layout handle.
 */
typedef struct StLayout StLayout;

/**
 * Opaque table handle.
 */
typedef struct StTable StTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *st_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by a `st_*` function and not yet
 * freed; passing anything else is undefined behavior.
 */
void st_string_free(char *s);

/**
 * Parses a table from CSV text (header row of column labels, then one row
 * label plus weights per line; weights accept integers, `p/q`, and exact
 * decimals).
 *
 * # Safety
 * `csv` must be a valid NUL-terminated string; `out` must be a valid
 * pointer.
 */
enum StStatus st_table_parse_csv(const char *csv, struct StTable **out);

/**
 * # Safety
 * `table` must come from this library and not be freed twice.
 */
void st_table_free(struct StTable *table);

/**
 * Row count, or 0 when `table` is null.
 *
 * # Safety
 * `table` must be a live handle from this library or null.
 */
uintptr_t st_table_rows(const struct StTable *table);

/**
 * Column count, or 0 when `table` is null.
 *
 * # Safety
 * `table` must be a live handle from this library or null.
 */
uintptr_t st_table_cols(const struct StTable *table);

/**
 * Serializes a table to canonical CSV.
 *
 * # Safety
 * `table` must be a live handle; `out` must be valid. The result is freed
 * with `st_string_free`.
 */
enum StStatus st_table_to_csv(const struct StTable *table, char **out);

/**
 * Computes the greedy layout (no split, minimum excess area for the given
 * heights and the table's row order). `heights_spec` uses the same grammar
 * as the CLI: `uniform:R`, `prop:H`, or `explicit:R1,R2,...`.
 *
 * # Safety
 * `table` must be a live handle; `heights_spec` a valid string; `out` valid.
 */
enum StStatus st_layout_greedy(const struct StTable *table,
                               const char *heights_spec,
                               struct StLayout **out);

/**
 * Runs height local improvement from the given starting heights and returns
 * the improved layout.
 *
 * # Safety
 * Same contracts as `st_layout_greedy`.
 */
enum StStatus st_layout_improve(const struct StTable *table,
                                const char *heights_spec,
                                uintptr_t max_iters,
                                struct StLayout **out);

/**
 * # Safety
 * `layout` must come from this library and not be freed twice.
 */
void st_layout_free(struct StLayout *layout);

/**
 * Excess area as an exact `p/q` string.
 *
 * # Safety
 * `layout` must be a live handle; `out` valid; free the result with
 * `st_string_free`.
 */
enum StStatus st_layout_excess(const struct StLayout *layout, char **out);

/**
 * Number of splits in the layout.
 *
 * # Safety
 * `layout` must be a live handle; `out` valid.
 */
enum StStatus st_layout_splits(const struct StLayout *layout, uint64_t *out);

/**
 * Serializes a layout to the documented JSON schema.
 *
 * # Safety
 * `layout` must be a live handle; `out` valid; free the result with
 * `st_string_free`.
 */
enum StStatus st_layout_to_json(const struct StLayout *layout, char **out);

/**
 * Parses and revalidates a layout JSON document.
 *
 * # Safety
 * `json` must be a valid string; `out` valid.
 */
enum StStatus st_layout_from_json(const char *json, struct StLayout **out);

/**
 * Renders a layout as SVG. `smooth_fraction` in (0, 0.5] rounds stream
 * corners by that fraction of the smallest row height; pass 0 or a negative
 * value for rectilinear output.
 *
 * # Safety
 * `layout` must be a live handle; `out` valid; free the result with
 * `st_string_free`.
 */
enum StStatus st_layout_render_svg(const struct StLayout *layout,
                                   double scale,
                                   double smooth_fraction,
                                   bool show_grid,
                                   bool labels,
                                   char **out);

/**
 * Exhaustive row-permutation search; the result is the SearchResult JSON
 * (`order`, `score`, `objective`, `optimal`, `evaluations`). `delta` is the
 * uniform row height as a rational string; `cap` bounds the factorial
 * search (pass 0 for the default of 9).
 *
 * # Safety
 * `table` must be a live handle; `delta` a valid string; `out` valid; free
 * the result with `st_string_free`.
 */
enum StStatus st_search_brute(const struct StTable *table,
                              const char *delta,
                              enum StObjective objective,
                              uintptr_t cap,
                              char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STREAMTABLE_H */
