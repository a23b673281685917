#ifndef WIRETAP_H
#define WIRETAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; the nonzero values match the command-line exit codes where
// both exist.
typedef enum WtStatus {
  WT_STATUS_OK = 0,
  WT_STATUS_PARSE = 1,
  WT_STATUS_DISCONNECTED = 2,
  WT_STATUS_ASSUMPTION_VIOLATED = 3,
  WT_STATUS_CAP_EXCEEDED = 4,
  WT_STATUS_VERIFY_MISMATCH = 5,
  WT_STATUS_NULL_POINTER = 6,
  WT_STATUS_INVALID_ARGUMENT = 7,
  WT_STATUS_PANIC = 8,
} WtStatus;

// Opaque analysis handle.
typedef struct WtAnalysis WtAnalysis;

// Opaque graph handle.
typedef struct WtGraph WtGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *wt_last_error(void);

// Library version, static storage.
const char *wt_version(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void wt_string_free(char *s);

// Parses an edge list ("u v" per line, '#' comments).
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum WtStatus wt_graph_parse(const char *text, struct WtGraph **out);

// # Safety
// `graph` must be null or a handle from [`wt_graph_parse`], not yet freed.
void wt_graph_free(struct WtGraph *graph);

// # Safety
// `graph` must be a live handle; the outputs must be writable.
enum WtStatus wt_graph_size(const struct WtGraph *graph, size_t *vertices, size_t *edges);

// Game value `opt` as a reduced fraction "p/q".
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
enum WtStatus wt_strength(const struct WtGraph *graph, char **out);

// Full analysis. With `verify`, every oracle check runs with all caps set
// to `max_oracle_edges` (0 keeps the default caps); a failed check returns
// `WT_STATUS_VERIFY_MISMATCH` and still stores the analysis.
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
enum WtStatus wt_analyze(const struct WtGraph *graph,
                         bool verify,
                         size_t max_oracle_edges,
                         struct WtAnalysis **out);

// # Safety
// `analysis` must be null or a handle from [`wt_analyze`], not yet freed.
void wt_analysis_free(struct WtAnalysis *analysis);

// The analysis report as JSON, as printed by `wiretap analyze`.
//
// # Safety
// `analysis` must be a live handle; `out` must be writable.
enum WtStatus wt_analysis_json(const struct WtAnalysis *analysis, char **out);

// # Safety
// `analysis` must be a live handle; `out` must be writable.
enum WtStatus wt_analysis_opt(const struct WtAnalysis *analysis, char **out);

// Number of prime-partition elements and whether one is degenerate.
//
// # Safety
// `analysis` must be a live handle; the outputs must be writable.
enum WtStatus wt_analysis_partition_size(const struct WtAnalysis *analysis,
                                         size_t *elements,
                                         bool *has_degenerate);

// `kappa`; `WT_STATUS_ASSUMPTION_VIOLATED` when opt = 1.
//
// # Safety
// `analysis` must be a live handle; `out` must be writable.
enum WtStatus wt_analysis_kappa(const struct WtAnalysis *analysis, char **out);

// Nucleolus weight of `edge`.
//
// # Safety
// `analysis` must be a live handle; `out` must be writable.
enum WtStatus wt_analysis_nucleolus_weight(const struct WtAnalysis *analysis,
                                           size_t edge,
                                           char **out);

// Tests a distribution given as lines "edge_id p/q". `value` receives the
// minimum connected spanning subgraph weight.
//
// # Safety
// `graph` must be a live handle, `dist` a nul-terminated string and the
// outputs writable.
enum WtStatus wt_check_distribution(const struct WtGraph *graph,
                                    const char *dist,
                                    bool *maxmin,
                                    bool *pdist,
                                    char **value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WIRETAP_H */
