#ifndef PLAP_H
#define PLAP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum PlapStatus {
  PLAP_STATUS_OK = 0,
  PLAP_STATUS_NULL_POINTER = 1,
  PLAP_STATUS_INVALID_ARGUMENT = 2,
  PLAP_STATUS_INVALID_GRAPH = 3,
  PLAP_STATUS_PARSE = 4,
  PLAP_STATUS_NO_BOUNDARY = 5,
  PLAP_STATUS_TOO_LARGE = 6,
  PLAP_STATUS_NOT_CONVERGED = 7,
  PLAP_STATUS_INTERNAL = 8,
} PlapStatus;

/**
 * Opaque first-eigenpair handle.
 */
typedef struct PlapEigenResult PlapEigenResult;

/**
 * Opaque graph handle.
 */
typedef struct PlapGraph PlapGraph;

/**
 * Solver parameters; start from [`plap_solver_options_default`].
 */
typedef struct PlapSolverOptions {
  double p;
  double tol_residual;
  double tol_lambda_rel;
  uint64_t max_iterations;
  uint64_t random_starts;
  uint64_t seed;
} PlapSolverOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *plap_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *plap_version(void);

/**
 * Builds a graph on `n` vertices from `edge_count` pairs stored flat in
 * `edges` (`u0, v0, u1, v1, ...`).
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values (or be null when
 * `edge_count` is zero); `out` must be valid for writes.
 */
enum PlapStatus plap_graph_from_edges(uint32_t n,
                                      const uint32_t *edges,
                                      size_t edge_count,
                                      struct PlapGraph **out);

/**
 * Parses an edge-list or JSON graph.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum PlapStatus plap_graph_parse(const char *text, struct PlapGraph **out);

/**
 * Tadpole `T_{n,i}`: a cycle on `i` vertices with a pendant path, `n`
 * vertices in total.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PlapStatus plap_graph_tadpole(uint32_t n, uint32_t i, struct PlapGraph **out);

/**
 * Path on `n` vertices.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PlapStatus plap_graph_path(uint32_t n, struct PlapGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library not yet freed.
 */
void plap_graph_free(struct PlapGraph *g);

/**
 * Vertex count; zero for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t plap_graph_vertex_count(const struct PlapGraph *g);

/**
 * Edge count; zero for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t plap_graph_edge_count(const struct PlapGraph *g);

/**
 * Exact Dirichlet Cheeger constant as a reduced fraction.
 *
 * # Safety
 * `g` must be a live handle; `num` and `den` must be valid for writes.
 */
enum PlapStatus plap_cheeger(const struct PlapGraph *g, uint64_t *num, uint64_t *den);

/**
 * Default solver parameters for exponent `p`.
 */
struct PlapSolverOptions plap_solver_options_default(double p);

/**
 * First Dirichlet eigenpair of the p-Laplacian. On `NotConverged` the best
 * iterate is still written to `out` (with `converged` false); on any other
 * failure `out` is set to null.
 *
 * # Safety
 * `g` and `opts` must be valid; `out` must be valid for writes.
 */
enum PlapStatus plap_first_eigenpair(const struct PlapGraph *g,
                                     const struct PlapSolverOptions *opts,
                                     struct PlapEigenResult **out);

/**
 * # Safety
 * `r` must be null or a handle from this library not yet freed.
 */
void plap_eigen_free(struct PlapEigenResult *r);

/**
 * Eigenvalue; NaN for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
double plap_eigen_lambda(const struct PlapEigenResult *r);

/**
 * Sup-norm residual of the eigen-equation over the interior; NaN for a null
 * handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
double plap_eigen_residual(const struct PlapEigenResult *r);

/**
 * Whether the residual certificate holds; false for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
bool plap_eigen_converged(const struct PlapEigenResult *r);

/**
 * Length of the eigenfunction (the graph's vertex count).
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t plap_eigen_len(const struct PlapEigenResult *r);

/**
 * Copies the eigenfunction into `buf`, which must hold at least
 * [`plap_eigen_len`] values.
 *
 * # Safety
 * `r` must be a live handle; `buf` must be valid for `len` writes.
 */
enum PlapStatus plap_eigen_function(const struct PlapEigenResult *r, double *buf, size_t len);

/**
 * The eigenpair as JSON; free with [`plap_string_free`].
 *
 * # Safety
 * `r` must be a live handle; `out` must be valid for writes.
 */
enum PlapStatus plap_eigen_to_json(const struct PlapEigenResult *r, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void plap_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLAP_H */
