#ifndef TCLAB_H
#define TCLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdint.h>
#include <stddef.h>

typedef enum TclabEngine {
  TCLAB_ENGINE_SEMI_NAIVE = 0,
  TCLAB_ENGINE_MIN_INCREMENT = 1,
  TCLAB_ENGINE_TOP_DOWN = 2,
  TCLAB_ENGINE_GROUND = 3,
} TclabEngine;

typedef enum TclabFamily {
  TCLAB_FAMILY_CMPL = 0,
  TCLAB_FAMILY_MAX_ACYC = 1,
  TCLAB_FAMILY_CYC = 2,
  TCLAB_FAMILY_CYC_EXTRA = 3,
  TCLAB_FAMILY_PATH = 4,
  TCLAB_FAMILY_PATH_DISJ = 5,
  TCLAB_FAMILY_GRID = 6,
  TCLAB_FAMILY_BIN_TREE = 7,
  TCLAB_FAMILY_BIN_TREE_REV = 8,
  TCLAB_FAMILY_X = 9,
  TCLAB_FAMILY_Y = 10,
  TCLAB_FAMILY_W = 11,
} TclabFamily;

typedef enum TclabFormat {
  TCLAB_FORMAT_TSV = 0,
  TCLAB_FORMAT_PROLOG = 1,
  TCLAB_FORMAT_ASP = 2,
} TclabFormat;

typedef enum TclabPhase {
  TCLAB_PHASE_LOAD_RULES = 0,
  TCLAB_PHASE_READ_DATA = 1,
  TCLAB_PHASE_QUERY = 2,
  TCLAB_PHASE_GROUND = 3,
  TCLAB_PHASE_SOLVE = 4,
  TCLAB_PHASE_WRITE_RES = 5,
} TclabPhase;

typedef enum TclabStatus {
  TCLAB_STATUS_OK = 0,
  TCLAB_STATUS_NULL_POINTER = 1,
  TCLAB_STATUS_INVALID_SPEC = 2,
  TCLAB_STATUS_PARSE_ERROR = 3,
  TCLAB_STATUS_IO = 4,
  TCLAB_STATUS_INTEGRITY = 5,
  TCLAB_STATUS_INVALID_ARGUMENT = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  TCLAB_STATUS_INTERNAL = 7,
} TclabStatus;

typedef enum TclabVariant {
  TCLAB_VARIANT_LEFT = 0,
  TCLAB_VARIANT_RIGHT = 1,
  TCLAB_VARIANT_DOUBLE = 2,
} TclabVariant;

/**
 * Opaque set of `edge` facts.
 */
typedef struct TclabEdges TclabEdges;

/**
 * Opaque outcome of one engine run.
 */
typedef struct TclabResult TclabResult;

typedef struct TclabPair {
  uint32_t source;
  uint32_t target;
} TclabPair;

/**
 * A graph family instance. Parameters the family does not take are ignored.
 */
typedef struct TclabSpec {
  /**
   * A `TclabFamily` value.
   */
  uint32_t family;
  uint64_t n;
  uint64_t k;
  uint64_t h;
} TclabSpec;

typedef struct TclabInstrumentation {
  uint64_t base_firings;
  uint64_t rec_firings;
  uint64_t probes;
  uint64_t iterations;
  uint64_t duplicate_derivations;
  uint64_t tables_created;
} TclabInstrumentation;

typedef struct TclabPrediction {
  uint64_t vertices;
  uint64_t edges;
  uint64_t paths;
  uint64_t combos_left;
  uint64_t combos_right;
  uint64_t combos_double;
} TclabPrediction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failed call on this thread, or NULL if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *tclab_last_error_message(void);

/**
 * Creates an empty edge set.
 */
struct TclabEdges *tclab_edges_new(void);

/**
 * Releases an edge set. NULL is ignored.
 *
 * # Safety
 * `edges` must be NULL or a handle from this library not yet freed.
 */
void tclab_edges_free(struct TclabEdges *edges);

/**
 * Adds `edge(source, target)`. Vertex ids must be at least 1.
 *
 * # Safety
 * `edges` must be NULL or a live handle.
 */
enum TclabStatus tclab_edges_insert(struct TclabEdges *edges, uint32_t source, uint32_t target);

/**
 * # Safety
 * `edges` must be NULL or a live handle; `out_len` must be NULL or writable.
 */
enum TclabStatus tclab_edges_len(const struct TclabEdges *edges, size_t *out_len);

/**
 * Copies the edges in `(source, target)` order into `out`, which must hold
 * at least `tclab_edges_len` pairs.
 *
 * # Safety
 * `edges` must be NULL or a live handle; `out` must be NULL or point to
 * `capacity` writable pairs.
 */
enum TclabStatus tclab_edges_copy(const struct TclabEdges *edges,
                                  struct TclabPair *out,
                                  size_t capacity);

/**
 * Generates the edges of a family instance into a new handle.
 *
 * # Safety
 * `spec` must be NULL or readable; `out` must be NULL or writable.
 */
enum TclabStatus tclab_generate(const struct TclabSpec *spec, struct TclabEdges **out);

/**
 * Reads an edge fact file into a new handle.
 *
 * # Safety
 * `path` must be NULL or a NUL-terminated string; `out` must be NULL or
 * writable.
 */
enum TclabStatus tclab_edges_read(const char *path, uint32_t format, struct TclabEdges **out);

/**
 * Writes the edges as a fact file.
 *
 * # Safety
 * `edges` must be NULL or a live handle; `path` must be NULL or a
 * NUL-terminated string.
 */
enum TclabStatus tclab_edges_write(const struct TclabEdges *edges,
                                   const char *path,
                                   uint32_t format);

/**
 * Runs one engine on `edges` and stores the outcome in a new handle.
 *
 * # Safety
 * `edges` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum TclabStatus tclab_evaluate(const struct TclabEdges *edges,
                                uint32_t engine,
                                uint32_t variant,
                                struct TclabResult **out);

/**
 * # Safety
 * `result` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum TclabStatus tclab_result_instrumentation(const struct TclabResult *result,
                                              struct TclabInstrumentation *out);

/**
 * Wall time of one phase in milliseconds; 0 for phases the engine does not
 * have.
 *
 * # Safety
 * `result` must be NULL or a live handle; `out_ms` must be NULL or writable.
 */
enum TclabStatus tclab_result_phase_ms(const struct TclabResult *result,
                                       uint32_t phase,
                                       double *out_ms);

/**
 * # Safety
 * `result` must be NULL or a live handle; `out_len` must be NULL or writable.
 */
enum TclabStatus tclab_result_paths_len(const struct TclabResult *result, size_t *out_len);

/**
 * Copies the derived `path` pairs in `(source, target)` order.
 *
 * # Safety
 * `result` must be NULL or a live handle; `out` must be NULL or point to
 * `capacity` writable pairs.
 */
enum TclabStatus tclab_result_paths_copy(const struct TclabResult *result,
                                         struct TclabPair *out,
                                         size_t capacity);

/**
 * Releases a result. NULL is ignored.
 *
 * # Safety
 * `result` must be NULL or a handle from this library not yet freed.
 */
void tclab_result_free(struct TclabResult *result);

/**
 * Closed-form counts for a family instance.
 *
 * # Safety
 * `spec` must be NULL or readable; `out` must be NULL or writable.
 */
enum TclabStatus tclab_predict(const struct TclabSpec *spec, struct TclabPrediction *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TCLAB_H */
