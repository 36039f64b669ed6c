#ifndef DISPERSE_H
#define DISPERSE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Zero is success.
 */
typedef enum DisperseStatus {
  DISPERSE_STATUS_OK = 0,
  DISPERSE_STATUS_NULL_POINTER = 1,
  DISPERSE_STATUS_PARSE = 2,
  DISPERSE_STATUS_NOT_A_TREE = 3,
  DISPERSE_STATUS_INVALID_ARGUMENT = 4,
  DISPERSE_STATUS_OVERFLOW = 5,
  DISPERSE_STATUS_UTF8 = 6,
  DISPERSE_STATUS_INTERNAL = 7,
  DISPERSE_STATUS_PANIC = 8,
} DisperseStatus;

/**
 * Opaque unweighted answer handle.
 */
typedef struct DisperseAnswer DisperseAnswer;

/**
 * Opaque tree handle.
 */
typedef struct DisperseTree DisperseTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *disperse_last_error(void);

/**
 * Static description of a status code.
 */
const char *disperse_status_str(enum DisperseStatus status);

/**
 * Parses a tree from the text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DisperseStatus disperse_tree_parse(const char *text, struct DisperseTree **out);

/**
 * Builds a tree from `n - 1` edges `(us[i], vs[i], lens[i])`. `weights` may
 * be null (all ones) or point to `n` values.
 *
 * # Safety
 * The edge arrays must hold `n - 1` elements (none if `n <= 1`), `weights`
 * must be null or hold `n`, and `out` must be valid.
 */
enum DisperseStatus disperse_tree_from_edges(size_t n,
                                             const size_t *us,
                                             const size_t *vs,
                                             const uint64_t *lens,
                                             size_t root,
                                             const uint64_t *weights,
                                             struct DisperseTree **out);

/**
 * Releases a tree. Null is ignored.
 *
 * # Safety
 * `tree` must come from this library and not be freed twice.
 */
void disperse_tree_free(struct DisperseTree *tree);

/**
 * Node count, or 0 for null.
 *
 * # Safety
 * `tree` must be null or a live handle.
 */
size_t disperse_tree_len(const struct DisperseTree *tree);

/**
 * Largest λ such that `k` nodes are pairwise at distance `>= λ`.
 *
 * # Safety
 * `tree` must be a live handle and `out` valid.
 */
enum DisperseStatus disperse_optimize(const struct DisperseTree *tree,
                                      size_t k,
                                      struct DisperseAnswer **out);

/**
 * # Safety
 * `answer` must be null or a live handle.
 */
uint64_t disperse_answer_lambda(const struct DisperseAnswer *answer);

/**
 * # Safety
 * `answer` must be null or a live handle.
 */
uint64_t disperse_answer_ft_calls(const struct DisperseAnswer *answer);

/**
 * Witness size.
 *
 * # Safety
 * `answer` must be null or a live handle.
 */
size_t disperse_answer_witness_len(const struct DisperseAnswer *answer);

/**
 * Copies up to `cap` witness ids (ascending) into `buf`; returns the number
 * copied.
 *
 * # Safety
 * `answer` must be a live handle and `buf` hold `cap` elements.
 */
size_t disperse_answer_witness(const struct DisperseAnswer *answer, size_t *buf, size_t cap);

/**
 * Releases an answer. Null is ignored.
 *
 * # Safety
 * `answer` must come from this library and not be freed twice.
 */
void disperse_answer_free(struct DisperseAnswer *answer);

/**
 * Sets `*out` to whether `k` nodes fit pairwise at distance `>= lambda`.
 *
 * # Safety
 * `tree` must be a live handle and `out` valid.
 */
enum DisperseStatus disperse_feasible(const struct DisperseTree *tree,
                                      size_t k,
                                      uint64_t lambda,
                                      bool *out);

/**
 * Largest total weight of a set pairwise at distance `>= lambda`.
 *
 * # Safety
 * `tree` must be a live handle and `out` valid.
 */
enum DisperseStatus disperse_max_weight(const struct DisperseTree *tree,
                                        uint64_t lambda,
                                        uint64_t *out);

/**
 * Largest λ admitting total weight `>= min_weight`. `max_weight_out` may be
 * null; otherwise it receives the best weight at that λ.
 *
 * # Safety
 * `tree` must be a live handle, `lambda_out` valid, `max_weight_out` null or valid.
 */
enum DisperseStatus disperse_weighted_optimize(const struct DisperseTree *tree,
                                               uint64_t min_weight,
                                               uint64_t *lambda_out,
                                               uint64_t *max_weight_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISPERSE_H */
