#ifndef BRICKRANK_H
#define BRICKRANK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BrStatus {
  BR_STATUS_OK = 0,
  // The question was answered negatively.
  BR_STATUS_NO = 1,
  BR_STATUS_PARSE = 2,
  BR_STATUS_GUARD = 3,
  BR_STATUS_INTERNAL = 4,
  BR_STATUS_NULL_POINTER = 5,
  BR_STATUS_OUT_OF_RANGE = 6,
} BrStatus;

// A computed set of minimal tilable boxes.
typedef struct BrAntichain BrAntichain;

// A list of numeric proto bricks.
typedef struct BrProtoSet BrProtoSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message of the last failure on this thread, or NULL. The pointer is
// valid until the next call into this library on the same thread.
const char *br_last_error_message(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void br_string_free(char *s);

struct BrProtoSet *br_protoset_new(void);

// # Safety
// `set` must be NULL or a pointer from [`br_protoset_new`], not yet freed.
void br_protoset_free(struct BrProtoSet *set);

// Appends a brick written like `25x3`. All bricks must share a dimension.
//
// # Safety
// `set` must come from [`br_protoset_new`]; `brick` must be a NUL-terminated string.
enum BrStatus br_protoset_add(struct BrProtoSet *set, const char *brick);

// # Safety
// `set` must be NULL or a live proto set.
size_t br_protoset_len(const struct BrProtoSet *set);

// Computes the minimal tilable boxes; free the result with
// [`br_antichain_free`].
//
// # Safety
// `set` must be a live proto set and `out` a writable pointer.
enum BrStatus br_minimal_set(const struct BrProtoSet *set, struct BrAntichain **out);

// # Safety
// `m` must be NULL or a pointer from [`br_minimal_set`], not yet freed.
void br_antichain_free(struct BrAntichain *m);

// # Safety
// `m` must be NULL or a live antichain.
size_t br_antichain_len(const struct BrAntichain *m);

// The `index`-th brick in canonical order as a new string.
//
// # Safety
// `m` must be a live antichain and `out` a writable pointer.
enum BrStatus br_antichain_get(const struct BrAntichain *m, size_t index, char **out);

// `Ok` when `target` is tilable, `No` when it is not.
//
// # Safety
// `m` must be a live antichain and `target` a NUL-terminated string.
enum BrStatus br_is_tilable(const struct BrAntichain *m, const char *target);

// A verified signed tiling of `target` as JSON, or `No` when there is none.
//
// # Safety
// `set` must be a live proto set, `target` a NUL-terminated string and
// `out` a writable pointer.
enum BrStatus br_tile_witness_json(const struct BrProtoSet *set, const char *target, char **out);

// Rank of the worst-case cube proto-set of `n` bricks in dimension `d`.
//
// # Safety
// `out` must be a writable pointer.
enum BrStatus br_maxrank(uint32_t n, uint32_t d, bool allow_big, uint64_t *out);

// Maxrank over the free distributive lattice on `n` letters in dimension `d`, for `n <= 4`.
//
// # Safety
// `out` must be a writable pointer.
enum BrStatus br_lattice_maxrank(uint32_t n, uint32_t d, uint64_t *out);

// # Safety
// `out` must be a writable pointer.
enum BrStatus br_dedekind_count(uint32_t n, uint64_t *out);

// # Safety
// `phrase` must be a NUL-terminated string and `out` a writable pointer.
enum BrStatus br_phrase_dual(const char *phrase, char **out);

// The polynomial in `d` giving the maxrank for `n` proto bricks, as text.
//
// # Safety
// `out` must be a writable pointer.
enum BrStatus br_rank_polynomial(uint32_t n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRICKRANK_H */
