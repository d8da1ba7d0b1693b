#ifndef INFOMATCH_H
#define INFOMATCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  IM_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  IM_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  IM_STATUS_INVALID_UTF8 = 2,
  IM_STATUS_IO = 3,
  IM_STATUS_PARSE = 4,
  IM_STATUS_PARAM = 5,
  IM_STATUS_NO_MAPPED_TYPES = 6,
  IM_STATUS_EVAL = 7,
  /**
   * A panic was caught at the boundary.
   */
  IM_STATUS_INTERNAL = 8,
} im_status;

/**
 * Opaque corpus handle.
 */
typedef struct im_corpus im_corpus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *im_version(void);

/**
 * Message of the last error on this thread; valid until the next
 * failing call on the same thread. Do not free.
 */
const char *im_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned through an out-parameter
 * of this library, or NULL.
 */
void im_string_free(char *s);

/**
 * Load a JSONL corpus file into a new handle.
 *
 * # Safety
 * `path` must be a NUL-terminated UTF-8 path; `out` must be a valid
 * pointer to receive the handle.
 */
im_status im_corpus_load(const char *path, im_corpus **out);

/**
 * Number of articles in the corpus.
 *
 * # Safety
 * `corpus` must be a live handle from [`im_corpus_load`] or NULL.
 */
uintptr_t im_corpus_len(const im_corpus *corpus);

/**
 * Release a corpus handle.
 *
 * # Safety
 * `corpus` must be a handle from [`im_corpus_load`] or NULL; it must
 * not be used afterwards.
 */
void im_corpus_free(im_corpus *corpus);

/**
 * Align attributes over every mapped type pair. `config_kv` holds
 * `key = value` lines (same keys as the config file); pass an empty
 * string for defaults. On success `*out_json` receives a JSON array of
 * per-type-pair match files.
 *
 * # Safety
 * `corpus` must be a live handle; `config_kv` a NUL-terminated UTF-8
 * string; `out_json` a valid pointer.
 */
im_status im_match(const im_corpus *corpus, const char *config_kv, char **out_json);

/**
 * Evaluate match files (JSON array, as produced by [`im_match`])
 * against a ground truth TSV. On success `*out_json` receives the
 * evaluation report as JSON.
 *
 * # Safety
 * `corpus` must be a live handle; string arguments NUL-terminated
 * UTF-8; `out_json` a valid pointer.
 */
im_status im_eval(const im_corpus *corpus,
                  const char *config_kv,
                  const char *matches_json,
                  const char *gt_tsv,
                  char **out_json);

/**
 * Generate a synthetic corpus. `spec_kv` holds `key = value` lines for
 * the generator knobs (seed, n_types, n_entities, n_synonym_sets,
 * overlap, value_pool_size, value_overlap, link_density,
 * value_perturbation, rare_attr_fraction, opaque_set_fraction); pass an
 * empty string for defaults. `*out_corpus_jsonl` and `*out_gt_tsv`
 * receive the corpus and ground truth.
 *
 * # Safety
 * `spec_kv` must be a NUL-terminated UTF-8 string; the out pointers
 * must be valid.
 */
im_status im_synth(const char *spec_kv, char **out_corpus_jsonl, char **out_gt_tsv);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INFOMATCH_H */
