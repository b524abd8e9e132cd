/* C interface to the echodetect library.
 *
 * Handles are opaque; every function that can fail returns an
 * ed_status and leaves a human-readable message in ed_last_error(),
 * which is thread-local. Strings returned through char** parameters
 * are owned by the caller and released with ed_string_free().
 */
#ifndef ECHODETECT_H
#define ECHODETECT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ED_API __declspec(dllexport)
#else
#define ED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ed_status {
  ED_OK = 0,
  ED_ERR_INVALID_ARGUMENT = 1,
  ED_ERR_IO = 2,
  ED_ERR_PARSE = 3,
  ED_ERR_EMPTY = 4,
  ED_ERR_INTERNAL = 5,
} ed_status;

typedef struct ed_network ed_network;
typedef struct ed_scored ed_scored;

typedef struct ed_config {
  int window_size;
  double high_score_threshold;
  double missing_fraction_threshold;
} ed_config;

typedef struct ed_synth_config {
  uint64_t seed;
  int num_followees;
  int tweets_per_followee;
  int ego_tweet_count;
  double mix_explicit_retweet;
  double mix_explicit_reply;
  double mix_implicit_copy;
  double mix_implicit_edited;
  double mix_unrelated;
  double edit_rate;
  int vocab_size;
  double mean_interarrival_seconds;
  int window_size;
} ed_synth_config;

ED_API const char* ed_version(void);

/* Message for the most recent failure on this thread; never NULL. */
ED_API const char* ed_last_error(void);

ED_API void ed_string_free(char* s);

/* "none", "error", "warn", "info" or "debug". */
ED_API ed_status ed_set_log_level(const char* level);

ED_API void ed_config_default(ed_config* out);
ED_API void ed_synth_config_default(ed_synth_config* out);

/* FNV-1a content hash used for run manifests. */
ED_API uint64_t ed_fnv1a64(const void* bytes, size_t len);

/* --- ego networks ----------------------------------------------- */

ED_API ed_status ed_network_parse(const char* jsonl, size_t len,
                                  ed_network** out);
ED_API ed_status ed_network_load_file(const char* path, ed_network** out);
ED_API void ed_network_free(ed_network* network);

ED_API const char* ed_network_ego_user_id(const ed_network* network);
ED_API const char* ed_network_ego_username(const ed_network* network);
ED_API int ed_network_ego_tweet_count(const ed_network* network);
ED_API int ed_network_followee_count(const ed_network* network);

ED_API ed_status ed_network_to_jsonl(const ed_network* network, char** out);

/* Estimated fraction of followee activity the capture missed. */
ED_API ed_status ed_network_missing_fraction(const ed_network* network,
                                             double* out);

/* Applies the missing-data cutoff to a set of networks. keep_flags
 * must hold count entries; each is set to 1 (retained) or 0. The
 * report JSON lists retained ids and dropped ids with fractions. */
ED_API ed_status ed_filter_networks(const ed_network* const* networks,
                                    size_t count, const ed_config* config,
                                    int* keep_flags, char** report_json_out);

/* --- scoring ----------------------------------------------------- */

ED_API ed_status ed_score_network(const ed_network* network,
                                  const ed_config* config, ed_scored** out);
ED_API void ed_scored_free(ed_scored* scored);

ED_API const char* ed_scored_ego_user_id(const ed_scored* scored);
ED_API int ed_scored_tweet_count(const ed_scored* scored);
ED_API int ed_scored_unscored_count(const ed_scored* scored);

ED_API ed_status ed_scored_to_csv(const ed_scored* scored, char** out);
ED_API ed_status ed_scored_to_json(const ed_scored* scored, char** out);
ED_API ed_status ed_scored_from_json(const char* json_text, size_t len,
                                     ed_scored** out);
ED_API ed_status ed_scored_load_file(const char* path, ed_scored** out);

/* Per-member window listing for every ego tweet, as CSV. */
ED_API ed_status ed_window_dump_csv(const ed_network* network, int window_size,
                                    char** out);

/* Reference scorer for cross-checking. *scored_out is 0 when the
 * tweet has an empty window and no score. */
ED_API ed_status ed_brute_force_score(const ed_network* network,
                                      const char* tweet_id, int window_size,
                                      int* scored_out, double* score_out);

/* --- reporting ---------------------------------------------------- */

ED_API ed_status ed_report_json(const ed_scored* const* scored, size_t count,
                                const ed_config* config, int histogram_bins,
                                int grid_linear_bins, int grid_log_bins,
                                char** out);

/* table: categories, histograms, profiles, grid, pn_cdf, window_cdf */
ED_API ed_status ed_report_csv(const ed_scored* const* scored, size_t count,
                               const ed_config* config, int histogram_bins,
                               int grid_linear_bins, int grid_log_bins,
                               const char* table, char** out);

/* --- synthetic data ----------------------------------------------- */

ED_API ed_status ed_synth_generate(const ed_synth_config* config,
                                   char** jsonl_out, char** truth_json_out);

ED_API ed_status ed_evaluate(const ed_scored* scored, const char* truth_json,
                             size_t truth_len, double threshold,
                             char** metrics_json_out);

/* --- text pipeline ------------------------------------------------ */

/* JSON array of {kind, value} in extraction order. */
ED_API ed_status ed_extract_features_json(const char* text, size_t text_len,
                                          const char* author_username,
                                          char** out);

ED_API ed_status ed_stem(const char* token, char** out);
ED_API int ed_is_stopword(const char* token);

#ifdef __cplusplus
}
#endif

#endif /* ECHODETECT_H */
