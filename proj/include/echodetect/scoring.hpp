#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "echodetect/data_model.hpp"
#include "echodetect/textpipe.hpp"
#include "echodetect/windows.hpp"

namespace echodetect {

// Every followee tweet that appears in at least one window, with its
// extracted features, in stream order.
struct Corpus {
  std::vector<const Tweet*> docs;
  std::vector<FeatureSet> features;
  std::unordered_map<std::string_view, std::size_t> index_by_id;

  std::size_t size() const { return docs.size(); }
};

// Union of the window members across all ego tweets. Throws
// Error(Errc::Empty) when every window is empty.
Corpus build_corpus(const EgoNetwork& network,
                    const std::vector<Window>& windows);

// Term weights over the corpus. Document frequency is smoothed:
// idf = ln((1 + docs) / (1 + df)) + 1, so every weight is positive.
// A document's weight for a term is its raw count times the idf.
class TfIdfModel {
 public:
  static TfIdfModel fit(const Corpus& corpus);

  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  std::size_t doc_count() const { return rows_.size(); }

  std::optional<double> idf_of(std::string_view term) const;

  // Vocabulary indices of the query's distinct terms, ascending;
  // terms outside the vocabulary drop out.
  std::vector<std::uint32_t> term_indices(const FeatureSet& query) const;

  // Sum of the document's weights over the query terms it contains,
  // accumulated in ascending vocabulary order.
  double pair_score(const std::vector<std::uint32_t>& query_indices,
                    std::size_t doc) const;
  double pair_score(const FeatureSet& query, std::size_t doc) const;

  // pair_score of a document against itself, precomputed.
  double self_score(std::size_t doc) const;

 private:
  std::vector<std::string> vocabulary_;  // sorted values
  std::vector<double> idf_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows_;
  std::vector<double> self_scores_;
};

// The largest self score among the window's members; this is the
// denominator that puts scores on [0, 1].
double window_normalization(const TfIdfModel& model, const Corpus& corpus,
                            const Window& window);

const char* category_name(TweetKind kind);

struct ScoredTweet {
  std::string tweet_id;
  TweetKind kind = TweetKind::Original;
  double score = 0.0;
  std::string best_match_id;
  int window_size = 0;
};

// Scores one ego tweet against its window: the best normalized match
// among the members, ties going to the most recent one.
ScoredTweet score_tweet(const TfIdfModel& model, const Corpus& corpus,
                        const Tweet& tweet, const Window& window);

struct ScoredNetwork {
  std::string ego_user_id;
  std::string ego_username;
  DatasetConfig config;
  int total_authored = 0;
  int tagged_replies = 0;
  int tagged_retweets = 0;
  bool empty_corpus = false;
  std::vector<ScoredTweet> tweets;        // ego stream order
  std::vector<std::string> unscored_ids;  // ego tweets with empty windows
  int replies_total = 0;
  int replies_in_window = 0;
  std::vector<double> window_lengths_hours;  // nonempty windows
};

// Full pipeline for one network: windows, corpus, model, scores.
// A network whose windows are all empty comes back with empty_corpus
// set and every tweet unscored instead of failing.
ScoredNetwork score_network(const EgoNetwork& network,
                            const DatasetConfig& config);

// Shortest decimal form that round-trips the double.
std::string format_score(double value);

// CSV: tweet_id,category,score,best_match_id,window_size
std::string scored_network_to_csv(const ScoredNetwork& scored);

std::string scored_network_to_json(const ScoredNetwork& scored);
ScoredNetwork scored_network_from_json(std::string_view json_text);
ScoredNetwork load_scored_network(const std::string& path);

}  // namespace echodetect
