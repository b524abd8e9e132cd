#pragma once

#include <optional>
#include <string>
#include <vector>

#include "echodetect/scoring.hpp"
#include "echodetect/windows.hpp"

namespace echodetect {

// A tweet counts as a likely response when its score reaches the
// threshold; the boundary itself is in.
inline bool classify_high(double score, double threshold) {
  return score >= threshold;
}

struct HistogramBin {
  double low = 0.0;
  double high = 0.0;
  int count = 0;
};

// Equal-width bins over [0, 1]; the last bin also takes 1.0 itself.
std::vector<HistogramBin> score_histogram(const std::vector<double>& scores,
                                          int bins);

struct CategoryStats {
  TweetKind kind = TweetKind::Original;
  int count = 0;
  int high_count = 0;
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<double> std_dev;  // sample deviation; null below 2
  std::vector<HistogramBin> histogram;
};

// Stats per category, in the fixed order nontagged, reply, retweet.
std::vector<CategoryStats> category_statistics(
    const std::vector<const ScoredTweet*>& tweets, double threshold,
    int histogram_bins);

struct UserResponseProfile {
  std::string ego_user_id;
  std::string ego_username;
  int total_messages = 0;
  int tagged_count = 0;
  int high_nontagged_count = 0;
  double p_tagged = 0.0;     // percent of authored tweets that are tagged
  double p_nontagged = 0.0;  // percent that are high-scoring nontagged
};

UserResponseProfile build_profile(const ScoredNetwork& scored,
                                  double threshold);

// Percent axes: a linear stretch covering [0, 1] and log-spaced bins
// covering (1, 100].
struct GridSpec {
  int linear_bins = 1;
  int log_bins = 20;

  int bin_count() const { return linear_bins + log_bins; }
  std::vector<double> edges() const;
  int bin_index(double percent) const;
};

struct GridCell {
  int x = 0;  // p_tagged bin
  int y = 0;  // p_nontagged bin
  int count = 0;
};

struct ProfileDistributions {
  GridSpec spec;
  std::vector<GridCell> cells;  // occupied cells, ordered by (x, y)
  int above_diagonal_count = 0;  // p_nontagged strictly above p_tagged
  std::vector<std::pair<double, double>> pn_cdf;
  double fraction_pn_zero = 0.0;
  double fraction_pn_ge_10 = 0.0;
};

ProfileDistributions profile_distributions(
    const std::vector<UserResponseProfile>& profiles, const GridSpec& spec);

struct DatasetSummary {
  int users = 0;
  int total_tweets = 0;
  double avg_tweets_per_user = 0.0;
  int min_tweets_per_user = 0;
  int max_tweets_per_user = 0;
  int tagged_retweets = 0;
  int tagged_replies = 0;
  int replies_in_window = 0;
  std::optional<double> replies_in_window_fraction;
  int scored_tweets = 0;
  int unscored_tweets = 0;
  int empty_corpus_networks = 0;
  WindowStats window_stats;
};

struct Report {
  DatasetConfig config;
  int histogram_bins = 50;
  GridSpec grid;
  DatasetSummary dataset;
  std::vector<CategoryStats> categories;
  std::vector<UserResponseProfile> profiles;
  ProfileDistributions distributions;
};

// Aggregates any number of scored networks; totals are additive, so
// reporting over a dataset equals reporting over its parts combined.
Report build_report(const std::vector<ScoredNetwork>& networks,
                    const DatasetConfig& config, int histogram_bins,
                    const GridSpec& grid);

std::string report_to_json(const Report& report);

// One table per name: categories, histograms, profiles, grid,
// pn_cdf, window_cdf.
std::string report_table_csv(const Report& report, std::string_view table);

const std::vector<std::string>& report_table_names();

}  // namespace echodetect
