#include "echodetect/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "echodetect/common.hpp"

namespace echodetect {

namespace {

using nlohmann::json;

json optional_to_json(const std::optional<double>& value) {
  if (value) return *value;
  return nullptr;
}

std::string optional_to_csv(const std::optional<double>& value) {
  if (value) return format_score(*value);
  return "";
}

}  // namespace

std::vector<HistogramBin> score_histogram(const std::vector<double>& scores,
                                          int bins) {
  if (bins <= 0) raise(Errc::InvalidArgument, "histogram bins must be positive");
  std::vector<HistogramBin> histogram(static_cast<std::size_t>(bins));
  const double width = 1.0 / bins;
  for (int i = 0; i < bins; ++i) {
    histogram[i].low = i * width;
    histogram[i].high = (i + 1) * width;
  }
  histogram.back().high = 1.0;
  for (double score : scores) {
    int idx = static_cast<int>(score * bins);
    if (idx >= bins) idx = bins - 1;
    if (idx < 0) idx = 0;
    ++histogram[idx].count;
  }
  return histogram;
}

std::vector<CategoryStats> category_statistics(
    const std::vector<const ScoredTweet*>& tweets, double threshold,
    int histogram_bins) {
  static const TweetKind order[] = {TweetKind::Original, TweetKind::Reply,
                                    TweetKind::Retweet};
  std::vector<CategoryStats> result;
  for (TweetKind kind : order) {
    CategoryStats stats;
    stats.kind = kind;
    std::vector<double> scores;
    for (const ScoredTweet* t : tweets) {
      if (t->kind != kind) continue;
      scores.push_back(t->score);
      if (classify_high(t->score, threshold)) ++stats.high_count;
    }
    stats.count = static_cast<int>(scores.size());
    if (!scores.empty()) {
      std::sort(scores.begin(), scores.end());
      double sum = 0.0;
      for (double s : scores) sum += s;
      const double mean = sum / static_cast<double>(scores.size());
      stats.mean = mean;
      const std::size_t mid = scores.size() / 2;
      stats.median = scores.size() % 2 == 1
                         ? scores[mid]
                         : (scores[mid - 1] + scores[mid]) / 2.0;
      if (scores.size() >= 2) {
        double ss = 0.0;
        for (double s : scores) ss += (s - mean) * (s - mean);
        stats.std_dev = std::sqrt(ss / static_cast<double>(scores.size() - 1));
      }
    }
    stats.histogram = score_histogram(scores, histogram_bins);
    result.push_back(std::move(stats));
  }
  return result;
}

UserResponseProfile build_profile(const ScoredNetwork& scored,
                                  double threshold) {
  UserResponseProfile profile;
  profile.ego_user_id = scored.ego_user_id;
  profile.ego_username = scored.ego_username;
  profile.total_messages = scored.total_authored;
  profile.tagged_count = scored.tagged_replies + scored.tagged_retweets;
  for (const ScoredTweet& t : scored.tweets) {
    if (t.kind == TweetKind::Original && classify_high(t.score, threshold)) {
      ++profile.high_nontagged_count;
    }
  }
  if (profile.total_messages > 0) {
    profile.p_tagged = 100.0 * profile.tagged_count / profile.total_messages;
    profile.p_nontagged =
        100.0 * profile.high_nontagged_count / profile.total_messages;
  }
  return profile;
}

std::vector<double> GridSpec::edges() const {
  if (linear_bins <= 0 || log_bins <= 0) {
    raise(Errc::InvalidArgument, "grid bin counts must be positive");
  }
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(bin_count()) + 1);
  for (int i = 0; i <= linear_bins; ++i) {
    edges.push_back(static_cast<double>(i) / linear_bins);
  }
  for (int j = 1; j <= log_bins; ++j) {
    edges.push_back(std::pow(10.0, 2.0 * j / log_bins));
  }
  edges.back() = 100.0;
  return edges;
}

int GridSpec::bin_index(double percent) const {
  if (percent < 0.0) percent = 0.0;
  if (percent > 100.0) percent = 100.0;
  if (percent <= 1.0) {
    int idx = static_cast<int>(percent * linear_bins);
    if (idx >= linear_bins) idx = linear_bins - 1;
    return idx;
  }
  const std::vector<double> all = edges();
  for (int j = 0; j < log_bins; ++j) {
    if (percent <= all[static_cast<std::size_t>(linear_bins + 1 + j)]) {
      return linear_bins + j;
    }
  }
  return bin_count() - 1;
}

ProfileDistributions profile_distributions(
    const std::vector<UserResponseProfile>& profiles, const GridSpec& spec) {
  ProfileDistributions dist;
  dist.spec = spec;
  if (profiles.empty()) return dist;

  std::map<std::pair<int, int>, int> cells;
  std::vector<double> pn_values;
  pn_values.reserve(profiles.size());
  int zero_count = 0;
  int ge10_count = 0;
  for (const UserResponseProfile& p : profiles) {
    ++cells[{spec.bin_index(p.p_tagged), spec.bin_index(p.p_nontagged)}];
    if (p.p_nontagged > p.p_tagged) ++dist.above_diagonal_count;
    pn_values.push_back(p.p_nontagged);
    if (p.p_nontagged == 0.0) ++zero_count;
    if (p.p_nontagged >= 10.0) ++ge10_count;
  }
  for (const auto& [key, count] : cells) {
    dist.cells.push_back({key.first, key.second, count});
  }

  std::sort(pn_values.begin(), pn_values.end());
  const double n = static_cast<double>(pn_values.size());
  for (std::size_t i = 0; i < pn_values.size(); ++i) {
    if (i + 1 < pn_values.size() && pn_values[i + 1] == pn_values[i]) continue;
    dist.pn_cdf.emplace_back(pn_values[i], static_cast<double>(i + 1) / n);
  }
  dist.fraction_pn_zero = zero_count / n;
  dist.fraction_pn_ge_10 = ge10_count / n;
  return dist;
}

Report build_report(const std::vector<ScoredNetwork>& networks,
                    const DatasetConfig& config, int histogram_bins,
                    const GridSpec& grid) {
  if (networks.empty()) {
    raise(Errc::Empty, "no scored networks to report on");
  }
  Report report;
  report.config = config;
  report.histogram_bins = histogram_bins;
  report.grid = grid;

  DatasetSummary& ds = report.dataset;
  ds.users = static_cast<int>(networks.size());
  std::vector<const ScoredTweet*> all_tweets;
  std::vector<double> all_lengths;
  int replies_total = 0;
  for (const ScoredNetwork& network : networks) {
    ds.total_tweets += network.total_authored;
    ds.min_tweets_per_user =
        ds.min_tweets_per_user == 0
            ? network.total_authored
            : std::min(ds.min_tweets_per_user, network.total_authored);
    ds.max_tweets_per_user =
        std::max(ds.max_tweets_per_user, network.total_authored);
    ds.tagged_retweets += network.tagged_retweets;
    ds.tagged_replies += network.tagged_replies;
    ds.replies_in_window += network.replies_in_window;
    replies_total += network.replies_total;
    ds.scored_tweets += static_cast<int>(network.tweets.size());
    ds.unscored_tweets += static_cast<int>(network.unscored_ids.size());
    if (network.empty_corpus) ++ds.empty_corpus_networks;
    for (const ScoredTweet& t : network.tweets) all_tweets.push_back(&t);
    all_lengths.insert(all_lengths.end(), network.window_lengths_hours.begin(),
                       network.window_lengths_hours.end());
    report.profiles.push_back(
        build_profile(network, config.high_score_threshold));
  }
  ds.avg_tweets_per_user =
      static_cast<double>(ds.total_tweets) / static_cast<double>(ds.users);
  if (replies_total > 0) {
    ds.replies_in_window_fraction =
        static_cast<double>(ds.replies_in_window) / replies_total;
  }
  ds.window_stats = window_stats_from_lengths(std::move(all_lengths));

  report.categories = category_statistics(
      all_tweets, config.high_score_threshold, histogram_bins);
  report.distributions = profile_distributions(report.profiles, grid);
  return report;
}

std::string report_to_json(const Report& report) {
  json doc;
  doc["schema_version"] = "1";
  doc["config"] = {
      {"window_size", report.config.window_size},
      {"high_score_threshold", report.config.high_score_threshold},
      {"missing_fraction_threshold", report.config.missing_fraction_threshold},
      {"histogram_bins", report.histogram_bins},
      {"grid", {{"linear_bins", report.grid.linear_bins},
                {"log_bins", report.grid.log_bins}}},
  };

  const DatasetSummary& ds = report.dataset;
  json dataset;
  dataset["users"] = ds.users;
  dataset["total_tweets"] = ds.total_tweets;
  dataset["avg_tweets_per_user"] = ds.avg_tweets_per_user;
  dataset["min_tweets_per_user"] = ds.min_tweets_per_user;
  dataset["max_tweets_per_user"] = ds.max_tweets_per_user;
  dataset["tagged_retweets"] = ds.tagged_retweets;
  dataset["tagged_replies"] = ds.tagged_replies;
  dataset["replies_in_window"] = ds.replies_in_window;
  dataset["replies_in_window_fraction"] =
      optional_to_json(ds.replies_in_window_fraction);
  dataset["scored_tweets"] = ds.scored_tweets;
  dataset["unscored_tweets"] = ds.unscored_tweets;
  dataset["empty_corpus_networks"] = ds.empty_corpus_networks;
  json windows;
  windows["count"] = ds.window_stats.window_count;
  windows["mean_hours"] = optional_to_json(ds.window_stats.mean_hours);
  windows["std_hours"] = optional_to_json(ds.window_stats.std_hours);
  windows["min_hours"] = optional_to_json(ds.window_stats.min_hours);
  json cdf = json::array();
  for (const auto& [hours, fraction] : ds.window_stats.cdf) {
    cdf.push_back({hours, fraction});
  }
  windows["cdf"] = cdf;
  dataset["windows"] = windows;
  doc["dataset"] = dataset;

  json categories = json::array();
  for (const CategoryStats& c : report.categories) {
    json entry;
    entry["category"] = category_name(c.kind);
    entry["count"] = c.count;
    entry["high_count"] = c.high_count;
    entry["mean"] = optional_to_json(c.mean);
    entry["median"] = optional_to_json(c.median);
    entry["std_dev"] = optional_to_json(c.std_dev);
    json bins = json::array();
    for (const HistogramBin& b : c.histogram) {
      bins.push_back({{"low", b.low}, {"high", b.high}, {"count", b.count}});
    }
    entry["histogram"] = bins;
    categories.push_back(entry);
  }
  doc["categories"] = categories;

  json profiles = json::array();
  for (const UserResponseProfile& p : report.profiles) {
    profiles.push_back({
        {"ego_user_id", p.ego_user_id},
        {"ego_username", p.ego_username},
        {"total_messages", p.total_messages},
        {"tagged_count", p.tagged_count},
        {"high_nontagged_count", p.high_nontagged_count},
        {"p_tagged", p.p_tagged},
        {"p_nontagged", p.p_nontagged},
    });
  }
  doc["profiles"] = profiles;

  json dist;
  json cells = json::array();
  for (const GridCell& cell : report.distributions.cells) {
    cells.push_back({{"x", cell.x}, {"y", cell.y}, {"count", cell.count}});
  }
  dist["grid"] = cells;
  dist["above_diagonal_count"] = report.distributions.above_diagonal_count;
  json pn_cdf = json::array();
  for (const auto& [value, fraction] : report.distributions.pn_cdf) {
    pn_cdf.push_back({value, fraction});
  }
  dist["pn_cdf"] = pn_cdf;
  dist["fraction_pn_zero"] = report.distributions.fraction_pn_zero;
  dist["fraction_pn_ge_10"] = report.distributions.fraction_pn_ge_10;
  doc["distributions"] = dist;

  return doc.dump(2) + "\n";
}

const std::vector<std::string>& report_table_names() {
  static const std::vector<std::string> names = {
      "categories", "histograms", "profiles", "grid", "pn_cdf", "window_cdf",
  };
  return names;
}

std::string report_table_csv(const Report& report, std::string_view table) {
  std::string out;
  if (table == "categories") {
    out = "category,count,high_count,mean,median,std_dev\n";
    for (const CategoryStats& c : report.categories) {
      out += category_name(c.kind);
      out += ',';
      out += std::to_string(c.count);
      out += ',';
      out += std::to_string(c.high_count);
      out += ',';
      out += optional_to_csv(c.mean);
      out += ',';
      out += optional_to_csv(c.median);
      out += ',';
      out += optional_to_csv(c.std_dev);
      out += '\n';
    }
  } else if (table == "histograms") {
    out = "category,bin_low,bin_high,count\n";
    for (const CategoryStats& c : report.categories) {
      for (const HistogramBin& b : c.histogram) {
        out += category_name(c.kind);
        out += ',';
        out += format_score(b.low);
        out += ',';
        out += format_score(b.high);
        out += ',';
        out += std::to_string(b.count);
        out += '\n';
      }
    }
  } else if (table == "profiles") {
    out = "ego_user_id,ego_username,total_messages,tagged_count,"
          "high_nontagged_count,p_tagged,p_nontagged\n";
    for (const UserResponseProfile& p : report.profiles) {
      out += p.ego_user_id;
      out += ',';
      out += p.ego_username;
      out += ',';
      out += std::to_string(p.total_messages);
      out += ',';
      out += std::to_string(p.tagged_count);
      out += ',';
      out += std::to_string(p.high_nontagged_count);
      out += ',';
      out += format_score(p.p_tagged);
      out += ',';
      out += format_score(p.p_nontagged);
      out += '\n';
    }
  } else if (table == "grid") {
    const std::vector<double> edges = report.grid.edges();
    out = "x_bin,y_bin,x_low,x_high,y_low,y_high,count\n";
    for (const GridCell& cell : report.distributions.cells) {
      out += std::to_string(cell.x);
      out += ',';
      out += std::to_string(cell.y);
      out += ',';
      out += format_score(edges[cell.x]);
      out += ',';
      out += format_score(edges[cell.x + 1]);
      out += ',';
      out += format_score(edges[cell.y]);
      out += ',';
      out += format_score(edges[cell.y + 1]);
      out += ',';
      out += std::to_string(cell.count);
      out += '\n';
    }
  } else if (table == "pn_cdf") {
    out = "p_nontagged,cumulative_fraction\n";
    for (const auto& [value, fraction] : report.distributions.pn_cdf) {
      out += format_score(value);
      out += ',';
      out += format_score(fraction);
      out += '\n';
    }
  } else if (table == "window_cdf") {
    out = "hours,cumulative_fraction\n";
    for (const auto& [hours, fraction] : report.dataset.window_stats.cdf) {
      out += format_score(hours);
      out += ',';
      out += format_score(fraction);
      out += '\n';
    }
  } else {
    raise(Errc::InvalidArgument,
          "unknown report table \"" + std::string(table) + "\"");
  }
  return out;
}

}  // namespace echodetect
