#include "echodetect/windows.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "echodetect/common.hpp"

namespace echodetect {

WindowBuilder::WindowBuilder(const EgoNetwork& network) : network_(network) {
  std::size_t total = 0;
  for (const auto& [id, rec] : network.followees) total += rec.tweets.size();
  timeline_.reserve(total);
  for (const auto& [id, rec] : network.followees) {
    if (id == network.ego_user_id) continue;  // self-follow: never a member
    for (const Tweet& t : rec.tweets) timeline_.push_back(&t);
  }
  std::sort(timeline_.begin(), timeline_.end(),
            [](const Tweet* a, const Tweet* b) { return tweet_order_less(*a, *b); });

  // Identical ids under two followees collapse to the earliest copy.
  std::unordered_set<std::string_view> seen;
  seen.reserve(timeline_.size());
  auto last = std::remove_if(timeline_.begin(), timeline_.end(),
                             [&seen](const Tweet* t) {
                               return !seen.insert(t->tweet_id).second;
                             });
  timeline_.erase(last, timeline_.end());
}

Window WindowBuilder::window_for(const Tweet& target, int window_size) const {
  if (window_size <= 0) {
    raise(Errc::InvalidArgument, "window size must be positive");
  }
  Window window;
  window.target_tweet_id = target.tweet_id;

  auto cutoff = std::lower_bound(
      timeline_.begin(), timeline_.end(), target,
      [](const Tweet* a, const Tweet& b) { return tweet_order_less(*a, b); });
  std::size_t available = static_cast<std::size_t>(cutoff - timeline_.begin());
  std::size_t take = std::min(available, static_cast<std::size_t>(window_size));

  window.members.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    window.members.push_back(*(cutoff - 1 - static_cast<std::ptrdiff_t>(i)));
  }
  return window;
}

Window build_window(const EgoNetwork& network, const Tweet& target,
                    int window_size) {
  bool found = false;
  for (const Tweet& t : network.ego_tweets) {
    if (t.tweet_id == target.tweet_id) {
      found = true;
      break;
    }
  }
  if (!found) {
    raise(Errc::InvalidArgument,
          "tweet \"" + target.tweet_id + "\" is not an ego tweet of " +
              network.ego_user_id);
  }
  return WindowBuilder(network).window_for(target, window_size);
}

std::vector<Window> build_all_windows(const EgoNetwork& network,
                                      int window_size) {
  WindowBuilder builder(network);
  std::vector<Window> windows;
  windows.reserve(network.ego_tweets.size());
  for (const Tweet& t : network.ego_tweets) {
    windows.push_back(builder.window_for(t, window_size));
  }
  return windows;
}

double window_time_length_hours(const Window& window) {
  if (window.size() <= 1) return 0.0;
  return static_cast<double>(window.newest_time() - window.oldest_time()) /
         kMsPerHour;
}

WindowStats compute_window_stats(const std::vector<Window>& windows) {
  std::vector<double> lengths;
  lengths.reserve(windows.size());
  for (const Window& w : windows) {
    if (!w.empty()) lengths.push_back(window_time_length_hours(w));
  }
  return window_stats_from_lengths(std::move(lengths));
}

WindowStats window_stats_from_lengths(std::vector<double> lengths) {
  WindowStats stats;
  stats.window_count = lengths.size();
  if (lengths.empty()) return stats;

  std::sort(lengths.begin(), lengths.end());
  double sum = 0.0;
  for (double v : lengths) sum += v;
  const double mean = sum / static_cast<double>(lengths.size());
  stats.mean_hours = mean;
  stats.min_hours = lengths.front();
  if (lengths.size() >= 2) {
    double ss = 0.0;
    for (double v : lengths) ss += (v - mean) * (v - mean);
    stats.std_hours = std::sqrt(ss / static_cast<double>(lengths.size() - 1));
  }

  const double n = static_cast<double>(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (i + 1 < lengths.size() && lengths[i + 1] == lengths[i]) continue;
    stats.cdf.emplace_back(lengths[i], static_cast<double>(i + 1) / n);
  }
  return stats;
}

ReplyCoverage replies_in_window(const EgoNetwork& network,
                                const std::vector<Window>& windows) {
  if (windows.size() != network.ego_tweets.size()) {
    raise(Errc::InvalidArgument,
          "windows are not aligned with the network's ego tweets");
  }
  ReplyCoverage coverage;
  for (std::size_t i = 0; i < network.ego_tweets.size(); ++i) {
    const Tweet& t = network.ego_tweets[i];
    if (t.kind != TweetKind::Reply) continue;
    ++coverage.replies_total;
    for (const Tweet* member : windows[i].members) {
      if (member->tweet_id == t.replied_tweet_id) {
        ++coverage.replies_in_window;
        break;
      }
    }
  }
  if (coverage.replies_total > 0) {
    coverage.fraction = static_cast<double>(coverage.replies_in_window) /
                        static_cast<double>(coverage.replies_total);
  }
  return coverage;
}

std::string window_dump_csv(const std::vector<Window>& windows) {
  std::string out = "target_tweet_id,member_rank,member_tweet_id,member_created_at\n";
  for (const Window& w : windows) {
    for (std::size_t rank = 0; rank < w.members.size(); ++rank) {
      out += w.target_tweet_id;
      out += ',';
      out += std::to_string(rank + 1);
      out += ',';
      out += w.members[rank]->tweet_id;
      out += ',';
      out += format_timestamp(w.members[rank]->created_at);
      out += '\n';
    }
  }
  return out;
}

}  // namespace echodetect
