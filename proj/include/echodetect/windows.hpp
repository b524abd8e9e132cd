#pragma once

#include <optional>
#include <string>
#include <vector>

#include "echodetect/data_model.hpp"

namespace echodetect {

// The followee tweets visible to one ego tweet: the most recent ones
// published strictly before it, newest first, at most the configured
// count. Members point into the owning EgoNetwork, which must outlive
// the window.
struct Window {
  std::string target_tweet_id;
  std::vector<const Tweet*> members;

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
  TimestampMs newest_time() const { return members.front()->created_at; }
  TimestampMs oldest_time() const { return members.back()->created_at; }
};

// Merges every followee's tweets once so windows for many targets are
// cheap to cut.
class WindowBuilder {
 public:
  explicit WindowBuilder(const EgoNetwork& network);

  Window window_for(const Tweet& target, int window_size) const;

  std::size_t timeline_size() const { return timeline_.size(); }

 private:
  const EgoNetwork& network_;
  std::vector<const Tweet*> timeline_;  // stream order, unique ids
};

// Window for one ego tweet; the tweet must belong to the network.
Window build_window(const EgoNetwork& network, const Tweet& target,
                    int window_size);

// Windows for all ego tweets, aligned with network.ego_tweets.
std::vector<Window> build_all_windows(const EgoNetwork& network,
                                      int window_size);

double window_time_length_hours(const Window& window);

struct WindowStats {
  std::size_t window_count = 0;  // nonempty windows only
  std::optional<double> mean_hours;
  std::optional<double> std_hours;  // sample deviation; null below 2
  std::optional<double> min_hours;
  // Cumulative distribution over window lengths: (hours, fraction of
  // windows at most that long), one point per distinct length.
  std::vector<std::pair<double, double>> cdf;
};

WindowStats compute_window_stats(const std::vector<Window>& windows);

// Same statistics from raw per-window lengths in hours, for callers
// that carry lengths instead of windows.
WindowStats window_stats_from_lengths(std::vector<double> lengths);

struct ReplyCoverage {
  int replies_total = 0;
  int replies_in_window = 0;
  std::optional<double> fraction;  // null when there are no replies
};

// How many tagged replies point at a tweet that sits inside the
// replying tweet's own window.
ReplyCoverage replies_in_window(const EgoNetwork& network,
                                const std::vector<Window>& windows);

// CSV with one row per window member:
// target_tweet_id,member_rank,member_tweet_id,member_created_at
std::string window_dump_csv(const std::vector<Window>& windows);

}  // namespace echodetect
