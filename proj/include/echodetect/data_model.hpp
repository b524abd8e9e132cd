#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "echodetect/time.hpp"

namespace echodetect {

enum class TweetKind {
  Original,
  Retweet,
  Reply,
};

const char* tweet_kind_name(TweetKind kind);
bool parse_tweet_kind(std::string_view name, TweetKind& out);

struct Tweet {
  std::string tweet_id;
  std::string author_id;
  std::string author_username;
  TimestampMs created_at = 0;
  std::string text;
  TweetKind kind = TweetKind::Original;
  // Set exactly when kind is Reply / Retweet respectively.
  std::string replied_tweet_id;
  std::string retweeted_tweet_id;
};

// Stream order: by timestamp, ties broken by tweet id. This is the
// key used everywhere a "before" or "most recent" decision is made.
bool tweet_order_less(const Tweet& a, const Tweet& b);

struct FolloweeRecord {
  std::string followee_id;
  std::string username;
  std::vector<Tweet> tweets;  // sorted by stream order
  TimestampMs first_seen = 0;
  TimestampMs last_seen = 0;
};

struct EgoNetwork {
  std::string ego_user_id;
  std::string ego_username;
  std::vector<Tweet> ego_tweets;  // sorted by stream order
  std::map<std::string, FolloweeRecord> followees;  // keyed by followee_id
};

struct DatasetConfig {
  int window_size = 100;
  double high_score_threshold = 0.384;
  double missing_fraction_threshold = 0.20;
};

// Reads one ego network from JSON Lines text: a header object first,
// then one object per tweet. Validation failures carry the 1-based
// line number. Throws Error(Errc::Parse) on malformed input.
EgoNetwork parse_ego_network(std::string_view jsonl);

EgoNetwork load_ego_network(const std::string& path);

// Inverse of parse_ego_network: header line, then ego tweets, then
// followee tweets grouped by followee id. Output is deterministic and
// re-parses to an equal network.
std::string serialize_ego_network(const EgoNetwork& network);

// Estimates how much followee activity the capture missed, as the
// fraction missing/(observed+missing) of tweets inside the window
// spanned by the ego's own tweets. Followees whose observed span
// does not overlap that window contribute no estimate and are
// reported via a warning.
double estimate_missing_fraction(const EgoNetwork& network);

struct FilterDecision {
  std::string ego_user_id;
  double missing_fraction = 0.0;
};

struct FilterReport {
  std::vector<std::string> retained;
  std::vector<FilterDecision> dropped;
};

// Keeps the networks whose estimated missing fraction is at or below
// the configured threshold, preserving input order.
std::vector<EgoNetwork> filter_dataset(std::vector<EgoNetwork> networks,
                                       const DatasetConfig& config,
                                       FilterReport* report = nullptr);

std::string filter_report_to_json(const FilterReport& report);

}  // namespace echodetect
