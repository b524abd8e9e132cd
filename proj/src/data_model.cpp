#include "echodetect/data_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "echodetect/common.hpp"
#include "echodetect/log.hpp"

namespace echodetect {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(std::size_t line, const std::string& message) {
  raise(Errc::Parse, "line " + std::to_string(line) + ": " + message);
}

std::string require_string(const json& obj, const char* key, std::size_t line,
                           bool allow_empty = false) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    parse_fail(line, std::string("missing field \"") + key + "\"");
  }
  if (!it->is_string()) {
    parse_fail(line, std::string("field \"") + key + "\" must be a string");
  }
  std::string value = it->get<std::string>();
  if (value.empty() && !allow_empty) {
    parse_fail(line, std::string("field \"") + key + "\" must not be empty");
  }
  return value;
}

bool optional_string(const json& obj, const char* key, std::size_t line,
                     std::string& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return false;
  if (!it->is_string()) {
    parse_fail(line, std::string("field \"") + key + "\" must be a string");
  }
  out = it->get<std::string>();
  return true;
}

Tweet parse_tweet_line(const json& obj, std::size_t line, bool& is_ego) {
  Tweet t;
  t.tweet_id = require_string(obj, "tweet_id", line);
  t.author_id = require_string(obj, "author_id", line);
  t.author_username = require_string(obj, "author_username", line);
  t.created_at = parse_timestamp(require_string(obj, "created_at", line));
  t.text = require_string(obj, "text", line, /*allow_empty=*/true);

  std::string kind_name = require_string(obj, "kind", line);
  if (!parse_tweet_kind(kind_name, t.kind)) {
    parse_fail(line, "unknown kind \"" + kind_name + "\"");
  }

  std::string ref;
  if (optional_string(obj, "replied_tweet_id", line, ref)) {
    if (t.kind != TweetKind::Reply) {
      parse_fail(line, "replied_tweet_id on a non-reply tweet");
    }
    if (ref.empty()) parse_fail(line, "replied_tweet_id must not be empty");
    t.replied_tweet_id = ref;
  } else if (t.kind == TweetKind::Reply) {
    parse_fail(line, "reply tweet missing replied_tweet_id");
  }

  if (optional_string(obj, "retweeted_tweet_id", line, ref)) {
    if (t.kind != TweetKind::Retweet) {
      parse_fail(line, "retweeted_tweet_id on a non-retweet tweet");
    }
    if (ref.empty()) parse_fail(line, "retweeted_tweet_id must not be empty");
    t.retweeted_tweet_id = ref;
  } else if (t.kind == TweetKind::Retweet) {
    parse_fail(line, "retweet tweet missing retweeted_tweet_id");
  }

  auto ego_it = obj.find("is_ego");
  if (ego_it == obj.end() || !ego_it->is_boolean()) {
    parse_fail(line, "missing boolean field \"is_ego\"");
  }
  is_ego = ego_it->get<bool>();
  return t;
}

json tweet_to_json(const Tweet& t, bool is_ego) {
  json obj;
  obj["tweet_id"] = t.tweet_id;
  obj["author_id"] = t.author_id;
  obj["author_username"] = t.author_username;
  obj["created_at"] = format_timestamp(t.created_at);
  obj["text"] = t.text;
  obj["kind"] = tweet_kind_name(t.kind);
  if (t.kind == TweetKind::Reply) obj["replied_tweet_id"] = t.replied_tweet_id;
  if (t.kind == TweetKind::Retweet) {
    obj["retweeted_tweet_id"] = t.retweeted_tweet_id;
  }
  obj["is_ego"] = is_ego;
  return obj;
}

}  // namespace

const char* tweet_kind_name(TweetKind kind) {
  switch (kind) {
    case TweetKind::Original: return "original";
    case TweetKind::Retweet: return "retweet";
    case TweetKind::Reply: return "reply";
  }
  return "unknown";
}

bool parse_tweet_kind(std::string_view name, TweetKind& out) {
  if (name == "original") {
    out = TweetKind::Original;
  } else if (name == "retweet") {
    out = TweetKind::Retweet;
  } else if (name == "reply") {
    out = TweetKind::Reply;
  } else {
    return false;
  }
  return true;
}

bool tweet_order_less(const Tweet& a, const Tweet& b) {
  if (a.created_at != b.created_at) return a.created_at < b.created_at;
  return a.tweet_id < b.tweet_id;
}

EgoNetwork parse_ego_network(std::string_view jsonl) {
  EgoNetwork network;
  std::unordered_set<std::string> seen_ids;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= jsonl.size()) {
    std::size_t nl = jsonl.find('\n', pos);
    std::string_view line = jsonl.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? jsonl.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      parse_fail(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) parse_fail(line_no, "expected a JSON object");

    if (!have_header) {
      network.ego_user_id = require_string(obj, "ego_user_id", line_no);
      network.ego_username = require_string(obj, "ego_username", line_no);
      std::string version = require_string(obj, "schema_version", line_no);
      if (version != "1") {
        parse_fail(line_no, "unsupported schema_version \"" + version + "\"");
      }
      have_header = true;
      continue;
    }

    bool is_ego = false;
    Tweet t = parse_tweet_line(obj, line_no, is_ego);
    if (!seen_ids.insert(t.tweet_id).second) {
      parse_fail(line_no, "duplicate tweet_id \"" + t.tweet_id + "\"");
    }
    if (is_ego) {
      if (t.author_id != network.ego_user_id) {
        parse_fail(line_no, "ego tweet authored by \"" + t.author_id +
                                "\", expected \"" + network.ego_user_id + "\"");
      }
      network.ego_tweets.push_back(std::move(t));
    } else {
      FolloweeRecord& rec = network.followees[t.author_id];
      if (rec.tweets.empty()) {
        rec.followee_id = t.author_id;
        rec.username = t.author_username;
      }
      rec.tweets.push_back(std::move(t));
    }
  }

  if (!have_header) raise(Errc::Parse, "empty input: missing header line");
  if (network.ego_tweets.empty()) {
    raise(Errc::Parse, "network \"" + network.ego_user_id +
                           "\" contains no ego tweets");
  }

  std::sort(network.ego_tweets.begin(), network.ego_tweets.end(),
            tweet_order_less);
  for (auto& [id, rec] : network.followees) {
    std::sort(rec.tweets.begin(), rec.tweets.end(), tweet_order_less);
    rec.first_seen = rec.tweets.front().created_at;
    rec.last_seen = rec.tweets.back().created_at;
  }
  return network;
}

EgoNetwork load_ego_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::Io, "cannot open \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) raise(Errc::Io, "error reading \"" + path + "\"");
  try {
    return parse_ego_network(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string serialize_ego_network(const EgoNetwork& network) {
  std::string out;
  json header;
  header["ego_user_id"] = network.ego_user_id;
  header["ego_username"] = network.ego_username;
  header["schema_version"] = "1";
  out += header.dump();
  out += '\n';
  for (const Tweet& t : network.ego_tweets) {
    out += tweet_to_json(t, true).dump();
    out += '\n';
  }
  for (const auto& [id, rec] : network.followees) {
    for (const Tweet& t : rec.tweets) {
      out += tweet_to_json(t, false).dump();
      out += '\n';
    }
  }
  return out;
}

double estimate_missing_fraction(const EgoNetwork& network) {
  if (network.ego_tweets.empty()) {
    raise(Errc::InvalidArgument, "network has no ego tweets");
  }
  const TimestampMs period_start = network.ego_tweets.front().created_at;
  const TimestampMs period_end = network.ego_tweets.back().created_at;

  double total_observed = 0.0;
  double total_missing = 0.0;
  for (const auto& [id, rec] : network.followees) {
    const TimestampMs lo = std::max(period_start, rec.first_seen);
    const TimestampMs hi = std::min(period_end, rec.last_seen);
    if (lo > hi) {
      log_warn("followee " + id + " of " + network.ego_user_id +
               " has no overlap with the ego period; skipping estimate");
      continue;
    }
    auto begin = std::lower_bound(
        rec.tweets.begin(), rec.tweets.end(), lo,
        [](const Tweet& t, TimestampMs v) { return t.created_at < v; });
    auto end = std::upper_bound(
        rec.tweets.begin(), rec.tweets.end(), hi,
        [](TimestampMs v, const Tweet& t) { return v < t.created_at; });
    const double observed = static_cast<double>(end - begin);
    total_observed += observed;

    const double overlap_ms = static_cast<double>(hi - lo);
    if (overlap_ms <= 0.0) {
      log_warn("followee " + id + " of " + network.ego_user_id +
               " overlaps the ego period at a single instant; no estimate");
      continue;
    }
    if (observed == 0.0) {
      log_warn("followee " + id + " of " + network.ego_user_id +
               " has no tweets inside the ego period");
      continue;
    }
    const double rate = observed / overlap_ms;
    const double uncovered =
        static_cast<double>(lo - period_start) + static_cast<double>(period_end - hi);
    total_missing += uncovered * rate;
  }

  const double denominator = total_observed + total_missing;
  if (denominator <= 0.0) {
    log_warn("network " + network.ego_user_id +
             " has no observed followee activity; missing fraction set to 0");
    return 0.0;
  }
  return total_missing / denominator;
}

std::vector<EgoNetwork> filter_dataset(std::vector<EgoNetwork> networks,
                                       const DatasetConfig& config,
                                       FilterReport* report) {
  std::vector<EgoNetwork> kept;
  kept.reserve(networks.size());
  for (EgoNetwork& network : networks) {
    const double fraction = estimate_missing_fraction(network);
    if (fraction <= config.missing_fraction_threshold) {
      if (report) report->retained.push_back(network.ego_user_id);
      kept.push_back(std::move(network));
    } else {
      log_info("dropping network " + network.ego_user_id +
               ": estimated missing fraction " + std::to_string(fraction));
      if (report) report->dropped.push_back({network.ego_user_id, fraction});
    }
  }
  return kept;
}

std::string filter_report_to_json(const FilterReport& report) {
  json doc;
  doc["retained"] = report.retained;
  json dropped = json::array();
  for (const FilterDecision& d : report.dropped) {
    json entry;
    entry["id"] = d.ego_user_id;
    entry["missing_fraction"] = d.missing_fraction;
    dropped.push_back(entry);
  }
  doc["dropped"] = dropped;
  return doc.dump(2) + "\n";
}

}  // namespace echodetect
