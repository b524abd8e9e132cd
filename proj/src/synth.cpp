#include "echodetect/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "echodetect/analytics.hpp"
#include "echodetect/common.hpp"
#include "echodetect/textpipe.hpp"
#include "echodetect/windows.hpp"

namespace echodetect {

namespace {

using nlohmann::json;

constexpr int kWordsPerTweet = 12;
constexpr double kZipfExponent = 1.1;
constexpr TimestampMs kEpochBase = 1325376000000;  // 2012-01-01T00:00:00Z

// All randomness flows through these two helpers so the byte-level
// output never depends on the platform's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(engine_() % n);
  }

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

 private:
  std::mt19937_64 engine_;
};

// Zipf-weighted sampling over token indices.
class ZipfTable {
 public:
  explicit ZipfTable(int size) {
    cumulative_.reserve(static_cast<std::size_t>(size));
    double total = 0.0;
    for (int k = 0; k < size; ++k) {
      total += 1.0 / std::pow(static_cast<double>(k + 1), kZipfExponent);
      cumulative_.push_back(total);
    }
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform01() * cumulative_.back();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

std::vector<std::string> draw_distinct_words(Rng& rng, const ZipfTable& table,
                                             const std::string& prefix,
                                             int vocab_size, int count) {
  const int want = std::min(count, vocab_size);
  std::unordered_set<std::size_t> chosen;
  std::vector<std::string> words;
  int attempts = 0;
  while (static_cast<int>(words.size()) < want) {
    std::size_t idx = table.draw(rng);
    if (++attempts > 200 * want) {
      // Tiny vocabularies can make rejection slow; sweep in order.
      for (std::size_t k = 0; static_cast<int>(words.size()) < want; ++k) {
        if (chosen.insert(k).second) {
          words.push_back(prefix + std::to_string(k));
        }
      }
      break;
    }
    if (chosen.insert(idx).second) {
      words.push_back(prefix + std::to_string(idx));
    }
  }
  return words;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

std::vector<PlantedKind> plan_kinds(const SynthConfig& config, Rng& rng) {
  const double weights[] = {
      config.mix.explicit_retweet, config.mix.explicit_reply,
      config.mix.implicit_copy, config.mix.implicit_edited,
      config.mix.unrelated,
  };
  static const PlantedKind kinds[] = {
      PlantedKind::ExplicitRetweet, PlantedKind::ExplicitReply,
      PlantedKind::ImplicitCopy, PlantedKind::ImplicitEdited,
      PlantedKind::Unrelated,
  };
  const int n = config.ego_tweet_count;

  // Largest-remainder allocation keeps the realized mix as close to
  // the requested one as integer counts allow.
  int counts[5];
  double remainders[5];
  int assigned = 0;
  for (int i = 0; i < 5; ++i) {
    const double exact = weights[i] * n;
    counts[i] = static_cast<int>(std::floor(exact));
    remainders[i] = exact - counts[i];
    assigned += counts[i];
  }
  int order[5] = {0, 1, 2, 3, 4};
  std::stable_sort(order, order + 5, [&remainders](int a, int b) {
    return remainders[a] > remainders[b];
  });
  for (int i = 0; assigned < n; ++i) {
    ++counts[order[i % 5]];
    ++assigned;
  }

  std::vector<PlantedKind> plan;
  plan.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < 5; ++i) {
    plan.insert(plan.end(), static_cast<std::size_t>(counts[i]), kinds[i]);
  }
  for (std::size_t i = plan.size(); i > 1; --i) {
    std::swap(plan[i - 1], plan[rng.uniform_index(i)]);
  }
  return plan;
}

std::string zero_padded(int value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return digits;
}

void validate(const SynthConfig& config) {
  if (config.num_followees < 1) {
    raise(Errc::InvalidArgument, "num_followees must be at least 1");
  }
  if (config.tweets_per_followee < 1) {
    raise(Errc::InvalidArgument, "tweets_per_followee must be at least 1");
  }
  if (config.ego_tweet_count < 1) {
    raise(Errc::InvalidArgument, "ego_tweet_count must be at least 1");
  }
  if (config.vocab_size < 1) {
    raise(Errc::InvalidArgument, "vocab_size must be at least 1");
  }
  if (config.window_size < 1) {
    raise(Errc::InvalidArgument, "window_size must be at least 1");
  }
  if (config.mean_interarrival_seconds <= 0.0) {
    raise(Errc::InvalidArgument, "mean_interarrival_seconds must be positive");
  }
  if (config.edit_rate < 0.0 || config.edit_rate >= 1.0) {
    raise(Errc::InvalidArgument, "edit_rate must lie in [0, 1)");
  }
  const double weights[] = {
      config.mix.explicit_retweet, config.mix.explicit_reply,
      config.mix.implicit_copy, config.mix.implicit_edited,
      config.mix.unrelated,
  };
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) raise(Errc::InvalidArgument, "mix weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    raise(Errc::InvalidArgument, "mix weights must sum to 1");
  }
}

}  // namespace

const char* planted_kind_name(PlantedKind kind) {
  switch (kind) {
    case PlantedKind::ExplicitRetweet: return "explicit_retweet";
    case PlantedKind::ExplicitReply: return "explicit_reply";
    case PlantedKind::ImplicitCopy: return "implicit_copy";
    case PlantedKind::ImplicitEdited: return "implicit_edited";
    case PlantedKind::Unrelated: return "unrelated";
  }
  return "unknown";
}

bool parse_planted_kind(std::string_view name, PlantedKind& out) {
  if (name == "explicit_retweet") {
    out = PlantedKind::ExplicitRetweet;
  } else if (name == "explicit_reply") {
    out = PlantedKind::ExplicitReply;
  } else if (name == "implicit_copy") {
    out = PlantedKind::ImplicitCopy;
  } else if (name == "implicit_edited") {
    out = PlantedKind::ImplicitEdited;
  } else if (name == "unrelated") {
    out = PlantedKind::Unrelated;
  } else {
    return false;
  }
  return true;
}

SynthResult generate_network(const SynthConfig& config) {
  validate(config);
  Rng rng(config.seed);
  const ZipfTable zipf(config.vocab_size);

  SynthResult result;
  EgoNetwork& network = result.network;
  network.ego_user_id = "ego";
  network.ego_username = "egouser";

  // Followee streams first: independent arrival processes over a
  // shared vocabulary partition.
  for (int f = 0; f < config.num_followees; ++f) {
    FolloweeRecord rec;
    rec.followee_id = "f" + std::to_string(f);
    rec.username = "flw" + std::to_string(f);
    TimestampMs t = kEpochBase;
    for (int j = 0; j < config.tweets_per_followee; ++j) {
      t += static_cast<TimestampMs>(std::llround(
          rng.exponential(config.mean_interarrival_seconds * 1000.0)));
      Tweet tweet;
      tweet.tweet_id = rec.followee_id + "t" + zero_padded(j, 4);
      tweet.author_id = rec.followee_id;
      tweet.author_username = rec.username;
      tweet.created_at = t;
      tweet.text = join_words(draw_distinct_words(rng, zipf, "w",
                                                  config.vocab_size,
                                                  kWordsPerTweet));
      rec.tweets.push_back(std::move(tweet));
    }
    rec.first_seen = rec.tweets.front().created_at;
    rec.last_seen = rec.tweets.back().created_at;
    network.followees.emplace(rec.followee_id, std::move(rec));
  }

  TimestampMs first_activity = 0;
  TimestampMs last_activity = 0;
  TimestampMs covered_from = 0;
  TimestampMs covered_to = 0;
  bool first = true;
  for (const auto& [id, rec] : network.followees) {
    if (first || rec.first_seen < first_activity) first_activity = rec.first_seen;
    if (first || rec.last_seen > last_activity) last_activity = rec.last_seen;
    if (first || rec.first_seen > covered_from) covered_from = rec.first_seen;
    if (first || rec.last_seen < covered_to) covered_to = rec.last_seen;
    first = false;
  }

  // Ego tweet times land strictly after the earliest followee tweet,
  // so every window has at least one member. They also stay inside
  // the stretch covered by every followee at once, keeping the
  // estimated missing fraction at zero so generated networks pass
  // the dataset filter.
  TimestampMs range_start = covered_from;
  TimestampMs range_end = covered_to;
  if (range_start >= range_end) {  // followee spans do not intersect
    range_start = first_activity;
    range_end = last_activity;
  }
  std::vector<TimestampMs> ego_times;
  ego_times.reserve(static_cast<std::size_t>(config.ego_tweet_count));
  const TimestampMs span = range_end - range_start;
  for (int i = 0; i < config.ego_tweet_count; ++i) {
    const TimestampMs offset =
        1 + static_cast<TimestampMs>(rng.uniform01() * static_cast<double>(span));
    ego_times.push_back(range_start + std::min(offset, span));
  }
  std::sort(ego_times.begin(), ego_times.end());

  const std::vector<PlantedKind> plan = plan_kinds(config, rng);
  const WindowBuilder builder(network);

  for (int i = 0; i < config.ego_tweet_count; ++i) {
    Tweet tweet;
    tweet.tweet_id = "e" + zero_padded(i, 4);
    tweet.author_id = network.ego_user_id;
    tweet.author_username = network.ego_username;
    tweet.created_at = ego_times[static_cast<std::size_t>(i)];

    const PlantedKind kind = plan[static_cast<std::size_t>(i)];
    PlantedTruth truth;
    truth.kind = kind;

    if (kind == PlantedKind::Unrelated) {
      tweet.kind = TweetKind::Original;
      tweet.text = join_words(draw_distinct_words(rng, zipf, "u",
                                                  config.vocab_size,
                                                  kWordsPerTweet));
    } else {
      const Window window = builder.window_for(tweet, config.window_size);
      if (window.empty()) {
        raise(Errc::Internal, "generated ego tweet has an empty window");
      }
      const Tweet& source =
          *window.members[rng.uniform_index(window.members.size())];
      truth.source_tweet_id = source.tweet_id;

      switch (kind) {
        case PlantedKind::ImplicitCopy:
          tweet.kind = TweetKind::Original;
          tweet.text = "rt @" + source.author_username + ": " + source.text;
          break;
        case PlantedKind::ImplicitEdited: {
          tweet.kind = TweetKind::Original;
          std::vector<std::string> words = split_words(source.text);
          const int drop = static_cast<int>(
              std::floor(config.edit_rate * static_cast<double>(words.size())));
          for (int d = 0; d < drop; ++d) {
            words.erase(words.begin() +
                        static_cast<std::ptrdiff_t>(rng.uniform_index(words.size())));
          }
          tweet.text = "rt @" + source.author_username + ": " + join_words(words);
          break;
        }
        case PlantedKind::ExplicitRetweet:
          tweet.kind = TweetKind::Retweet;
          tweet.retweeted_tweet_id = source.tweet_id;
          tweet.text = "rt @" + source.author_username + ": " + source.text;
          break;
        case PlantedKind::ExplicitReply: {
          tweet.kind = TweetKind::Reply;
          tweet.replied_tweet_id = source.tweet_id;
          std::vector<std::string> words = split_words(source.text);
          const int take = static_cast<int>(std::min<std::size_t>(3, words.size()));
          std::string text = "@" + source.author_username;
          for (int w = 0; w < take; ++w) {
            text += ' ';
            text += words[rng.uniform_index(words.size())];
          }
          text += ' ';
          text += "w" + std::to_string(zipf.draw(rng));
          tweet.text = text;
          break;
        }
        case PlantedKind::Unrelated:
          break;
      }
    }

    result.truth.by_tweet_id.emplace(tweet.tweet_id, std::move(truth));
    network.ego_tweets.push_back(std::move(tweet));
  }

  std::sort(network.ego_tweets.begin(), network.ego_tweets.end(),
            tweet_order_less);

  // Paranoia: every planted source must actually sit inside the final
  // window of its target.
  const std::vector<Window> windows =
      build_all_windows(network, config.window_size);
  for (std::size_t i = 0; i < network.ego_tweets.size(); ++i) {
    const PlantedTruth& truth =
        result.truth.by_tweet_id.at(network.ego_tweets[i].tweet_id);
    if (truth.source_tweet_id.empty()) continue;
    bool present = false;
    for (const Tweet* member : windows[i].members) {
      if (member->tweet_id == truth.source_tweet_id) {
        present = true;
        break;
      }
    }
    if (!present) {
      raise(Errc::Internal, "planted source " + truth.source_tweet_id +
                                " fell outside the window of " +
                                network.ego_tweets[i].tweet_id);
    }
  }
  return result;
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  json tweets = json::object();
  for (const auto& [id, planted] : truth.by_tweet_id) {
    json entry;
    entry["kind"] = planted_kind_name(planted.kind);
    if (planted.source_tweet_id.empty()) {
      entry["source_tweet_id"] = nullptr;
    } else {
      entry["source_tweet_id"] = planted.source_tweet_id;
    }
    tweets[id] = entry;
  }
  json doc;
  doc["schema_version"] = "1";
  doc["tweets"] = tweets;
  return doc.dump(2) + "\n";
}

GroundTruth ground_truth_from_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    raise(Errc::Parse, std::string("invalid ground truth JSON: ") + e.what());
  }
  GroundTruth truth;
  try {
    if (doc.at("schema_version").get<std::string>() != "1") {
      raise(Errc::Parse, "unsupported ground truth schema_version");
    }
    for (const auto& [id, entry] : doc.at("tweets").items()) {
      PlantedTruth planted;
      const std::string kind_name = entry.at("kind").get<std::string>();
      if (!parse_planted_kind(kind_name, planted.kind)) {
        raise(Errc::Parse, "unknown planted kind \"" + kind_name + "\"");
      }
      const json& source = entry.at("source_tweet_id");
      if (!source.is_null()) planted.source_tweet_id = source.get<std::string>();
      truth.by_tweet_id.emplace(id, std::move(planted));
    }
  } catch (const json::exception& e) {
    raise(Errc::Parse, std::string("invalid ground truth JSON: ") + e.what());
  }
  return truth;
}

GroundTruth load_ground_truth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::Io, "cannot open \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) raise(Errc::Io, "error reading \"" + path + "\"");
  try {
    return ground_truth_from_json(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::optional<double> brute_force_score(const EgoNetwork& network,
                                        const Tweet& target, int window_size) {
  if (window_size <= 0) {
    raise(Errc::InvalidArgument, "window size must be positive");
  }

  // The most recent followee tweets strictly before a given one.
  auto window_of = [&network, window_size](const Tweet& t) {
    std::vector<const Tweet*> before;
    for (const auto& [id, rec] : network.followees) {
      if (id == network.ego_user_id) continue;
      for (const Tweet& ft : rec.tweets) {
        if (ft.created_at < t.created_at ||
            (ft.created_at == t.created_at && ft.tweet_id < t.tweet_id)) {
          before.push_back(&ft);
        }
      }
    }
    std::sort(before.begin(), before.end(), [](const Tweet* a, const Tweet* b) {
      if (a->created_at != b->created_at) return a->created_at > b->created_at;
      return a->tweet_id > b->tweet_id;
    });
    std::vector<const Tweet*> members;
    std::unordered_set<std::string_view> seen;
    for (const Tweet* ft : before) {
      if (static_cast<int>(members.size()) >= window_size) break;
      if (seen.insert(ft->tweet_id).second) members.push_back(ft);
    }
    return members;
  };

  const std::vector<const Tweet*> members = window_of(target);
  if (members.empty()) return std::nullopt;

  // The corpus spans the windows of every ego tweet, not just this one.
  std::unordered_map<std::string_view, const Tweet*> corpus;
  for (const Tweet& ego : network.ego_tweets) {
    for (const Tweet* member : window_of(ego)) {
      corpus.emplace(member->tweet_id, member);
    }
  }

  std::unordered_map<std::string_view, FeatureSet> features;
  std::map<std::string, int> df;
  for (const auto& [id, doc] : corpus) {
    FeatureSet fs = extract_features(doc->text, doc->author_username);
    for (const auto& [value, count] : fs.counts()) ++df[value];
    features.emplace(id, std::move(fs));
  }
  const double n_docs = static_cast<double>(corpus.size());
  auto idf = [&df, n_docs](const std::string& term) {
    return std::log((1.0 + n_docs) / (1.0 + df.at(term))) + 1.0;
  };

  auto pair_score = [&](const FeatureSet& query, const FeatureSet& doc) {
    double sum = 0.0;
    for (const auto& [value, count] : query.counts()) {
      const int doc_count = doc.count_of(value);
      if (doc_count > 0) sum += doc_count * idf(value);
    }
    return sum;
  };

  double normalization = 0.0;
  for (const Tweet* member : members) {
    const FeatureSet& fs = features.at(member->tweet_id);
    normalization = std::max(normalization, pair_score(fs, fs));
  }

  const FeatureSet query = extract_features(target.text, target.author_username);
  double best = 0.0;
  for (const Tweet* member : members) {
    best = std::max(best, pair_score(query, features.at(member->tweet_id)));
  }
  if (normalization <= 0.0) return 0.0;
  return best / normalization;
}

DetectionMetrics evaluate_detection(const ScoredNetwork& scored,
                                    const GroundTruth& truth,
                                    double threshold) {
  DetectionMetrics metrics;

  std::unordered_map<std::string_view, const ScoredTweet*> scored_by_id;
  std::unordered_set<std::string_view> known_ids;
  for (const ScoredTweet& t : scored.tweets) {
    if (truth.by_tweet_id.find(t.tweet_id) == truth.by_tweet_id.end()) {
      raise(Errc::InvalidArgument,
            "scored tweet " + t.tweet_id + " is missing from the ground truth");
    }
    scored_by_id.emplace(t.tweet_id, &t);
    known_ids.insert(t.tweet_id);
  }
  for (const std::string& id : scored.unscored_ids) {
    if (truth.by_tweet_id.find(id) == truth.by_tweet_id.end()) {
      raise(Errc::InvalidArgument,
            "unscored tweet " + id + " is missing from the ground truth");
    }
    known_ids.insert(id);
  }
  for (const auto& [id, planted] : truth.by_tweet_id) {
    if (known_ids.find(id) == known_ids.end()) {
      raise(Errc::InvalidArgument,
            "ground truth tweet " + id + " is missing from the scored output");
    }
  }

  std::map<std::string, int> kind_positives;
  std::map<std::string, int> kind_hits;
  int best_match_checked = 0;
  int best_match_correct = 0;

  for (const auto& [id, planted] : truth.by_tweet_id) {
    const bool implicit = planted.kind == PlantedKind::ImplicitCopy ||
                          planted.kind == PlantedKind::ImplicitEdited;
    auto it = scored_by_id.find(id);
    const ScoredTweet* tweet = it == scored_by_id.end() ? nullptr : it->second;

    // Tagged tweets are outside the detector's job; skip them.
    if (planted.kind == PlantedKind::ExplicitRetweet ||
        planted.kind == PlantedKind::ExplicitReply) {
      continue;
    }

    const bool flagged =
        tweet != nullptr && classify_high(tweet->score, threshold);
    if (implicit) {
      ++metrics.positives_total;
      ++kind_positives[planted_kind_name(planted.kind)];
      if (flagged) {
        ++metrics.true_positives;
        ++kind_hits[planted_kind_name(planted.kind)];
        ++best_match_checked;
        if (tweet->best_match_id == planted.source_tweet_id) {
          ++best_match_correct;
        }
      } else {
        ++metrics.false_negatives;
      }
    } else {
      if (flagged) {
        ++metrics.false_positives;
      } else {
        ++metrics.true_negatives;
      }
    }
    if (flagged) ++metrics.detected;
  }

  if (metrics.true_positives + metrics.false_positives > 0) {
    metrics.precision =
        static_cast<double>(metrics.true_positives) /
        (metrics.true_positives + metrics.false_positives);
  }
  if (metrics.positives_total > 0) {
    metrics.recall = static_cast<double>(metrics.true_positives) /
                     metrics.positives_total;
  }
  for (const auto& [kind, total] : kind_positives) {
    auto hit = kind_hits.find(kind);
    metrics.recall_by_kind[kind] =
        static_cast<double>(hit == kind_hits.end() ? 0 : hit->second) / total;
  }
  if (best_match_checked > 0) {
    metrics.best_match_accuracy =
        static_cast<double>(best_match_correct) / best_match_checked;
  }
  return metrics;
}

std::string detection_metrics_to_json(const DetectionMetrics& metrics) {
  json doc;
  doc["positives_total"] = metrics.positives_total;
  doc["detected"] = metrics.detected;
  doc["true_positives"] = metrics.true_positives;
  doc["false_positives"] = metrics.false_positives;
  doc["false_negatives"] = metrics.false_negatives;
  doc["true_negatives"] = metrics.true_negatives;
  doc["precision"] = metrics.precision ? json(*metrics.precision) : json(nullptr);
  doc["recall"] = metrics.recall ? json(*metrics.recall) : json(nullptr);
  json by_kind = json::object();
  for (const auto& [kind, value] : metrics.recall_by_kind) {
    by_kind[kind] = value ? json(*value) : json(nullptr);
  }
  doc["recall_by_kind"] = by_kind;
  doc["best_match_accuracy"] = metrics.best_match_accuracy
                                   ? json(*metrics.best_match_accuracy)
                                   : json(nullptr);
  return doc.dump(2) + "\n";
}

}  // namespace echodetect
