#include "echodetect/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "echodetect/common.hpp"

namespace echodetect {

namespace {

using nlohmann::json;

}  // namespace

Corpus build_corpus(const EgoNetwork& network,
                    const std::vector<Window>& windows) {
  std::unordered_set<std::string_view> member_ids;
  for (const Window& w : windows) {
    for (const Tweet* t : w.members) member_ids.insert(t->tweet_id);
  }
  if (member_ids.empty()) {
    raise(Errc::Empty, "network " + network.ego_user_id +
                           ": no window has any members, corpus is empty");
  }

  Corpus corpus;
  corpus.docs.reserve(member_ids.size());
  for (const auto& [id, rec] : network.followees) {
    for (const Tweet& t : rec.tweets) {
      if (member_ids.count(t.tweet_id)) corpus.docs.push_back(&t);
    }
  }
  std::sort(corpus.docs.begin(), corpus.docs.end(),
            [](const Tweet* a, const Tweet* b) { return tweet_order_less(*a, *b); });
  // A duplicate id under two followees resolves to one document.
  auto last = std::unique(corpus.docs.begin(), corpus.docs.end(),
                          [](const Tweet* a, const Tweet* b) {
                            return a->tweet_id == b->tweet_id;
                          });
  corpus.docs.erase(last, corpus.docs.end());

  corpus.features.reserve(corpus.docs.size());
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    const Tweet* t = corpus.docs[i];
    corpus.features.push_back(
        extract_features(t->text, t->author_username));
    corpus.index_by_id.emplace(t->tweet_id, i);
  }
  return corpus;
}

TfIdfModel TfIdfModel::fit(const Corpus& corpus) {
  TfIdfModel model;
  const std::size_t n_docs = corpus.size();

  // Vocabulary: every distinct term value, sorted.
  {
    std::vector<std::string_view> values;
    for (const FeatureSet& fs : corpus.features) {
      for (const auto& [value, count] : fs.counts()) values.push_back(value);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    model.vocabulary_.assign(values.begin(), values.end());
  }

  // Document frequencies, then smoothed idf.
  std::vector<std::size_t> df(model.vocabulary_.size(), 0);
  auto index_of = [&model](std::string_view value) {
    auto it = std::lower_bound(model.vocabulary_.begin(),
                               model.vocabulary_.end(), value);
    return static_cast<std::size_t>(it - model.vocabulary_.begin());
  };
  for (const FeatureSet& fs : corpus.features) {
    for (const auto& [value, count] : fs.counts()) ++df[index_of(value)];
  }
  model.idf_.resize(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) {
    model.idf_[i] = std::log(static_cast<double>(1 + n_docs) /
                             static_cast<double>(1 + df[i])) +
                    1.0;
  }

  // Sparse weight rows, ascending by vocabulary index; self scores
  // accumulate in the same order.
  model.rows_.resize(n_docs);
  model.self_scores_.resize(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    auto& row = model.rows_[d];
    row.reserve(corpus.features[d].counts().size());
    for (const auto& [value, count] : corpus.features[d].counts()) {
      std::uint32_t idx = static_cast<std::uint32_t>(index_of(value));
      row.emplace_back(idx, static_cast<double>(count) * model.idf_[idx]);
    }
    std::sort(row.begin(), row.end());
    double self = 0.0;
    for (const auto& [idx, weight] : row) self += weight;
    model.self_scores_[d] = self;
  }
  return model;
}

std::optional<double> TfIdfModel::idf_of(std::string_view term) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), term);
  if (it == vocabulary_.end() || *it != term) return std::nullopt;
  return idf_[static_cast<std::size_t>(it - vocabulary_.begin())];
}

std::vector<std::uint32_t> TfIdfModel::term_indices(
    const FeatureSet& query) const {
  std::vector<std::uint32_t> indices;
  indices.reserve(query.counts().size());
  for (const auto& [value, count] : query.counts()) {
    auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), value);
    if (it != vocabulary_.end() && *it == value) {
      indices.push_back(static_cast<std::uint32_t>(it - vocabulary_.begin()));
    }
  }
  return indices;  // counts() is sorted by value, so indices ascend
}

double TfIdfModel::pair_score(const std::vector<std::uint32_t>& query_indices,
                              std::size_t doc) const {
  const auto& row = rows_[doc];
  double sum = 0.0;
  std::size_t qi = 0, ri = 0;
  while (qi < query_indices.size() && ri < row.size()) {
    if (query_indices[qi] < row[ri].first) {
      ++qi;
    } else if (row[ri].first < query_indices[qi]) {
      ++ri;
    } else {
      sum += row[ri].second;
      ++qi;
      ++ri;
    }
  }
  return sum;
}

double TfIdfModel::pair_score(const FeatureSet& query, std::size_t doc) const {
  return pair_score(term_indices(query), doc);
}

double TfIdfModel::self_score(std::size_t doc) const {
  return self_scores_[doc];
}

double window_normalization(const TfIdfModel& model, const Corpus& corpus,
                            const Window& window) {
  if (window.empty()) {
    raise(Errc::Empty, "window for " + window.target_tweet_id + " is empty");
  }
  double best = 0.0;
  for (const Tweet* member : window.members) {
    auto it = corpus.index_by_id.find(member->tweet_id);
    if (it == corpus.index_by_id.end()) {
      raise(Errc::Internal,
            "window member " + member->tweet_id + " missing from corpus");
    }
    best = std::max(best, model.self_score(it->second));
  }
  return best;
}

const char* category_name(TweetKind kind) {
  switch (kind) {
    case TweetKind::Reply: return "reply";
    case TweetKind::Retweet: return "retweet";
    case TweetKind::Original: return "nontagged";
  }
  return "unknown";
}

ScoredTweet score_tweet(const TfIdfModel& model, const Corpus& corpus,
                        const Tweet& tweet, const Window& window) {
  const double normalization = window_normalization(model, corpus, window);
  const std::vector<std::uint32_t> query_indices =
      model.term_indices(extract_features(tweet.text, tweet.author_username));

  // Members come newest first; a strict comparison keeps the most
  // recent member on ties.
  double best_raw = -1.0;
  const Tweet* best_member = nullptr;
  for (const Tweet* member : window.members) {
    const std::size_t doc = corpus.index_by_id.at(member->tweet_id);
    const double raw = model.pair_score(query_indices, doc);
    if (raw > best_raw) {
      best_raw = raw;
      best_member = member;
    }
  }

  ScoredTweet scored;
  scored.tweet_id = tweet.tweet_id;
  scored.kind = tweet.kind;
  scored.best_match_id = best_member->tweet_id;
  scored.window_size = static_cast<int>(window.size());
  scored.score = normalization > 0.0 ? best_raw / normalization : 0.0;
  return scored;
}

ScoredNetwork score_network(const EgoNetwork& network,
                            const DatasetConfig& config) {
  ScoredNetwork result;
  result.ego_user_id = network.ego_user_id;
  result.ego_username = network.ego_username;
  result.config = config;
  result.total_authored = static_cast<int>(network.ego_tweets.size());
  for (const Tweet& t : network.ego_tweets) {
    if (t.kind == TweetKind::Reply) ++result.tagged_replies;
    if (t.kind == TweetKind::Retweet) ++result.tagged_retweets;
  }

  const std::vector<Window> windows =
      build_all_windows(network, config.window_size);
  const ReplyCoverage coverage = replies_in_window(network, windows);
  result.replies_total = coverage.replies_total;
  result.replies_in_window = coverage.replies_in_window;

  Corpus corpus;
  try {
    corpus = build_corpus(network, windows);
  } catch (const Error& e) {
    if (e.code() != Errc::Empty) throw;
    result.empty_corpus = true;
    for (const Tweet& t : network.ego_tweets) {
      result.unscored_ids.push_back(t.tweet_id);
    }
    return result;
  }
  const TfIdfModel model = TfIdfModel::fit(corpus);

  for (std::size_t i = 0; i < network.ego_tweets.size(); ++i) {
    const Tweet& t = network.ego_tweets[i];
    if (windows[i].empty()) {
      result.unscored_ids.push_back(t.tweet_id);
      continue;
    }
    result.tweets.push_back(score_tweet(model, corpus, t, windows[i]));
    result.window_lengths_hours.push_back(window_time_length_hours(windows[i]));
  }
  return result;
}

std::string format_score(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string scored_network_to_csv(const ScoredNetwork& scored) {
  std::string out = "tweet_id,category,score,best_match_id,window_size\n";
  for (const ScoredTweet& t : scored.tweets) {
    out += t.tweet_id;
    out += ',';
    out += category_name(t.kind);
    out += ',';
    out += format_score(t.score);
    out += ',';
    out += t.best_match_id;
    out += ',';
    out += std::to_string(t.window_size);
    out += '\n';
  }
  return out;
}

std::string scored_network_to_json(const ScoredNetwork& scored) {
  json doc;
  doc["schema_version"] = "1";
  doc["ego_user_id"] = scored.ego_user_id;
  doc["ego_username"] = scored.ego_username;
  doc["config"] = {
      {"window_size", scored.config.window_size},
      {"high_score_threshold", scored.config.high_score_threshold},
      {"missing_fraction_threshold", scored.config.missing_fraction_threshold},
  };
  doc["total_authored"] = scored.total_authored;
  doc["tagged_replies"] = scored.tagged_replies;
  doc["tagged_retweets"] = scored.tagged_retweets;
  doc["empty_corpus"] = scored.empty_corpus;
  doc["replies_total"] = scored.replies_total;
  doc["replies_in_window"] = scored.replies_in_window;
  doc["window_lengths_hours"] = scored.window_lengths_hours;
  json tweets = json::array();
  for (const ScoredTweet& t : scored.tweets) {
    tweets.push_back({
        {"tweet_id", t.tweet_id},
        {"category", category_name(t.kind)},
        {"score", t.score},
        {"best_match_id", t.best_match_id},
        {"window_size", t.window_size},
    });
  }
  doc["tweets"] = tweets;
  doc["unscored"] = scored.unscored_ids;
  return doc.dump(2) + "\n";
}

namespace {

TweetKind kind_from_category(const std::string& name) {
  if (name == "reply") return TweetKind::Reply;
  if (name == "retweet") return TweetKind::Retweet;
  if (name == "nontagged") return TweetKind::Original;
  raise(Errc::Parse, "unknown category \"" + name + "\"");
}

}  // namespace

ScoredNetwork scored_network_from_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    raise(Errc::Parse, std::string("invalid scored network JSON: ") + e.what());
  }
  try {
    ScoredNetwork scored;
    if (doc.at("schema_version").get<std::string>() != "1") {
      raise(Errc::Parse, "unsupported scored network schema_version");
    }
    scored.ego_user_id = doc.at("ego_user_id").get<std::string>();
    scored.ego_username = doc.at("ego_username").get<std::string>();
    const json& config = doc.at("config");
    scored.config.window_size = config.at("window_size").get<int>();
    scored.config.high_score_threshold =
        config.at("high_score_threshold").get<double>();
    scored.config.missing_fraction_threshold =
        config.at("missing_fraction_threshold").get<double>();
    scored.total_authored = doc.at("total_authored").get<int>();
    scored.tagged_replies = doc.at("tagged_replies").get<int>();
    scored.tagged_retweets = doc.at("tagged_retweets").get<int>();
    scored.empty_corpus = doc.at("empty_corpus").get<bool>();
    scored.replies_total = doc.at("replies_total").get<int>();
    scored.replies_in_window = doc.at("replies_in_window").get<int>();
    scored.window_lengths_hours =
        doc.at("window_lengths_hours").get<std::vector<double>>();
    for (const json& t : doc.at("tweets")) {
      ScoredTweet st;
      st.tweet_id = t.at("tweet_id").get<std::string>();
      st.kind = kind_from_category(t.at("category").get<std::string>());
      st.score = t.at("score").get<double>();
      st.best_match_id = t.at("best_match_id").get<std::string>();
      st.window_size = t.at("window_size").get<int>();
      scored.tweets.push_back(std::move(st));
    }
    scored.unscored_ids = doc.at("unscored").get<std::vector<std::string>>();
    return scored;
  } catch (const json::exception& e) {
    raise(Errc::Parse, std::string("invalid scored network JSON: ") + e.what());
  }
}

ScoredNetwork load_scored_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::Io, "cannot open \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) raise(Errc::Io, "error reading \"" + path + "\"");
  try {
    return scored_network_from_json(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

}  // namespace echodetect
