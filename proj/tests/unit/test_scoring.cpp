#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <echodetect/common.hpp>
#include <echodetect/scoring.hpp>

#include "test_support.hpp"

using namespace echodetect;
using testsup::make_reply;
using testsup::make_tweet;
using testsup::NetworkBuilder;

namespace {

constexpr TimestampMs kHour = 3600 * 1000;

// Three followee documents built from two-letter tokens, which pass
// through the stemmer untouched and are not stopwords. Every
// document also carries its author term "alice".
//
//   d1 (1h): "aa bb"        -> {aa:1, bb:1, alice:1}
//   d2 (2h): "bb cc cc"     -> {bb:1, cc:2, alice:1}
//   d3 (3h): "aa bb cc dd"  -> {aa:1, bb:1, cc:1, dd:1, alice:1}
//
// df: aa 2, bb 3, cc 2, dd 1, alice 3, and idf = ln(4/(1+df)) + 1.
EgoNetwork corpus_network() {
  NetworkBuilder builder("e1", "ego");
  builder.followee("u2", "alice",
                   {make_tweet("d1", "", "", 1 * kHour, "aa bb"),
                    make_tweet("d2", "", "", 2 * kHour, "bb cc cc"),
                    make_tweet("d3", "", "", 3 * kHour, "aa bb cc dd")});
  builder.ego_tweet(make_tweet("t1", "", "", 10 * kHour, "aa cc cc"));
  return builder.finish();
}

const double kIdfRare = std::log(4.0 / 2.0) + 1.0;    // df = 1
const double kIdfMid = std::log(4.0 / 3.0) + 1.0;     // df = 2
const double kIdfCommon = std::log(4.0 / 4.0) + 1.0;  // df = 3, exactly 1

const double kSelfD1 = kIdfMid + kIdfCommon + kIdfCommon;
const double kSelfD2 = kIdfCommon + 2.0 * kIdfMid + kIdfCommon;
const double kSelfD3 =
    kIdfMid + kIdfCommon + kIdfMid + kIdfRare + kIdfCommon;

}  // namespace

TEST_CASE("idf weights come out of the smoothed formula") {
  const EgoNetwork network = corpus_network();
  const auto windows = build_all_windows(network, 100);
  const Corpus corpus = build_corpus(network, windows);
  REQUIRE(corpus.size() == 3);
  const TfIdfModel model = TfIdfModel::fit(corpus);

  CHECK(model.vocabulary_size() == 5);
  CHECK(model.idf_of("bb") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(model.idf_of("alice") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(model.idf_of("aa") == doctest::Approx(kIdfMid).epsilon(1e-15));
  CHECK(model.idf_of("dd") == doctest::Approx(kIdfRare).epsilon(1e-15));
  CHECK_FALSE(model.idf_of("zz").has_value());

  SUBCASE("self scores sum count-weighted idf per document") {
    const std::size_t d1 = corpus.index_by_id.at("d1");
    const std::size_t d2 = corpus.index_by_id.at("d2");
    const std::size_t d3 = corpus.index_by_id.at("d3");
    CHECK(model.self_score(d1) == doctest::Approx(kSelfD1).epsilon(1e-15));
    CHECK(model.self_score(d2) == doctest::Approx(kSelfD2).epsilon(1e-15));
    CHECK(model.self_score(d3) == doctest::Approx(kSelfD3).epsilon(1e-15));
  }

  SUBCASE("pair scores use the document's counts over shared terms") {
    const FeatureSet query = extract_features("aa cc cc", "ego");
    const std::size_t d1 = corpus.index_by_id.at("d1");
    const std::size_t d2 = corpus.index_by_id.at("d2");
    const std::size_t d3 = corpus.index_by_id.at("d3");
    // Query terms {aa, cc, ego}; "ego" is outside the vocabulary.
    CHECK(model.pair_score(query, d1) ==
          doctest::Approx(kIdfMid).epsilon(1e-15));
    CHECK(model.pair_score(query, d2) ==
          doctest::Approx(2.0 * kIdfMid).epsilon(1e-15));
    CHECK(model.pair_score(query, d3) ==
          doctest::Approx(2.0 * kIdfMid).epsilon(1e-15));
  }

  SUBCASE("query multiplicity does not change the pair score") {
    const FeatureSet once = extract_features("cc", "ego");
    const FeatureSet thrice = extract_features("cc cc cc", "ego");
    const std::size_t d2 = corpus.index_by_id.at("d2");
    CHECK(model.pair_score(once, d2) == model.pair_score(thrice, d2));
  }

  SUBCASE("the normalization is the window's largest self score") {
    CHECK(window_normalization(model, corpus, windows[0]) ==
          doctest::Approx(kSelfD3).epsilon(1e-15));
  }
}

TEST_CASE("score ties resolve to the most recent window member") {
  // "aa cc cc" scores 2*idf_mid against both d2 and d3; d3 is newer.
  const EgoNetwork network = corpus_network();
  DatasetConfig config;
  const ScoredNetwork scored = score_network(network, config);
  REQUIRE(scored.tweets.size() == 1);
  const ScoredTweet& t = scored.tweets[0];
  CHECK(t.tweet_id == "t1");
  CHECK(t.best_match_id == "d3");
  CHECK(t.score == doctest::Approx(2.0 * kIdfMid / kSelfD3).epsilon(1e-12));
  CHECK(t.window_size == 3);
  CHECK(t.kind == TweetKind::Original);
}

TEST_CASE("quoting the strongest document verbatim scores exactly one") {
  NetworkBuilder builder("e1", "ego");
  builder.followee("u2", "alice",
                   {make_tweet("d1", "", "", 1 * kHour, "aa bb"),
                    make_tweet("d2", "", "", 2 * kHour, "bb cc cc"),
                    make_tweet("d3", "", "", 3 * kHour, "aa bb cc dd")});
  // The classic untagged copy: the mention covers d3's author term,
  // the words cover everything else, so the pair score against d3 is
  // its full self score, which is also the window maximum.
  builder.ego_tweet(
      make_tweet("t1", "", "", 10 * kHour, "rt @alice: aa bb cc dd"));
  const EgoNetwork network = builder.finish();

  DatasetConfig config;
  const ScoredNetwork scored = score_network(network, config);
  REQUIRE(scored.tweets.size() == 1);
  CHECK(scored.tweets[0].score == 1.0);
  CHECK(scored.tweets[0].best_match_id == "d3");
}

TEST_CASE("sharing no terms with the window scores exactly zero") {
  NetworkBuilder builder("e1", "ego");
  builder.followee("u2", "alice",
                   {make_tweet("d1", "", "", 1 * kHour, "aa bb"),
                    make_tweet("d2", "", "", 2 * kHour, "cc dd")});
  builder.ego_tweet(make_tweet("t1", "", "", 10 * kHour, "xx yy zz"));
  const EgoNetwork network = builder.finish();

  DatasetConfig config;
  const ScoredNetwork scored = score_network(network, config);
  REQUIRE(scored.tweets.size() == 1);
  CHECK(scored.tweets[0].score == 0.0);
  // With nothing shared anywhere, the newest member stands in as the
  // (meaningless) argmax.
  CHECK(scored.tweets[0].best_match_id == "d2");
}

TEST_CASE("scores stay within the unit interval on adversarial mixes") {
  // Heavy term repetition, shared author names, and hashtag overlap.
  NetworkBuilder builder("e1", "ego");
  builder.followee("u2", "alice",
                   {make_tweet("d1", "", "", 1 * kHour, "aa aa aa aa #tag"),
                    make_tweet("d2", "", "", 2 * kHour, "aa")});
  builder.followee("u3", "bob",
                   {make_tweet("d3", "", "", 3 * kHour, "#tag #tag zz"),
                    make_tweet("d4", "", "", 4 * kHour, "alice bob")});
  builder.ego_tweet(
      make_tweet("t1", "", "", 10 * kHour, "aa #tag alice bob zz @alice"));
  builder.ego_tweet(make_tweet("t2", "", "", 11 * kHour, "aa aa aa"));
  const EgoNetwork network = builder.finish();

  DatasetConfig config;
  const ScoredNetwork scored = score_network(network, config);
  REQUIRE(scored.tweets.size() == 2);
  for (const ScoredTweet& t : scored.tweets) {
    CAPTURE(t.tweet_id);
    CHECK(t.score >= 0.0);
    CHECK(t.score <= 1.0);
  }
}

TEST_CASE("ego tweets with empty windows are reported, not scored") {
  NetworkBuilder builder("e1", "ego");
  builder.ego_tweet(make_tweet("t0", "", "", 1 * kHour, "early"));
  builder.ego_tweet(make_tweet("t1", "", "", 10 * kHour, "late"));
  builder.followee("u2", "alice", {make_tweet("d1", "", "", 5 * kHour, "aa")});
  const EgoNetwork network = builder.finish();

  DatasetConfig config;
  const ScoredNetwork scored = score_network(network, config);
  CHECK(scored.tweets.size() == 1);
  CHECK(scored.tweets[0].tweet_id == "t1");
  CHECK(scored.unscored_ids == std::vector<std::string>{"t0"});
  CHECK_FALSE(scored.empty_corpus);
  CHECK(scored.window_lengths_hours.size() == 1);
}

TEST_CASE("a network whose windows are all empty is flagged, not failed") {
  NetworkBuilder builder("e1", "ego");
  builder.ego_tweet(make_tweet("t0", "", "", 1 * kHour, "early"));
  builder.followee("u2", "alice", {make_tweet("d1", "", "", 5 * kHour, "aa")});
  const EgoNetwork network = builder.finish();

  DatasetConfig config;
  const ScoredNetwork scored = score_network(network, config);
  CHECK(scored.empty_corpus);
  CHECK(scored.tweets.empty());
  CHECK(scored.unscored_ids == std::vector<std::string>{"t0"});

  SUBCASE("build_corpus itself refuses an all-empty window set") {
    const auto windows = build_all_windows(network, 100);
    CHECK_THROWS_AS(build_corpus(network, windows), Error);
  }
}

TEST_CASE("tagged counters and reply coverage ride along") {
  NetworkBuilder builder("e1", "ego");
  builder.followee("u2", "alice",
                   {make_tweet("d1", "", "", 1 * kHour, "aa bb"),
                    make_tweet("d2", "", "", 2 * kHour, "cc dd")});
  builder.ego_tweet(make_reply(make_tweet("t1", "", "", 3 * kHour, "aa"), "d1"));
  builder.ego_tweet(testsup::make_retweet(
      make_tweet("t2", "", "", 4 * kHour, "rt @alice: cc dd"), "d2"));
  builder.ego_tweet(make_tweet("t3", "", "", 5 * kHour, "bb"));
  const EgoNetwork network = builder.finish();

  DatasetConfig config;
  const ScoredNetwork scored = score_network(network, config);
  CHECK(scored.total_authored == 3);
  CHECK(scored.tagged_replies == 1);
  CHECK(scored.tagged_retweets == 1);
  CHECK(scored.replies_total == 1);
  CHECK(scored.replies_in_window == 1);
  REQUIRE(scored.tweets.size() == 3);
  CHECK(scored.tweets[0].kind == TweetKind::Reply);
  CHECK(scored.tweets[1].kind == TweetKind::Retweet);
  CHECK(scored.tweets[2].kind == TweetKind::Original);
}

TEST_CASE("scores print as the shortest round-tripping decimal") {
  CHECK(format_score(0.0) == "0");
  CHECK(format_score(1.0) == "1");
  CHECK(format_score(0.5) == "0.5");
  CHECK(format_score(0.384) == "0.384");
  const double awkward = 1.0 / 3.0;
  CHECK(std::stod(format_score(awkward)) == awkward);
}

TEST_CASE("the CSV lists one row per scored tweet") {
  const EgoNetwork network = corpus_network();
  DatasetConfig config;
  const ScoredNetwork scored = score_network(network, config);
  const std::string csv = scored_network_to_csv(scored);

  const std::string expected_prefix =
      "tweet_id,category,score,best_match_id,window_size\n"
      "t1,nontagged,";
  CHECK(csv.compare(0, expected_prefix.size(), expected_prefix) == 0);
  CHECK(csv.find(",d3,3\n") != std::string::npos);
}

TEST_CASE("scored networks round-trip through JSON") {
  NetworkBuilder builder("e1", "ego");
  builder.followee("u2", "alice",
                   {make_tweet("d1", "", "", 1 * kHour, "aa bb"),
                    make_tweet("d2", "", "", 2 * kHour, "cc dd")});
  builder.ego_tweet(make_tweet("t0", "", "", 0, "early"));
  builder.ego_tweet(make_reply(make_tweet("t1", "", "", 3 * kHour, "aa"), "d1"));
  builder.ego_tweet(make_tweet("t2", "", "", 4 * kHour, "cc yy"));
  const EgoNetwork network = builder.finish();

  DatasetConfig config;
  config.window_size = 7;
  const ScoredNetwork scored = score_network(network, config);
  const std::string json_text = scored_network_to_json(scored);
  const ScoredNetwork loaded = scored_network_from_json(json_text);

  CHECK(loaded.ego_user_id == scored.ego_user_id);
  CHECK(loaded.ego_username == scored.ego_username);
  CHECK(loaded.config.window_size == scored.config.window_size);
  CHECK(loaded.total_authored == scored.total_authored);
  CHECK(loaded.tagged_replies == scored.tagged_replies);
  CHECK(loaded.tagged_retweets == scored.tagged_retweets);
  CHECK(loaded.empty_corpus == scored.empty_corpus);
  CHECK(loaded.replies_total == scored.replies_total);
  CHECK(loaded.replies_in_window == scored.replies_in_window);
  CHECK(loaded.window_lengths_hours == scored.window_lengths_hours);
  CHECK(loaded.unscored_ids == scored.unscored_ids);
  REQUIRE(loaded.tweets.size() == scored.tweets.size());
  for (std::size_t i = 0; i < loaded.tweets.size(); ++i) {
    CHECK(loaded.tweets[i].tweet_id == scored.tweets[i].tweet_id);
    CHECK(loaded.tweets[i].kind == scored.tweets[i].kind);
    CHECK(loaded.tweets[i].score == scored.tweets[i].score);
    CHECK(loaded.tweets[i].best_match_id == scored.tweets[i].best_match_id);
    CHECK(loaded.tweets[i].window_size == scored.tweets[i].window_size);
  }
  // Serialization is deterministic.
  CHECK(scored_network_to_json(loaded) == json_text);

  SUBCASE("malformed JSON is a parse error") {
    CHECK_THROWS_AS(scored_network_from_json("{not json"), Error);
    CHECK_THROWS_AS(scored_network_from_json("{\"schema_version\":\"1\"}"),
                    Error);
  }
}
