#include <doctest.h>

#include <string>
#include <vector>

#include <echodetect/stemmer.hpp>
#include <echodetect/textpipe.hpp>

using echodetect::extract_features;
using echodetect::FeatureSet;
using echodetect::scan_hashtags;
using echodetect::scan_mentions;
using echodetect::scan_words;
using echodetect::Term;
using echodetect::TermKind;

namespace {

std::vector<std::string> values_of(const FeatureSet& features, TermKind kind) {
  std::vector<std::string> out;
  for (const Term& term : features.terms()) {
    if (term.kind == kind) out.push_back(term.value);
  }
  return out;
}

}  // namespace

TEST_CASE("hashtags need start-of-text or whitespace before the #") {
  CHECK(scan_hashtags("#foo bar") == std::vector<std::string>{"#foo"});
  CHECK(scan_hashtags("a #foo and #bar2") ==
        std::vector<std::string>{"#foo", "#bar2"});
  CHECK(scan_hashtags("x#foo") == std::vector<std::string>{});
  CHECK(scan_hashtags("(#foo)") == std::vector<std::string>{});
  CHECK(scan_hashtags("# foo") == std::vector<std::string>{});
  CHECK(scan_hashtags("##foo") == std::vector<std::string>{});
  // The separator is consumed with the match, so back-to-back tags
  // need whitespace between them.
  CHECK(scan_hashtags("#a#b") == std::vector<std::string>{"#a"});
  CHECK(scan_hashtags("#a #b") == std::vector<std::string>{"#a", "#b"});
  CHECK(scan_hashtags("#under_score #123") ==
        std::vector<std::string>{"#under_score", "#123"});
}

TEST_CASE("mentions match unless glued to a preceding word") {
  CHECK(scan_mentions("@user hi") == std::vector<std::string>{"user"});
  CHECK(scan_mentions("hi @user") == std::vector<std::string>{"user"});
  CHECK(scan_mentions(".@user") == std::vector<std::string>{"user"});
  CHECK(scan_mentions("mail me x@y.com") == std::vector<std::string>{});
  CHECK(scan_mentions("a@@user") == std::vector<std::string>{"user"});
  CHECK(scan_mentions("rt @a: @b") == std::vector<std::string>{"a", "b"});
  CHECK(scan_mentions("@ user") == std::vector<std::string>{});

  SUBCASE("fullwidth at sign counts") {
    CHECK(scan_mentions("＠user") == std::vector<std::string>{"user"});
  }

  SUBCASE("handles cap at twenty characters") {
    CHECK(scan_mentions("@abcdefghijklmnopqrstuvwxy") ==
          std::vector<std::string>{"abcdefghijklmnopqrst"});
    CHECK(scan_mentions("@abcdefghijklmnopqrst") ==
          std::vector<std::string>{"abcdefghijklmnopqrst"});
  }
}

TEST_CASE("words attach only after start-of-text or whitespace") {
  CHECK(scan_words("foo bar") == std::vector<std::string>{"foo", "bar"});
  CHECK(scan_words("foo  bar") == std::vector<std::string>{"foo", "bar"});
  // Punctuation may sit between the whitespace and the word...
  CHECK(scan_words("say \"hello\" now") ==
        std::vector<std::string>{"say", "hello", "now"});
  CHECK(scan_words("a ...b") == std::vector<std::string>{"a", "b"});
  // ...but a # or @ in that run blocks the word.
  CHECK(scan_words("foo @bar") == std::vector<std::string>{"foo"});
  CHECK(scan_words("foo #bar") == std::vector<std::string>{"foo"});
  CHECK(scan_words("foo .@bar") == std::vector<std::string>{"foo"});
  // Leading punctuation with no whitespace in front hides the word.
  CHECK(scan_words("\"hello\"") == std::vector<std::string>{});
  CHECK(scan_words("x@y.com") == std::vector<std::string>{"x"});
  CHECK(scan_words("it's fine") == std::vector<std::string>{"it", "fine"});
  CHECK(scan_words("rt @src: text") == std::vector<std::string>{"rt", "text"});
  CHECK(scan_words("café au lait") ==
        std::vector<std::string>{"café", "au", "lait"});
}

TEST_CASE("extraction lowercases, filters stopwords, stems, and appends the author") {
  const FeatureSet features =
      extract_features("The Runners were RUNNING to #Victory with @Friend",
                       "EgoUser");

  CHECK(values_of(features, TermKind::Hashtag) ==
        std::vector<std::string>{"#victory"});
  CHECK(values_of(features, TermKind::Mention) ==
        std::vector<std::string>{"friend"});
  // "the", "were", "to", "with" are stopwords; survivors are stemmed.
  CHECK(values_of(features, TermKind::Word) ==
        std::vector<std::string>{"runner", "run"});
  CHECK(values_of(features, TermKind::AuthorName) ==
        std::vector<std::string>{"egouser"});

  // Author term comes last in the sequence.
  CHECK(features.terms().back().kind == TermKind::AuthorName);
  CHECK(features.total_terms() == 5);
}

TEST_CASE("stopword filtering happens before stemming") {
  // "this" is a stopword and is dropped; "thistles" is not, and stems.
  const FeatureSet features = extract_features("this thistles", "u");
  CHECK(values_of(features, TermKind::Word) ==
        std::vector<std::string>{echodetect::stem("thistles")});
}

TEST_CASE("terms with equal values merge regardless of kind") {
  const FeatureSet features = extract_features("@foo foo #foo", "foo");
  // Mention "foo", word "foo", author "foo" share one vocabulary
  // entry; the hashtag keeps its marker and stays separate.
  CHECK(features.count_of("foo") == 3);
  CHECK(features.count_of("#foo") == 1);
  CHECK(features.distinct_terms() == 2);
  CHECK(features.total_terms() == 4);
}

TEST_CASE("counts are sorted by value and queryable") {
  const FeatureSet features = extract_features("bb aa bb cc bb aa", "zz");
  const auto& counts = features.counts();
  REQUIRE(counts.size() == 4);
  CHECK(counts[0] == std::pair<std::string, int>{"aa", 2});
  CHECK(counts[1] == std::pair<std::string, int>{"bb", 3});
  CHECK(counts[2] == std::pair<std::string, int>{"cc", 1});
  CHECK(counts[3] == std::pair<std::string, int>{"zz", 1});
  CHECK(features.count_of("bb") == 3);
  CHECK(features.count_of("missing") == 0);
}

TEST_CASE("empty and stopword-only texts still carry the author term") {
  const FeatureSet features = extract_features("the of and", "someone");
  CHECK(features.total_terms() == 1);
  CHECK(features.terms().front().kind == TermKind::AuthorName);
  CHECK(features.terms().front().value == "someone");

  const FeatureSet empty = extract_features("", "someone");
  CHECK(empty.total_terms() == 1);
}

TEST_CASE("the classic untagged response shape extracts mention plus words") {
  const FeatureSet features =
      extract_features("rt @newsdesk: storm warning issued", "echofan");
  CHECK(values_of(features, TermKind::Mention) ==
        std::vector<std::string>{"newsdesk"});
  CHECK(values_of(features, TermKind::Word) ==
        std::vector<std::string>{"rt", "storm", "warn", "issu"});
  CHECK(features.count_of("echofan") == 1);
}
