#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace echodetect {

enum class TermKind {
  Hashtag,
  Mention,
  Word,
  AuthorName,
};

const char* term_kind_name(TermKind kind);

struct Term {
  TermKind kind;
  std::string value;

  bool operator==(const Term&) const = default;
};

// The extracted terms of one tweet, kept both as the raw sequence and
// as per-value counts. Two terms with the same value are the same
// vocabulary entry no matter their kind; hashtags stay distinct
// because their value keeps the leading '#'.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }

  // Distinct term values with multiplicities, sorted by value.
  const std::vector<std::pair<std::string, int>>& counts() const {
    return counts_;
  }

  std::size_t total_terms() const { return terms_.size(); }
  std::size_t distinct_terms() const { return counts_.size(); }
  int count_of(std::string_view value) const;
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<Term> terms_;
  std::vector<std::pair<std::string, int>> counts_;
};

// Tokenizes one tweet: lowercases, collects hashtags (value keeps
// '#'), mentions (value drops '@'), and plain words with stopwords
// removed and the survivors stemmed, then appends the lowercased
// author username as one extra term.
FeatureSet extract_features(std::string_view text,
                            std::string_view author_username);

// The individual scanners, exposed for tests and tooling. Each works
// on text that has already been lowercased.
std::vector<std::string> scan_hashtags(std::string_view lowered);
std::vector<std::string> scan_mentions(std::string_view lowered);
std::vector<std::string> scan_words(std::string_view lowered);

bool is_stopword(std::string_view token);
const std::vector<std::string>& stopword_list();

}  // namespace echodetect
