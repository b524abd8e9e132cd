#include "echodetect/textpipe.hpp"

#include <algorithm>

#include "echodetect/stemmer.hpp"
#include "unicode.hpp"

namespace echodetect {

namespace {

using unicode::is_space_char;
using unicode::is_word_char;
using unicode::kFullwidthAt;

bool is_at_sign(char32_t cp) { return cp == '@' || cp == kFullwidthAt; }

std::string codepoints_to_utf8(const std::vector<char32_t>& cps,
                               std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) unicode::append_utf8(out, cps[i]);
  return out;
}

std::size_t word_run_end(const std::vector<char32_t>& cps, std::size_t from) {
  std::size_t i = from;
  while (i < cps.size() && is_word_char(cps[i])) ++i;
  return i;
}

// A hashtag is '#' plus a word run, at the start of the text or right
// after whitespace. The whitespace is part of the match, so scanning
// resumes after the tag.
std::vector<std::string> hashtags_of(const std::vector<char32_t>& cps) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t hash;
    if (i == 0 && cps[0] == '#') {
      hash = 0;
    } else if (is_space_char(cps[i]) && i + 1 < cps.size() &&
               cps[i + 1] == '#') {
      hash = i + 1;
    } else {
      ++i;
      continue;
    }
    std::size_t end = word_run_end(cps, hash + 1);
    if (end > hash + 1) {
      out.push_back(codepoints_to_utf8(cps, hash, end));
      i = end;
    } else {
      ++i;
    }
  }
  return out;
}

// A mention is '@' (either width) not preceded by a word character,
// followed by one to twenty word characters. The value drops the '@'.
std::vector<std::string> mentions_of(const std::vector<char32_t>& cps) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!is_at_sign(cps[i]) || (i > 0 && is_word_char(cps[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t end = std::min(word_run_end(cps, i + 1), i + 1 + 20);
    if (end > i + 1) {
      out.push_back(codepoints_to_utf8(cps, i + 1, end));
      i = end;
    } else {
      ++i;
    }
  }
  return out;
}

// A word run counts when it sits at the start of the text, or after
// whitespace followed by punctuation that contains no '@' or '#'.
// Those two block the run, which is how mention and hashtag text
// stays out of the word list.
std::vector<std::string> words_of(const std::vector<char32_t>& cps) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t start;
    if (i == 0 && is_word_char(cps[0])) {
      start = 0;
    } else if (is_space_char(cps[i])) {
      std::size_t j = i + 1;
      while (j < cps.size() && !is_word_char(cps[j]) && !is_space_char(cps[j]) &&
             !is_at_sign(cps[j]) && cps[j] != '#') {
        ++j;
      }
      if (j >= cps.size() || !is_word_char(cps[j])) {
        ++i;
        continue;
      }
      start = j;
    } else {
      ++i;
      continue;
    }
    std::size_t end = word_run_end(cps, start);
    out.push_back(codepoints_to_utf8(cps, start, end));
    i = end;
  }
  return out;
}

std::vector<char32_t> lowered_codepoints(std::string_view text) {
  std::vector<char32_t> cps = unicode::decode_utf8(text);
  for (char32_t& cp : cps) cp = unicode::to_lower(cp);
  return cps;
}

}  // namespace

const char* term_kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::Hashtag: return "hashtag";
    case TermKind::Mention: return "mention";
    case TermKind::Word: return "word";
    case TermKind::AuthorName: return "author_name";
  }
  return "unknown";
}

FeatureSet::FeatureSet(std::vector<Term> terms) : terms_(std::move(terms)) {
  std::vector<std::string_view> values;
  values.reserve(terms_.size());
  for (const Term& t : terms_) values.push_back(t.value);
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    counts_.emplace_back(std::string(values[i]), static_cast<int>(j - i));
    i = j;
  }
}

int FeatureSet::count_of(std::string_view value) const {
  auto it = std::lower_bound(
      counts_.begin(), counts_.end(), value,
      [](const auto& entry, std::string_view v) { return entry.first < v; });
  if (it == counts_.end() || it->first != value) return 0;
  return it->second;
}

std::vector<std::string> scan_hashtags(std::string_view lowered) {
  return hashtags_of(unicode::decode_utf8(lowered));
}

std::vector<std::string> scan_mentions(std::string_view lowered) {
  return mentions_of(unicode::decode_utf8(lowered));
}

std::vector<std::string> scan_words(std::string_view lowered) {
  return words_of(unicode::decode_utf8(lowered));
}

FeatureSet extract_features(std::string_view text,
                            std::string_view author_username) {
  std::vector<char32_t> cps = lowered_codepoints(text);

  std::vector<Term> terms;
  for (std::string& v : hashtags_of(cps)) {
    terms.push_back({TermKind::Hashtag, std::move(v)});
  }
  for (std::string& v : mentions_of(cps)) {
    terms.push_back({TermKind::Mention, std::move(v)});
  }
  for (std::string& v : words_of(cps)) {
    if (is_stopword(v)) continue;
    terms.push_back({TermKind::Word, stem(v)});
  }
  if (!author_username.empty()) {
    terms.push_back({TermKind::AuthorName, unicode::lower_utf8(author_username)});
  }
  return FeatureSet(std::move(terms));
}

}  // namespace echodetect
