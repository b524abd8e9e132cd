#include "echodetect/stemmer.hpp"

#include <array>
#include <cstring>
#include <vector>

#include "unicode.hpp"

namespace echodetect {

namespace {

bool is_vowel(char32_t c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_double_pair(char32_t a, char32_t b) {
  if (a != b) return false;
  switch (a) {
    case 'b': case 'd': case 'f': case 'g': case 'm':
    case 'n': case 'p': case 'r': case 't':
      return true;
    default:
      return false;
  }
}

bool is_valid_li_ending(char32_t c) {
  switch (c) {
    case 'c': case 'd': case 'e': case 'g': case 'h':
    case 'k': case 'm': case 'n': case 'r': case 't':
      return true;
    default:
      return false;
  }
}

struct Rule {
  const char* suffix;
  const char* replacement;
};

class Stemmer {
 public:
  explicit Stemmer(std::vector<char32_t> word) : w_(std::move(word)) {}

  std::string run() {
    prelude();
    mark_regions();
    step0();
    step1a();
    if (is_exception_after_1a()) return postlude();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return postlude();
  }

 private:
  std::vector<char32_t> w_;
  std::size_t r1_ = 0;
  std::size_t r2_ = 0;

  std::size_t len() const { return w_.size(); }

  bool ends_with(const char* suffix) const {
    std::size_t n = std::strlen(suffix);
    if (n > len()) return false;
    for (std::size_t i = 0; i < n; ++i) {
      if (w_[len() - n + i] != static_cast<char32_t>(suffix[i])) return false;
    }
    return true;
  }

  // A suffix lies in a region when it starts at or after the region's
  // left edge.
  bool suffix_in_r1(std::size_t suffix_len) const {
    return len() - suffix_len >= r1_;
  }
  bool suffix_in_r2(std::size_t suffix_len) const {
    return len() - suffix_len >= r2_;
  }

  void chop(std::size_t n) { w_.resize(len() - n); }

  void replace_suffix(std::size_t n, const char* replacement) {
    chop(n);
    for (const char* p = replacement; *p; ++p) {
      w_.push_back(static_cast<char32_t>(*p));
    }
  }

  bool equals(const char* s) const {
    std::size_t n = std::strlen(s);
    if (n != len()) return false;
    return ends_with(s);
  }

  bool contains_vowel_before(std::size_t end) const {
    for (std::size_t i = 0; i < end; ++i) {
      if (is_vowel(w_[i])) return true;
    }
    return false;
  }

  // A short syllable is a vowel between non-vowels where the trailing
  // one is not w, x or Y, or a vowel starting the word followed by a
  // non-vowel. Tested against the last `n` characters of the word.
  bool ends_short_syllable(std::size_t n) const {
    if (n >= 3) {
      char32_t a = w_[n - 3], b = w_[n - 2], c = w_[n - 1];
      return !is_vowel(a) && is_vowel(b) && !is_vowel(c) && c != 'w' &&
             c != 'x' && c != 'Y';
    }
    if (n == 2) return is_vowel(w_[0]) && !is_vowel(w_[1]);
    return false;
  }

  bool is_short_word() const {
    return r1_ >= len() && ends_short_syllable(len());
  }

  void prelude() {
    if (!w_.empty() && w_[0] == '\'') w_.erase(w_.begin());
    if (!w_.empty() && w_[0] == 'y') w_[0] = 'Y';
    for (std::size_t i = 1; i < len(); ++i) {
      if (w_[i] == 'y' && is_vowel(w_[i - 1])) w_[i] = 'Y';
    }
  }

  void mark_regions() {
    r1_ = r2_ = len();
    static const char* const special[] = {"gener", "commun", "arsen"};
    for (const char* prefix : special) {
      std::size_t n = std::strlen(prefix);
      if (len() >= n) {
        bool match = true;
        for (std::size_t i = 0; i < n; ++i) {
          if (w_[i] != static_cast<char32_t>(prefix[i])) {
            match = false;
            break;
          }
        }
        if (match) {
          r1_ = n;
          r2_ = region_after(n);
          return;
        }
      }
    }
    r1_ = region_after(0);
    r2_ = region_after(r1_);
  }

  // Position just past the first non-vowel that follows a vowel,
  // scanning from `from`; the word length when there is none.
  std::size_t region_after(std::size_t from) const {
    for (std::size_t i = from; i + 1 < len(); ++i) {
      if (is_vowel(w_[i]) && !is_vowel(w_[i + 1])) return i + 2;
    }
    return len();
  }

  void step0() {
    if (ends_with("'s'")) {
      chop(3);
    } else if (ends_with("'s")) {
      chop(2);
    } else if (ends_with("'")) {
      chop(1);
    }
  }

  void step1a() {
    if (ends_with("sses")) {
      chop(2);
    } else if (ends_with("ied") || ends_with("ies")) {
      if (len() > 4) {
        replace_suffix(3, "i");
      } else {
        replace_suffix(3, "ie");
      }
    } else if (ends_with("ss") || ends_with("us")) {
      // keep
    } else if (ends_with("s")) {
      // Delete only when a vowel occurs before the letter that
      // precedes the s (gaps -> gap, but gas stays gas).
      if (len() >= 2 && contains_vowel_before(len() - 2)) chop(1);
    }
  }

  bool is_exception_after_1a() const {
    static const char* const invariant[] = {
        "inning", "outing",  "canning", "herring",
        "earring", "proceed", "exceed",  "succeed",
    };
    for (const char* word : invariant) {
      if (equals(word)) return true;
    }
    return false;
  }

  void step1b() {
    std::size_t n;
    if (ends_with("eedly")) {
      n = 5;
    } else if (ends_with("ingly")) {
      return delete_verb_suffix(5);
    } else if (ends_with("edly")) {
      return delete_verb_suffix(4);
    } else if (ends_with("eed")) {
      n = 3;
    } else if (ends_with("ing")) {
      return delete_verb_suffix(3);
    } else if (ends_with("ed")) {
      return delete_verb_suffix(2);
    } else {
      return;
    }
    if (suffix_in_r1(n)) replace_suffix(n, "ee");
  }

  void delete_verb_suffix(std::size_t n) {
    if (!contains_vowel_before(len() - n)) return;
    chop(n);
    if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
      w_.push_back('e');
    } else if (len() >= 2 && is_double_pair(w_[len() - 2], w_[len() - 1])) {
      chop(1);
    } else if (is_short_word()) {
      w_.push_back('e');
    }
  }

  void step1c() {
    if (len() < 3) return;
    char32_t last = w_[len() - 1];
    if ((last == 'y' || last == 'Y') && !is_vowel(w_[len() - 2])) {
      w_[len() - 1] = 'i';
    }
  }

  void step2() {
    static const Rule rules[] = {
        {"ational", "ate"}, {"fulness", "ful"}, {"iveness", "ive"},
        {"ization", "ize"}, {"ousness", "ous"}, {"biliti", "ble"},
        {"lessli", "less"}, {"tional", "tion"}, {"alism", "al"},
        {"aliti", "al"},    {"ation", "ate"},   {"entli", "ent"},
        {"fulli", "ful"},   {"iviti", "ive"},   {"ousli", "ous"},
        {"abli", "able"},   {"alli", "al"},     {"anci", "ance"},
        {"ator", "ate"},    {"enci", "ence"},   {"izer", "ize"},
        {"bli", "ble"},     {"ogi", "og"},      {"li", ""},
    };
    for (const Rule& rule : rules) {
      if (!ends_with(rule.suffix)) continue;
      std::size_t n = std::strlen(rule.suffix);
      if (suffix_in_r1(n)) {
        if (std::strcmp(rule.suffix, "ogi") == 0) {
          if (len() > n && w_[len() - n - 1] == 'l') replace_suffix(n, "og");
        } else if (std::strcmp(rule.suffix, "li") == 0) {
          if (len() > n && is_valid_li_ending(w_[len() - n - 1])) chop(n);
        } else {
          replace_suffix(n, rule.replacement);
        }
      }
      return;
    }
  }

  void step3() {
    static const Rule rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"alize", "al"},
        {"icate", "ic"},    {"iciti", "ic"},    {"ative", ""},
        {"ical", "ic"},     {"ness", ""},       {"ful", ""},
    };
    for (const Rule& rule : rules) {
      if (!ends_with(rule.suffix)) continue;
      std::size_t n = std::strlen(rule.suffix);
      if (suffix_in_r1(n)) {
        if (std::strcmp(rule.suffix, "ative") == 0) {
          if (suffix_in_r2(n)) chop(n);
        } else {
          replace_suffix(n, rule.replacement);
        }
      }
      return;
    }
  }

  void step4() {
    static const char* const suffixes[] = {
        "ement", "ance", "ence", "able", "ible", "ment",
        "ant",   "ent",  "ism",  "ate",  "iti",  "ous",
        "ive",   "ize",  "ion",  "al",   "er",   "ic",
    };
    for (const char* suffix : suffixes) {
      if (!ends_with(suffix)) continue;
      std::size_t n = std::strlen(suffix);
      if (suffix_in_r2(n)) {
        if (std::strcmp(suffix, "ion") == 0) {
          char32_t prev = len() > n ? w_[len() - n - 1] : 0;
          if (prev == 's' || prev == 't') chop(n);
        } else {
          chop(n);
        }
      }
      return;
    }
  }

  void step5() {
    if (ends_with("e")) {
      if (suffix_in_r2(1) ||
          (suffix_in_r1(1) && !ends_short_syllable(len() - 1))) {
        chop(1);
      }
    } else if (ends_with("l")) {
      if (suffix_in_r2(1) && len() >= 2 && w_[len() - 2] == 'l') chop(1);
    }
  }

  std::string postlude() {
    for (char32_t& c : w_) {
      if (c == 'Y') c = 'y';
    }
    return unicode::encode_utf8(w_);
  }
};

const char* exception_stem(std::string_view word) {
  static const Rule exceptions[] = {
      {"skis", "ski"},     {"skies", "sky"},   {"dying", "die"},
      {"lying", "lie"},    {"tying", "tie"},   {"idly", "idl"},
      {"gently", "gentl"}, {"ugly", "ugli"},   {"early", "earli"},
      {"only", "onli"},    {"singly", "singl"}, {"sky", "sky"},
      {"news", "news"},    {"howe", "howe"},   {"atlas", "atlas"},
      {"cosmos", "cosmos"}, {"bias", "bias"},  {"andes", "andes"},
  };
  for (const Rule& e : exceptions) {
    if (word == e.suffix) return e.replacement;
  }
  return nullptr;
}

}  // namespace

std::string stem(std::string_view token) {
  if (const char* fixed = exception_stem(token)) return fixed;
  std::vector<char32_t> cps = unicode::decode_utf8(token);
  if (cps.size() <= 2) return std::string(token);
  return Stemmer(std::move(cps)).run();
}

}  // namespace echodetect
