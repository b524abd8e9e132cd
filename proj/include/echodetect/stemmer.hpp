#pragma once

#include <string>
#include <string_view>

namespace echodetect {

// English (Porter2) Snowball stemmer. Expects lowercase input, which
// is what the feature extractor produces. Non-ASCII characters pass
// through untouched and are treated as consonants.
std::string stem(std::string_view token);

}  // namespace echodetect
