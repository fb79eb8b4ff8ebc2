#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bothunt::text {

std::string to_lower(std::string_view s);

/// Whitespace tokenization; tokens keep their punctuation.
std::vector<std::string> split_ws(std::string_view s);

/// Lower-cases and strips leading '#'/'@' and surrounding punctuation.
/// Returns an empty string when nothing word-like remains.
std::string normalize_word(std::string_view token);

bool is_link(std::string_view token);

struct Entities {
  std::vector<std::string> hashtags;
  std::vector<std::string> mentions;
  std::vector<std::string> urls;
};

/// Hashtags and mentions come back lower-cased and without sigil.
Entities extract_entities(std::string_view text);

}  // namespace bothunt::text
