#include "bothunt/text.hpp"

#include <cctype>

namespace bothunt::text {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

namespace {
bool word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '\'' || u >= 0x80;
}
}  // namespace

std::string normalize_word(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && !word_char(token[b])) ++b;
  while (e > b && !word_char(token[e - 1])) --e;
  return to_lower(token.substr(b, e - b));
}

bool is_link(std::string_view token) {
  return token.starts_with("http://") || token.starts_with("https://");
}

namespace {
// Sigil tokens keep only the leading [A-Za-z0-9_] run after the sigil.
std::string sigil_body(std::string_view token) {
  std::size_t e = 1;
  while (e < token.size() &&
         (std::isalnum(static_cast<unsigned char>(token[e])) || token[e] == '_'))
    ++e;
  return to_lower(token.substr(1, e - 1));
}
}  // namespace

Entities extract_entities(std::string_view text) {
  Entities out;
  for (const auto& tok : split_ws(text)) {
    if (is_link(tok)) {
      out.urls.push_back(tok);
    } else if (tok.size() > 1 && tok[0] == '#') {
      auto body = sigil_body(tok);
      if (!body.empty()) out.hashtags.push_back(std::move(body));
    } else if (tok.size() > 1 && tok[0] == '@') {
      auto body = sigil_body(tok);
      if (!body.empty()) out.mentions.push_back(std::move(body));
    }
  }
  return out;
}

}  // namespace bothunt::text
