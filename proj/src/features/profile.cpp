#include <algorithm>
#include <cctype>
#include <regex>

#include "bothunt/features.hpp"
#include "bothunt/text.hpp"

namespace bothunt::features {

namespace {

// Shared placeholder avatars are not evidence of anything.
bool has_image(const UserAccount& a) {
  return !a.profile_image_ref.empty() && !a.profile_image_ref.starts_with("default");
}

std::vector<std::string> name_parts(std::string_view s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '_' || c == '\t') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

bool shares_substring(const std::string& a, const std::string& b, std::size_t len) {
  if (a.size() < len || b.size() < len) return false;
  for (std::size_t i = 0; i + len <= a.size(); ++i)
    if (b.find(a.substr(i, len)) != std::string::npos) return true;
  return false;
}

}  // namespace

double name_autogen_score(std::string_view screen_name, std::string_view display_name) {
  if (screen_name.empty()) return 0.0;
  const auto digits = std::count_if(screen_name.begin(), screen_name.end(),
                                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  const double digit_cue =
      static_cast<double>(digits) / static_cast<double>(screen_name.size()) >= 0.3 ? 1.0 : 0.0;

  static const std::regex word_digits("^[A-Za-z]+[0-9]{2,}$");
  const double pattern_cue = std::regex_match(std::string(screen_name), word_digits) ? 1.0 : 0.0;

  std::string screen;
  for (const auto& p : name_parts(screen_name)) screen += p;
  bool overlap = false;
  for (const auto& part : name_parts(display_name))
    if (shares_substring(part, screen, 3)) overlap = true;
  const double mismatch_cue = overlap ? 0.0 : 1.0;

  return (digit_cue + pattern_cue + mismatch_cue) / 3.0;
}

std::string normalize_url(std::string_view url) {
  std::string s = text::to_lower(url);
  for (std::string_view scheme : {"https://", "http://"})
    if (s.starts_with(scheme)) {
      s.erase(0, scheme.size());
      break;
    }
  if (s.starts_with("www.")) s.erase(0, 4);
  while (!s.empty() && s.back() == '/') s.pop_back();
  return s;
}

std::set<std::string> profile_tokens(const UserAccount& account) {
  std::set<std::string> tokens;
  if (has_image(account)) tokens.insert("img:" + account.profile_image_ref);
  if (!account.profile_url.empty()) tokens.insert("url:" + normalize_url(account.profile_url));
  for (const auto& w : text::split_ws(account.bio)) {
    auto n = text::normalize_word(w);
    if (!n.empty()) tokens.insert("bio:" + n);
  }
  for (const auto& src : account.sources) tokens.insert("src:" + text::to_lower(src));
  for (const auto& p : name_parts(account.display_name)) tokens.insert("name:" + p);
  return tokens;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

CloneIndex CloneIndex::build(const std::vector<UserAccount>& accounts) {
  CloneIndex idx;
  for (const auto& a : accounts) {
    if (!a.profile_url.empty()) ++idx.url_count[normalize_url(a.profile_url)];
    if (has_image(a)) ++idx.image_count[a.profile_image_ref];
  }
  return idx;
}

NamedValues profile_features(const UserAccount& account, std::span<const Tweet> tweets,
                             const CloneIndex& clones,
                             const std::vector<std::set<std::string>>& known_bot_profiles) {
  NamedValues out;
  const bool geo = std::any_of(tweets.begin(), tweets.end(), [](const Tweet& t) { return t.geo_enabled; });
  const int present = int{has_image(account)} + int{!account.profile_url.empty()} +
                      int{!account.bio.empty()} + int{!account.display_name.empty()} +
                      int{!account.sources.empty()} + int{geo};
  out.set("profile_completeness", present / 6.0);
  out.set("name_autogen_score", name_autogen_score(account.screen_name, account.display_name));

  bool url_clone = false;
  if (!account.profile_url.empty()) {
    auto it = clones.url_count.find(normalize_url(account.profile_url));
    url_clone = it != clones.url_count.end() && it->second >= 2;
  }
  bool image_clone = false;
  if (has_image(account)) {
    auto it = clones.image_count.find(account.profile_image_ref);
    image_clone = it != clones.image_count.end() && it->second >= 2;
  }
  out.set("url_clone_flag", url_clone ? 1.0 : 0.0);
  out.set("image_clone_flag", image_clone ? 1.0 : 0.0);
  out.set("follower_ratio", static_cast<double>(account.followers_count) /
                                static_cast<double>(account.followings_count + 1));
  out.set("source_count", static_cast<double>(account.sources.size()));

  const auto mine = profile_tokens(account);
  double best = 0.0;
  for (const auto& other : known_bot_profiles) best = std::max(best, jaccard(mine, other));
  out.set("jaccard_to_known_bots", best);
  return out;
}

}  // namespace bothunt::features
