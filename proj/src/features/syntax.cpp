#include <cctype>
#include <set>

#include "bothunt/features.hpp"
#include "bothunt/text.hpp"

namespace bothunt::features {

std::size_t special_char_count(std::string_view text) {
  std::size_t n = 0;
  for (const auto& tok : text::split_ws(text)) {
    if (text::is_link(tok)) continue;
    for (char c : tok)
      if (std::ispunct(static_cast<unsigned char>(c)) && c != '#' && c != '@') ++n;
  }
  return n;
}

namespace {
enum class Ending { punct, hashtag, link, other };

Ending ending_of(std::string_view text) {
  const auto tokens = text::split_ws(text);
  if (tokens.empty()) return Ending::other;
  const auto& last = tokens.back();
  if (text::is_link(last)) return Ending::link;
  if (last.size() > 1 && last[0] == '#') return Ending::hashtag;
  if (std::ispunct(static_cast<unsigned char>(last.back()))) return Ending::punct;
  return Ending::other;
}
}  // namespace

NamedValues syntax_features(std::span<const Tweet> tweets) {
  NamedValues out;
  const bool empty = tweets.empty();
  double hashtags = 0, mentions = 0, links = 0, special = 0, retweets = 0;
  double end_punct = 0, end_hashtag = 0, end_link = 0;
  for (const auto& t : tweets) {
    hashtags += static_cast<double>(t.hashtags.size());
    mentions += static_cast<double>(t.mentions.size());
    links += static_cast<double>(t.urls.size());
    special += static_cast<double>(special_char_count(t.text));
    retweets += t.is_retweet ? 1.0 : 0.0;
    switch (ending_of(t.text)) {
      case Ending::punct: end_punct += 1; break;
      case Ending::hashtag: end_hashtag += 1; break;
      case Ending::link: end_link += 1; break;
      case Ending::other: break;
    }
  }
  const double n = empty ? 1.0 : static_cast<double>(tweets.size());
  out.set("avg_hashtags", hashtags / n, empty);
  out.set("avg_mentions", mentions / n, empty);
  out.set("avg_links", links / n, empty);
  out.set("avg_special_chars", special / n, empty);
  out.set("retweet_fraction", retweets / n, empty);
  out.set("end_punct_fraction", end_punct / n, empty);
  out.set("end_hashtag_fraction", end_hashtag / n, empty);
  out.set("end_link_fraction", end_link / n, empty);
  return out;
}

std::pair<double, bool> eliza_score(std::span<const Tweet> tweets) {
  if (tweets.size() < 2) return {0.0, true};
  std::set<std::string> templates;
  for (const auto& t : tweets) {
    const auto tokens = text::split_ws(text::to_lower(t.text));
    std::string prefix;
    for (std::size_t i = 0; i < tokens.size() && i < 3; ++i) {
      if (i) prefix += ' ';
      prefix += tokens[i];
    }
    templates.insert(prefix);
  }
  return {1.0 - static_cast<double>(templates.size()) / static_cast<double>(tweets.size()), false};
}

}  // namespace bothunt::features
