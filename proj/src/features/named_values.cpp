#include <algorithm>
#include <stdexcept>

#include "bothunt/features.hpp"
#include "bothunt/text.hpp"

namespace bothunt::features {

const std::array<std::string_view, kFeatureCount> kFeatureNames = {
    // tweet syntax
    "avg_hashtags", "avg_mentions", "avg_links", "avg_special_chars", "retweet_fraction",
    "end_punct_fraction", "end_hashtag_fraction", "end_link_fraction", "eliza_score",
    // tweet semantics
    "topic_tweet_count", "avg_topic_sentiment", "pos_strength", "neg_strength",
    "contradiction_rank", "language_count", "sentiment_inconsistency",
    // temporal behavior
    "inter_tweet_entropy_bits", "longest_session_hours_5min", "longest_session_hours_10min",
    "tweets_per_day", "flipflop_count", "sentiment_variance", "dropped_follower_pct", "snr",
    "series_entropy",
    // user profile
    "profile_completeness", "name_autogen_score", "url_clone_flag", "image_clone_flag",
    "follower_ratio", "source_count", "jaccard_to_known_bots",
    // network
    "pagerank_retweet", "pagerank_mention", "betweenness_retweet", "betweenness_mention",
    "clustering_coeff_retweet", "clustering_coeff_mention", "known_bots_followed",
    "cluster_bot_fraction"};

std::optional<std::size_t> feature_index(std::string_view name) {
  auto it = std::find(kFeatureNames.begin(), kFeatureNames.end(), name);
  if (it == kFeatureNames.end()) return std::nullopt;
  return static_cast<std::size_t>(it - kFeatureNames.begin());
}

void NamedValues::set(std::string name, double value, bool missing) {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it != names_.end()) {
    const auto i = static_cast<std::size_t>(it - names_.begin());
    values_[i] = value;
    missing_[i] = missing;
    return;
  }
  names_.push_back(std::move(name));
  values_.push_back(value);
  missing_.push_back(missing);
}

std::size_t NamedValues::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::out_of_range("no feature named " + std::string(name));
  return static_cast<std::size_t>(it - names_.begin());
}

double NamedValues::get(std::string_view name) const { return values_[index_of(name)]; }
bool NamedValues::missing(std::string_view name) const { return missing_[index_of(name)]; }
bool NamedValues::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

void NamedValues::append(const NamedValues& other) {
  for (std::size_t i = 0; i < other.size(); ++i) set(other.names_[i], other.values_[i], other.missing_[i]);
}

TopicTerms TopicTerms::from_keywords(const std::vector<std::string>& keywords) {
  TopicTerms t;
  for (const auto& k : keywords) {
    auto lower = text::to_lower(k);
    if (lower.starts_with('#'))
      t.hashtags.insert(lower.substr(1));
    else
      t.words.insert(lower);
  }
  return t;
}

bool TopicTerms::matches(const Tweet& t) const {
  for (const auto& h : t.hashtags)
    if (hashtags.contains(text::to_lower(h)) || words.contains(text::to_lower(h))) return true;
  for (const auto& tok : text::split_ws(t.text)) {
    if (tok.starts_with('#') || tok.starts_with('@') || text::is_link(tok)) continue;
    if (words.contains(text::normalize_word(tok))) return true;
  }
  return false;
}

}  // namespace bothunt::features
