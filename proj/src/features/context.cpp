#include <stdexcept>

#include "bothunt/features.hpp"

namespace bothunt::features {

FeatureContext::FeatureContext(const Dataset& ds, const SentimentLexicon& lexicon, FeatureParams params)
    : ds_(ds), lexicon_(lexicon), params_(params) {
  hashtags_ = graphs::hashtag_cooccurrence(ds.tweets);
  TopicTerms seeds = TopicTerms::from_keywords(ds.topic_keywords);
  // both plain keywords and seed hashtags can appear as tags
  std::set<std::string> tag_seeds = seeds.hashtags;
  tag_seeds.insert(seeds.words.begin(), seeds.words.end());
  topic_ = seeds;
  for (const auto& t : graphs::expand_keywords(hashtags_, tag_seeds, params_.keyword_min_weight))
    topic_.hashtags.insert(t);

  kernels_ = NetworkKernels::build(ds);
  clones_ = CloneIndex::build(ds.accounts);

  for (const auto& a : ds.accounts) {
    const auto [b, e] = ds.tweet_range(a.user_id);
    double sum = 0;
    int n = 0;
    for (auto i = b; i < e; ++i)
      if (topic_.matches(ds.tweets[i])) {
        sum += score_sentiment(ds.tweets[i].text, lexicon_);
        ++n;
      }
    if (n) topic_sentiment_[a.user_id] = sum / n;
    profile_tokens_[a.user_id] = profile_tokens(a);
    activity_[a.user_id];
  }

  for (const auto& [from, targets] : kernels_.final_follows.out)
    for (auto to : targets) {
      neighbors_[from].push_back(to);
      neighbors_[to].push_back(from);
    }
  for (auto& [_, v] : neighbors_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  for (const auto& e : ds.network_events) {
    auto it = activity_.find(e.from_user);
    if (it == activity_.end()) continue;
    if (e.weight == 1)
      ++it->second.follows;
    else
      ++it->second.unfollows;
  }
  for (int day = 0; day <= ds.duration_days; day += params_.snapshot_interval_days) {
    const auto degrees = network_snapshot(ds, day).in_degrees();
    for (auto& [id, act] : activity_) {
      auto it = degrees.find(id);
      act.follower_series.push_back(it == degrees.end() ? 0.0 : static_cast<double>(it->second));
    }
  }
}

std::optional<double> FeatureContext::topic_sentiment(UserId id) const {
  auto it = topic_sentiment_.find(id);
  if (it == topic_sentiment_.end()) return std::nullopt;
  return it->second;
}

std::map<UserId, double> FeatureContext::neighbor_topic_sentiments(UserId id) const {
  std::map<UserId, double> out;
  auto it = neighbors_.find(id);
  if (it == neighbors_.end()) return out;
  for (auto n : it->second)
    if (auto s = topic_sentiment(n)) out.emplace(n, *s);
  return out;
}

const UserNetworkActivity& FeatureContext::activity(UserId id) const {
  auto it = activity_.find(id);
  if (it == activity_.end()) throw std::out_of_range("unknown user " + std::to_string(id));
  return it->second;
}

NamedValues FeatureContext::extract(UserId id, const LabelInputs& labels) const {
  const UserAccount* account = ds_.find_account(id);
  if (!account) throw std::out_of_range("unknown user " + std::to_string(id));
  const auto [b, e] = ds_.tweet_range(id);
  const std::span<const Tweet> tweets(ds_.tweets.data() + b, e - b);

  std::vector<std::set<std::string>> bot_profiles;
  for (auto bot : labels.known_bots) {
    if (bot == id) continue;
    if (auto it = profile_tokens_.find(bot); it != profile_tokens_.end()) bot_profiles.push_back(it->second);
  }

  NamedValues all = syntax_features(tweets);
  const auto [eliza, eliza_missing] = eliza_score(tweets);
  all.set("eliza_score", eliza, eliza_missing);
  all.append(semantic_features(tweets, topic_, lexicon_, neighbor_topic_sentiments(id)));
  all.append(temporal_features(tweets, activity(id), ds_.duration_days, topic_, lexicon_, params_));
  all.append(profile_features(*account, tweets, clones_, bot_profiles));
  all.append(network_features(id, kernels_, labels.known_bots,
                              labels.clusters ? &*labels.clusters : nullptr));
  return all;
}

FeatureMatrix FeatureContext::assemble(const LabelInputs& labels) const {
  const auto ids = ds_.account_ids();
  const auto n = static_cast<Eigen::Index>(ids.size());
  RowMatrix raw(n, static_cast<Eigen::Index>(kFeatureCount));
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> missing(n, static_cast<Eigen::Index>(kFeatureCount));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto v = extract(ids[static_cast<std::size_t>(i)], labels);
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      raw(i, col) = v.get(kFeatureNames[j]);
      missing(i, col) = v.missing(kFeatureNames[j]);
    }
  }
  std::vector<std::string> columns(kFeatureNames.begin(), kFeatureNames.end());
  return normalize(ids, std::move(columns), std::move(raw), std::move(missing));
}

}  // namespace bothunt::features
