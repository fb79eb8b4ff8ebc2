#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bothunt/corpus.hpp"
#include "bothunt/graphs.hpp"
#include "bothunt/lexicon.hpp"

namespace bothunt::features {

inline constexpr std::size_t kFeatureCount = 40;

/// Canonical column order of the feature matrix.
extern const std::array<std::string_view, kFeatureCount> kFeatureNames;

std::optional<std::size_t> feature_index(std::string_view name);

/// Ordered named values emitted by one feature family, with a missing mask.
class NamedValues {
 public:
  void set(std::string name, double value, bool missing = false);
  double get(std::string_view name) const;
  bool missing(std::string_view name) const;
  bool contains(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<bool>& missing_mask() const { return missing_; }
  std::size_t size() const { return names_.size(); }
  void append(const NamedValues& other);

 private:
  std::size_t index_of(std::string_view name) const;
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::vector<bool> missing_;
};

struct FeatureParams {
  std::array<Timestamp, 2> session_breaks = {300, 600};  // 5 and 10 minutes
  double flipflop_dead_zone = 0.1;
  double snr_epsilon = 1e-9;
  int snapshot_interval_days = 7;
  double keyword_min_weight = 5.0;
};

/// Topic vocabulary after hashtag expansion: plain words and hashtags are
/// held separately, both lower-cased and hashtags without '#'.
struct TopicTerms {
  std::set<std::string> words;
  std::set<std::string> hashtags;

  static TopicTerms from_keywords(const std::vector<std::string>& keywords);
  bool matches(const Tweet& t) const;
};

// ---- tweet syntax ---------------------------------------------------------

/// Non-link tokens' ASCII punctuation, excluding the '#' and '@' sigils.
std::size_t special_char_count(std::string_view text);

NamedValues syntax_features(std::span<const Tweet> tweets);

/// 1 - distinct(3-token opening) / tweet count; masked below two tweets.
std::pair<double, bool> eliza_score(std::span<const Tweet> tweets);

// ---- semantics ------------------------------------------------------------

NamedValues semantic_features(std::span<const Tweet> tweets, const TopicTerms& topic,
                              const SentimentLexicon& lexicon,
                              const std::map<UserId, double>& neighbor_topic_sentiments);

// ---- temporal -------------------------------------------------------------

inline constexpr std::size_t kGapBins = 22;

/// Log2-spaced bin of an inter-tweet gap: [0,1) -> 0, [2^i, 2^(i+1)) -> i+1
/// for i < 20, and >= 2^20 s -> overflow bin 21.
std::size_t gap_bin(Timestamp gap);

double inter_tweet_entropy_bits(std::span<const Timestamp> sorted_times);
double longest_session_hours(std::span<const Timestamp> sorted_times, Timestamp max_break);
int flipflop_count(std::span<const double> sentiments, double dead_zone);
double shannon_entropy_bits(std::span<const double> values);

struct UserNetworkActivity {
  std::size_t follows = 0;    // outgoing follow events
  std::size_t unfollows = 0;  // outgoing unfollow events
  std::vector<double> follower_series;  // in-degree at each weekly snapshot
};

NamedValues temporal_features(std::span<const Tweet> tweets, const UserNetworkActivity& activity,
                              int duration_days, const TopicTerms& topic,
                              const SentimentLexicon& lexicon, const FeatureParams& params);

// ---- profile --------------------------------------------------------------

double name_autogen_score(std::string_view screen_name, std::string_view display_name);
std::string normalize_url(std::string_view url);
std::set<std::string> profile_tokens(const UserAccount& account);
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

struct CloneIndex {
  std::map<std::string, std::size_t> url_count;    // normalized url -> accounts
  std::map<std::string, std::size_t> image_count;  // image ref -> accounts

  static CloneIndex build(const std::vector<UserAccount>& accounts);
};

NamedValues profile_features(const UserAccount& account, std::span<const Tweet> tweets,
                             const CloneIndex& clones,
                             const std::vector<std::set<std::string>>& known_bot_profiles);

// ---- network --------------------------------------------------------------

struct NetworkKernels {
  graphs::UserGraph retweet;
  graphs::UserGraph mention;
  std::vector<double> pagerank_retweet, pagerank_mention;
  std::vector<double> betweenness_retweet, betweenness_mention;
  std::vector<double> clustering_retweet, clustering_mention;
  FollowGraph final_follows;

  static NetworkKernels build(const Dataset& ds);
};

/// Cluster id per user; absent or negative ids mean "no cluster".
using ClusterMap = std::map<UserId, long>;

NamedValues network_features(UserId user, const NetworkKernels& kernels,
                             const std::set<UserId>& known_bots, const ClusterMap* clusters);

// ---- matrix ---------------------------------------------------------------

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FeatureMatrix {
  std::vector<UserId> ids;  // ascending
  std::vector<std::string> columns;
  RowMatrix raw;      // pre-normalization, missing entries imputed
  RowMatrix z;        // z-scored
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> missing;
  Eigen::VectorXd mean, stddev;

  std::optional<std::size_t> row_of(UserId id) const;
  std::size_t column(std::string_view name) const;
};

/// Mean-imputes missing entries then z-scores each column; constant columns
/// become zero.
FeatureMatrix normalize(std::vector<UserId> ids, std::vector<std::string> columns, RowMatrix raw,
                        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> missing);

struct LabelInputs {
  std::set<UserId> known_bots;
  std::optional<ClusterMap> clusters;
};

/// Label-independent state shared by every per-user extraction.
class FeatureContext {
 public:
  FeatureContext(const Dataset& ds, const SentimentLexicon& lexicon, FeatureParams params = {});

  const Dataset& dataset() const { return ds_; }
  const TopicTerms& topic() const { return topic_; }
  const graphs::HashtagGraph& hashtags() const { return hashtags_; }
  const NetworkKernels& kernels() const { return kernels_; }
  const FeatureParams& params() const { return params_; }
  std::optional<double> topic_sentiment(UserId id) const;
  std::map<UserId, double> neighbor_topic_sentiments(UserId id) const;
  const UserNetworkActivity& activity(UserId id) const;

  /// Concatenation of the six family outputs, in canonical order.
  NamedValues extract(UserId id, const LabelInputs& labels) const;
  FeatureMatrix assemble(const LabelInputs& labels) const;

 private:
  const Dataset& ds_;
  const SentimentLexicon& lexicon_;
  FeatureParams params_;
  graphs::HashtagGraph hashtags_;
  TopicTerms topic_;
  NetworkKernels kernels_;
  CloneIndex clones_;
  std::map<UserId, double> topic_sentiment_;
  std::map<UserId, std::vector<UserId>> neighbors_;
  std::map<UserId, UserNetworkActivity> activity_;
  std::map<UserId, std::set<std::string>> profile_tokens_;
};

/// Raw (pre-normalization) values, header = canonical names.
std::string to_csv(const FeatureMatrix& m);
FeatureMatrix from_csv(std::string_view csv);

}  // namespace bothunt::features
