#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bothunt {

using UserId = std::int64_t;
using TweetId = std::int64_t;
using Timestamp = std::int64_t;  // epoch seconds

inline constexpr Timestamp kSecondsPerDay = 86400;

struct UserAccount {
  UserId user_id = 0;
  std::string screen_name;
  std::string display_name;
  std::string bio;
  std::string profile_image_ref;
  std::string profile_url;
  std::int64_t followers_count = 0;
  std::int64_t followings_count = 0;
  Timestamp created_at = 0;
  std::vector<std::string> sources;
  bool active = true;

  bool operator==(const UserAccount&) const = default;
};

struct Tweet {
  TweetId tweet_id = 0;
  UserId user_id = 0;
  Timestamp timestamp = 0;
  std::string text;
  // Entity tokens are stored lower-cased and without their '#' / '@' sigil.
  std::vector<std::string> hashtags;
  std::vector<std::string> mentions;
  std::vector<std::string> urls;
  bool is_retweet = false;
  std::optional<UserId> retweet_of;
  bool geo_enabled = false;
  std::string language = "en";
  std::optional<std::string> url_text;

  bool operator==(const Tweet&) const = default;
};

/// A follow (weight 1) or unfollow (weight 0) event.
struct NetworkEvent {
  UserId from_user = 0;
  UserId to_user = 0;
  Timestamp timestamp = 0;
  int weight = 1;

  bool operator==(const NetworkEvent&) const = default;
};

/// Immutable corpus of one challenge. Tweets are ordered by (user_id,
/// timestamp, tweet_id) and network events by (timestamp, from, to) once
/// built through `finalize()`.
struct Dataset {
  std::vector<UserAccount> accounts;
  std::vector<Tweet> tweets;
  std::vector<NetworkEvent> network_events;
  int duration_days = 28;
  Timestamp start_time = 0;
  std::vector<std::string> topic_keywords;

  // Compares the records only; indexes are derived state.
  bool operator==(const Dataset& other) const;

  Timestamp end_time() const { return start_time + duration_days * kSecondsPerDay; }

  /// Sorts records into canonical order and rebuilds the lookup indexes.
  void finalize();

  const UserAccount* find_account(UserId id) const;
  std::optional<UserId> find_by_screen_name(const std::string& name) const;
  /// Contiguous range of tweets authored by `id` (empty when none).
  std::pair<std::size_t, std::size_t> tweet_range(UserId id) const;
  std::vector<Tweet> tweets_of(UserId id) const;
  std::vector<UserId> account_ids() const;

 private:
  std::unordered_map<UserId, std::size_t> account_index_;
  std::unordered_map<std::string, UserId> screen_name_index_;
  std::unordered_map<UserId, std::pair<std::size_t, std::size_t>> tweet_index_;
};

enum class BotFamily { amplifier, infiltrator, ring };

std::string to_string(BotFamily f);
BotFamily bot_family_from_string(const std::string& s);

struct FamilyMix {
  double amplifier = 0.4;
  double infiltrator = 0.3;
  double ring = 0.3;

  bool operator==(const FamilyMix&) const = default;
};

struct GeneratorConfig {
  int n_users = 1000;
  int n_bots = 39;
  FamilyMix family_mix;
  int duration_days = 28;
  // Humans: tweets/day is log-normal with this median and log-sigma.
  double human_rate_median = 1.5;
  double human_rate_sigma = 0.9;
  double human_gap_sigma = 1.4;
  int flip_day = 14;
  Timestamp start_time = 1422748800;  // 2015-02-01T00:00:00Z
  double network_only_fraction = 0.05;
  std::uint64_t seed = 42;

  bool operator==(const GeneratorConfig&) const = default;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct GroundTruth {
  std::vector<UserId> bot_ids;  // ascending
  std::map<UserId, BotFamily> family_of;
  GeneratorConfig config;
  std::uint64_t seed = 0;

  bool operator==(const GroundTruth&) const = default;
  bool is_bot(UserId id) const;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LineIssue {
  std::string file;
  std::size_t line = 0;
  std::string message;
};

/// Raised by `load_dataset` once every file has been scanned; carries each
/// malformed line so callers can report them all at once.
class ParseError : public DatasetError {
 public:
  explicit ParseError(std::vector<LineIssue> issues);
  const std::vector<LineIssue>& issues() const { return issues_; }

 private:
  std::vector<LineIssue> issues_;
};

class DuplicateUserError : public DatasetError {
 public:
  explicit DuplicateUserError(UserId id);
  UserId id() const { return id_; }

 private:
  UserId id_;
};

Dataset load_dataset(const std::filesystem::path& root);
void write_dataset(const Dataset& ds, const std::filesystem::path& root);

GroundTruth load_ground_truth(const std::filesystem::path& file);
void write_ground_truth(const GroundTruth& gt, const std::filesystem::path& file);

GeneratorConfig load_generator_config(const std::filesystem::path& file);

enum class Violation {
  bad_weight,
  negative_count,
  tweet_out_of_window,
  event_after_window,
  unknown_author,
  orphan_retweet_of,
  retweet_flag_mismatch,
  duplicate_tweet_id,
};

std::string to_string(Violation v);

struct ValidationReport {
  std::map<Violation, std::size_t> counts;
  std::vector<std::string> samples;  // first few offending records

  bool empty() const { return counts.empty(); }
  std::size_t total() const;
};

ValidationReport validate_dataset(const Dataset& ds);

/// Produces a synthetic challenge. Deterministic in (cfg, seed).
std::pair<Dataset, GroundTruth> generate_challenge(const GeneratorConfig& cfg, std::uint64_t seed);

/// Directed follow graph as adjacency sets, keyed by user id.
struct FollowGraph {
  std::map<UserId, std::vector<UserId>> out;  // sorted targets

  bool has_edge(UserId from, UserId to) const;
  std::size_t edge_count() const;
  std::map<UserId, std::size_t> in_degrees() const;
};

/// Day index of a timestamp relative to the challenge start (negative for
/// events before the window).
std::int64_t day_of(const Dataset& ds, Timestamp t);

/// Edge (a,b) present iff the latest a→b event on or before `day` follows.
FollowGraph network_snapshot(const Dataset& ds, int day);

}  // namespace bothunt
