#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bothunt/corpus.hpp"
#include "bothunt/text.hpp"

namespace bothunt {

bool Dataset::operator==(const Dataset& other) const {
  return accounts == other.accounts && tweets == other.tweets &&
         network_events == other.network_events && duration_days == other.duration_days &&
         start_time == other.start_time && topic_keywords == other.topic_keywords;
}

void Dataset::finalize() {
  std::sort(accounts.begin(), accounts.end(),
            [](const auto& a, const auto& b) { return a.user_id < b.user_id; });
  std::sort(tweets.begin(), tweets.end(), [](const Tweet& a, const Tweet& b) {
    return std::tie(a.user_id, a.timestamp, a.tweet_id) <
           std::tie(b.user_id, b.timestamp, b.tweet_id);
  });
  std::stable_sort(network_events.begin(), network_events.end(),
                   [](const NetworkEvent& a, const NetworkEvent& b) {
                     return std::tie(a.timestamp, a.from_user, a.to_user) <
                            std::tie(b.timestamp, b.from_user, b.to_user);
                   });

  account_index_.clear();
  screen_name_index_.clear();
  tweet_index_.clear();
  for (std::size_t i = 0; i < accounts.size(); ++i) {
    const auto& acc = accounts[i];
    if (!account_index_.emplace(acc.user_id, i).second) throw DuplicateUserError(acc.user_id);
    screen_name_index_.emplace(text::to_lower(acc.screen_name), acc.user_id);
  }
  std::size_t i = 0;
  while (i < tweets.size()) {
    std::size_t j = i;
    while (j < tweets.size() && tweets[j].user_id == tweets[i].user_id) ++j;
    tweet_index_[tweets[i].user_id] = {i, j};
    i = j;
  }
}

const UserAccount* Dataset::find_account(UserId id) const {
  auto it = account_index_.find(id);
  return it == account_index_.end() ? nullptr : &accounts[it->second];
}

std::optional<UserId> Dataset::find_by_screen_name(const std::string& name) const {
  auto it = screen_name_index_.find(text::to_lower(name));
  if (it == screen_name_index_.end()) return std::nullopt;
  return it->second;
}

std::pair<std::size_t, std::size_t> Dataset::tweet_range(UserId id) const {
  auto it = tweet_index_.find(id);
  return it == tweet_index_.end() ? std::pair<std::size_t, std::size_t>{0, 0} : it->second;
}

std::vector<Tweet> Dataset::tweets_of(UserId id) const {
  auto [b, e] = tweet_range(id);
  return {tweets.begin() + static_cast<std::ptrdiff_t>(b),
          tweets.begin() + static_cast<std::ptrdiff_t>(e)};
}

std::vector<UserId> Dataset::account_ids() const {
  std::vector<UserId> ids;
  ids.reserve(accounts.size());
  for (const auto& a : accounts) ids.push_back(a.user_id);
  return ids;
}

std::string to_string(BotFamily f) {
  switch (f) {
    case BotFamily::amplifier: return "amplifier";
    case BotFamily::infiltrator: return "infiltrator";
    case BotFamily::ring: return "ring";
  }
  return "unknown";
}

BotFamily bot_family_from_string(const std::string& s) {
  if (s == "amplifier") return BotFamily::amplifier;
  if (s == "infiltrator") return BotFamily::infiltrator;
  if (s == "ring") return BotFamily::ring;
  throw std::invalid_argument("unknown bot family: " + s);
}

bool GroundTruth::is_bot(UserId id) const {
  return std::binary_search(bot_ids.begin(), bot_ids.end(), id);
}

void GeneratorConfig::validate() const {
  if (n_users < 1) throw std::invalid_argument("n_users must be positive");
  if (n_bots < 0) throw std::invalid_argument("n_bots must be non-negative");
  if (n_bots > n_users) throw std::invalid_argument("n_bots exceeds n_users");
  if (duration_days < 1) throw std::invalid_argument("duration_days must be positive");
  if (flip_day < 0 || flip_day > duration_days)
    throw std::invalid_argument("flip_day outside the challenge window");
  const double parts[] = {family_mix.amplifier, family_mix.infiltrator, family_mix.ring};
  for (double p : parts)
    if (p < 0.0) throw std::invalid_argument("family_mix proportions must be non-negative");
  if (std::abs(family_mix.amplifier + family_mix.infiltrator + family_mix.ring - 1.0) > 1e-9)
    throw std::invalid_argument("family_mix proportions must sum to 1");
  if (human_rate_median <= 0.0 || human_rate_sigma < 0.0 || human_gap_sigma < 0.0)
    throw std::invalid_argument("human tweet-rate parameters out of range");
  if (network_only_fraction < 0.0 || network_only_fraction > 1.0)
    throw std::invalid_argument("network_only_fraction must lie in [0,1]");
}

namespace {
std::string issue_summary(const std::vector<LineIssue>& issues) {
  std::ostringstream os;
  os << issues.size() << " malformed line(s)";
  for (std::size_t i = 0; i < issues.size() && i < 5; ++i)
    os << "; " << issues[i].file << ':' << issues[i].line << ": " << issues[i].message;
  return os.str();
}
}  // namespace

ParseError::ParseError(std::vector<LineIssue> issues)
    : DatasetError(issue_summary(issues)), issues_(std::move(issues)) {}

DuplicateUserError::DuplicateUserError(UserId id)
    : DatasetError("duplicate user_id " + std::to_string(id)), id_(id) {}

}  // namespace bothunt
