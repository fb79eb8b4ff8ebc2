#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "bothunt/corpus.hpp"

namespace bothunt {

std::string to_string(Violation v) {
  switch (v) {
    case Violation::bad_weight: return "bad_weight";
    case Violation::negative_count: return "negative_count";
    case Violation::tweet_out_of_window: return "tweet_out_of_window";
    case Violation::event_after_window: return "event_after_window";
    case Violation::unknown_author: return "unknown_author";
    case Violation::orphan_retweet_of: return "orphan_retweet_of";
    case Violation::retweet_flag_mismatch: return "retweet_flag_mismatch";
    case Violation::duplicate_tweet_id: return "duplicate_tweet_id";
  }
  return "unknown";
}

std::size_t ValidationReport::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0},
                         [](std::size_t acc, const auto& kv) { return acc + kv.second; });
}

ValidationReport validate_dataset(const Dataset& ds) {
  ValidationReport report;
  auto flag = [&](Violation v, const std::string& what) {
    ++report.counts[v];
    if (report.samples.size() < 20) report.samples.push_back(to_string(v) + ": " + what);
  };

  std::unordered_set<UserId> known;
  for (const auto& a : ds.accounts) {
    known.insert(a.user_id);
    if (a.followers_count < 0 || a.followings_count < 0)
      flag(Violation::negative_count, "user " + std::to_string(a.user_id));
  }
  // Ids that occur only in the follow data are legitimate authors too.
  for (const auto& e : ds.network_events) {
    known.insert(e.from_user);
    known.insert(e.to_user);
    if (e.weight != 0 && e.weight != 1)
      flag(Violation::bad_weight, std::to_string(e.from_user) + "->" + std::to_string(e.to_user) +
                                      " weight " + std::to_string(e.weight));
    if (e.timestamp > ds.end_time())
      flag(Violation::event_after_window,
           std::to_string(e.from_user) + "->" + std::to_string(e.to_user));
  }

  std::unordered_set<TweetId> tweet_ids;
  for (const auto& t : ds.tweets) {
    const auto tid = "tweet " + std::to_string(t.tweet_id);
    if (!tweet_ids.insert(t.tweet_id).second) flag(Violation::duplicate_tweet_id, tid);
    if (t.timestamp < ds.start_time || t.timestamp >= ds.end_time())
      flag(Violation::tweet_out_of_window, tid);
    if (!known.contains(t.user_id)) flag(Violation::unknown_author, tid);
    if (t.retweet_of && !known.contains(*t.retweet_of)) flag(Violation::orphan_retweet_of, tid);
    if (t.retweet_of.has_value() != t.is_retweet) flag(Violation::retweet_flag_mismatch, tid);
  }
  return report;
}

std::int64_t day_of(const Dataset& ds, Timestamp t) {
  const auto delta = t - ds.start_time;
  // floor division so pre-window events land on negative days
  return delta >= 0 ? delta / kSecondsPerDay : -((-delta + kSecondsPerDay - 1) / kSecondsPerDay);
}

bool FollowGraph::has_edge(UserId from, UserId to) const {
  auto it = out.find(from);
  return it != out.end() && std::binary_search(it->second.begin(), it->second.end(), to);
}

std::size_t FollowGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, targets] : out) n += targets.size();
  return n;
}

std::map<UserId, std::size_t> FollowGraph::in_degrees() const {
  std::map<UserId, std::size_t> deg;
  for (const auto& [_, targets] : out)
    for (auto t : targets) ++deg[t];
  return deg;
}

FollowGraph network_snapshot(const Dataset& ds, int day) {
  if (day < 0 || day > ds.duration_days)
    throw std::out_of_range("snapshot day " + std::to_string(day) + " outside [0, " +
                            std::to_string(ds.duration_days) + "]");
  // Events are time-ordered after finalize(), but the caller may hand us a
  // hand-built dataset, so order by timestamp here (stable on file order).
  std::vector<std::size_t> order(ds.network_events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ds.network_events[a].timestamp < ds.network_events[b].timestamp;
  });

  std::map<std::pair<UserId, UserId>, int> latest;
  for (auto i : order) {
    const auto& e = ds.network_events[i];
    if (day_of(ds, e.timestamp) > day) break;
    latest[{e.from_user, e.to_user}] = e.weight;
  }
  FollowGraph g;
  for (const auto& [edge, w] : latest)
    if (w == 1) g.out[edge.first].push_back(edge.second);  // map order keeps targets sorted
  return g;
}

}  // namespace bothunt
