#include <bit>
#include <cmath>
#include <map>

#include "bothunt/features.hpp"

namespace bothunt::features {

std::size_t gap_bin(Timestamp gap) {
  if (gap <= 0) return 0;
  const auto w = static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(gap)));
  return std::min(w, kGapBins - 1);
}

double inter_tweet_entropy_bits(std::span<const Timestamp> sorted_times) {
  if (sorted_times.size() < 2) return 0.0;
  std::array<std::size_t, kGapBins> hist{};
  for (std::size_t i = 1; i < sorted_times.size(); ++i) ++hist[gap_bin(sorted_times[i] - sorted_times[i - 1])];
  const double n = static_cast<double>(sorted_times.size() - 1);
  double h = 0.0;
  for (auto c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double longest_session_hours(std::span<const Timestamp> sorted_times, Timestamp max_break) {
  if (sorted_times.empty()) return 0.0;
  Timestamp best = 0;
  Timestamp first = sorted_times.front();
  for (std::size_t i = 1; i < sorted_times.size(); ++i) {
    if (sorted_times[i] - sorted_times[i - 1] > max_break) first = sorted_times[i];
    best = std::max(best, sorted_times[i] - first);
  }
  return static_cast<double>(best) / 3600.0;
}

int flipflop_count(std::span<const double> sentiments, double dead_zone) {
  int flips = 0;
  int last = 0;
  for (double s : sentiments) {
    if (std::abs(s) < dead_zone) continue;
    const int sign = s > 0 ? 1 : -1;
    if (last != 0 && sign != last) ++flips;
    last = sign;
  }
  return flips;
}

double shannon_entropy_bits(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::map<double, std::size_t> counts;
  for (double v : values) ++counts[v];
  const double n = static_cast<double>(values.size());
  double h = 0.0;
  for (const auto& [_, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

NamedValues temporal_features(std::span<const Tweet> tweets, const UserNetworkActivity& activity,
                              int duration_days, const TopicTerms& topic,
                              const SentimentLexicon& lexicon, const FeatureParams& params) {
  std::vector<Timestamp> times;
  times.reserve(tweets.size());
  for (const auto& t : tweets) times.push_back(t.timestamp);
  std::sort(times.begin(), times.end());
  const bool short_history = times.size() < 2;

  NamedValues out;
  out.set("inter_tweet_entropy_bits", inter_tweet_entropy_bits(times), short_history);
  out.set("longest_session_hours_5min",
          short_history ? 0.0 : longest_session_hours(times, params.session_breaks[0]), short_history);
  out.set("longest_session_hours_10min",
          short_history ? 0.0 : longest_session_hours(times, params.session_breaks[1]), short_history);
  out.set("tweets_per_day",
          duration_days > 0 ? static_cast<double>(tweets.size()) / duration_days : 0.0);

  // topic sentiment in time order
  std::vector<std::pair<Timestamp, double>> scored;
  for (const auto& t : tweets)
    if (topic.matches(t)) scored.emplace_back(t.timestamp, score_sentiment(t.text, lexicon));
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> sentiments;
  for (const auto& [_, s] : scored) sentiments.push_back(s);
  out.set("flipflop_count", flipflop_count(sentiments, params.flipflop_dead_zone));

  double variance = 0.0;
  if (!sentiments.empty()) {
    double mean = 0.0;
    for (double s : sentiments) mean += s;
    mean /= static_cast<double>(sentiments.size());
    for (double s : sentiments) variance += (s - mean) * (s - mean);
    variance /= static_cast<double>(sentiments.size());
  }
  out.set("sentiment_variance", variance, sentiments.empty());

  const auto events = activity.follows + activity.unfollows;
  out.set("dropped_follower_pct",
          events ? static_cast<double>(activity.unfollows) / static_cast<double>(events) : 0.0);

  const auto& series = activity.follower_series;
  double snr = 0.0;
  if (!series.empty()) {
    double mean = 0.0, var = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(series.size());
    for (double v : series) var += (v - mean) * (v - mean);
    var /= static_cast<double>(series.size());
    snr = mean / (std::sqrt(var) + params.snr_epsilon);
  }
  out.set("snr", snr, series.empty());
  out.set("series_entropy", shannon_entropy_bits(series), series.empty());
  return out;
}

}  // namespace bothunt::features
