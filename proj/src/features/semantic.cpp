#include <cmath>
#include <set>

#include "bothunt/features.hpp"

namespace bothunt::features {

NamedValues semantic_features(std::span<const Tweet> tweets, const TopicTerms& topic,
                              const SentimentLexicon& lexicon,
                              const std::map<UserId, double>& neighbor_topic_sentiments) {
  NamedValues out;
  double topic_count = 0, topic_sum = 0;
  double pos_sum = 0, pos_n = 0, neg_sum = 0, neg_n = 0;
  double incons_sum = 0, incons_n = 0;
  std::set<std::string> languages;
  for (const auto& t : tweets) {
    languages.insert(t.language);
    const double s = score_sentiment(t.text, lexicon);
    if (topic.matches(t)) {
      topic_count += 1;
      topic_sum += s;
      if (s > 0) {
        pos_sum += s;
        pos_n += 1;
      } else if (s < 0) {
        neg_sum += s;
        neg_n += 1;
      }
    }
    if (t.url_text) {
      incons_sum += std::abs(s - score_sentiment(*t.url_text, lexicon));
      incons_n += 1;
    }
  }
  const bool has_topic = topic_count > 0;
  const double avg = has_topic ? topic_sum / topic_count : 0.0;
  out.set("topic_tweet_count", topic_count);
  out.set("avg_topic_sentiment", avg, !has_topic);
  out.set("pos_strength", pos_n > 0 ? pos_sum / pos_n : 0.0, pos_n == 0);
  out.set("neg_strength", neg_n > 0 ? neg_sum / neg_n : 0.0, neg_n == 0);

  double neighbor_sum = 0;
  for (const auto& [_, s] : neighbor_topic_sentiments) neighbor_sum += s;
  const bool has_neighbors = !neighbor_topic_sentiments.empty();
  const double neighbor_mean = has_neighbors ? neighbor_sum / static_cast<double>(neighbor_topic_sentiments.size()) : 0.0;
  const bool contradiction_defined = has_topic && has_neighbors;
  out.set("contradiction_rank", contradiction_defined ? std::abs(avg - neighbor_mean) : 0.0,
          !contradiction_defined);
  out.set("language_count", static_cast<double>(languages.size()));
  out.set("sentiment_inconsistency", incons_n > 0 ? incons_sum / incons_n : 0.0, incons_n == 0);
  return out;
}

}  // namespace bothunt::features
