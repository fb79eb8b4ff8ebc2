#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

namespace bothunt {

/// Term weights in [-1, 1] plus negation tokens. File format: `term<TAB>weight`
/// lines, `#` comments, and negation tokens one per line under `[negation]`.
struct SentimentLexicon {
  std::unordered_map<std::string, double> weights;
  std::set<std::string> negations;

  static SentimentLexicon parse(std::istream& in);
  static SentimentLexicon load(const std::filesystem::path& file);
  /// The lexicon shipped in data/lexicon.tsv.
  static const SentimentLexicon& builtin();
};

/// Mean of matched term weights; a negation token up to two tokens before a
/// term flips its sign. Clamped to [-1, 1]; 0 when nothing matches.
double score_sentiment(std::string_view text, const SentimentLexicon& lexicon);

}  // namespace bothunt
