#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bothunt/lexicon.hpp"
#include "bothunt/text.hpp"

namespace bothunt {

namespace detail {
extern const char* const kBuiltinLexicon;
}

SentimentLexicon SentimentLexicon::parse(std::istream& in) {
  SentimentLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  bool negation_section = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line == "[negation]") {
      negation_section = true;
      continue;
    }
    if (negation_section) {
      lex.negations.insert(text::to_lower(line.substr(first)));
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("lexicon line " + std::to_string(lineno) + ": expected term<TAB>weight");
    const double w = std::stod(line.substr(tab + 1));
    if (w < -1.0 || w > 1.0)
      throw std::runtime_error("lexicon line " + std::to_string(lineno) + ": weight outside [-1,1]");
    lex.weights[text::to_lower(line.substr(0, tab))] = w;
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open lexicon: " + file.string());
  return parse(in);
}

const SentimentLexicon& SentimentLexicon::builtin() {
  static const SentimentLexicon lex = [] {
    std::istringstream in(detail::kBuiltinLexicon);
    return parse(in);
  }();
  return lex;
}

double score_sentiment(std::string_view text, const SentimentLexicon& lexicon) {
  const auto raw = text::split_ws(text);
  std::vector<std::string> tokens;
  tokens.reserve(raw.size());
  for (const auto& t : raw) tokens.push_back(text::normalize_word(t));

  double sum = 0.0;
  int matched = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = lexicon.weights.find(tokens[i]);
    if (it == lexicon.weights.end()) continue;
    bool negated = false;
    for (std::size_t back = 1; back <= 2 && back <= i; ++back)
      if (lexicon.negations.contains(tokens[i - back])) negated = true;
    sum += negated ? -it->second : it->second;
    ++matched;
  }
  if (matched == 0) return 0.0;
  return std::clamp(sum / matched, -1.0, 1.0);
}

}  // namespace bothunt
