#include <algorithm>

#include "bothunt/detect.hpp"

namespace bothunt::detect {

std::set<std::string> salient_features(const features::FeatureMatrix& m, std::size_t row, double threshold) {
  std::set<std::string> out;
  const auto r = static_cast<Eigen::Index>(row);
  for (std::size_t j = 0; j < m.columns.size(); ++j) {
    const double z = m.z(r, static_cast<Eigen::Index>(j));
    if (z >= threshold)
      out.insert(m.columns[j] + "+");
    else if (z <= -threshold)
      out.insert(m.columns[j] + "-");
  }
  return out;
}

std::vector<Suspect> rank_suspects(const features::FeatureMatrix& m, const features::ClusterMap& clusters,
                                   const std::map<UserId, double>& outlier_score,
                                   const SuspectInputs& labels, const SuspectWeights& weights) {
  // cluster -> (size, known bots)
  std::map<long, std::pair<double, double>> tally;
  for (const auto& [id, c] : clusters) {
    if (c < 0) continue;
    auto& t = tally[c];
    t.first += 1;
    if (labels.known_bots.contains(id)) t.second += 1;
  }
  double max_outlier = 0.0;
  for (const auto& [_, s] : outlier_score) max_outlier = std::max(max_outlier, s);

  std::vector<std::set<std::string>> bot_cues;
  std::vector<UserId> bot_ids;
  for (auto b : labels.known_bots)
    if (auto row = m.row_of(b)) {
      bot_cues.push_back(salient_features(m, *row));
      bot_ids.push_back(b);
    }

  std::vector<Suspect> out;
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    const UserId id = m.ids[i];
    if (labels.known_humans.contains(id) || labels.guessed.contains(id) || labels.known_bots.contains(id))
      continue;
    Suspect s;
    s.user_id = id;
    if (auto it = clusters.find(id); it != clusters.end() && it->second >= 0) {
      const auto& [size, bots] = tally[it->second];
      s.cluster_bot_fraction = bots / size;
    }
    if (auto it = outlier_score.find(id); it != outlier_score.end() && max_outlier > 0.0)
      s.outlier = it->second / max_outlier;
    if (!bot_cues.empty()) {
      const auto mine = salient_features(m, i);
      for (const auto& cues : bot_cues) s.similarity = std::max(s.similarity, features::jaccard(mine, cues));
    }
    s.score = weights.cluster * s.cluster_bot_fraction + weights.outlier * s.outlier +
              weights.similarity * s.similarity;
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const Suspect& a, const Suspect& b) { return a.score > b.score; });
  return out;
}

}  // namespace bothunt::detect
