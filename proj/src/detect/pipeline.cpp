#include <algorithm>

#include "bothunt/detect.hpp"

namespace bothunt::detect {

double PipelineResult::outlier_score(UserId id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return 0.0;
  return outliers.score[static_cast<std::size_t>(it - ids.begin())];
}

double PipelineResult::max_outlier_score() const {
  return outliers.score.empty() ? 0.0 : *std::max_element(outliers.score.begin(), outliers.score.end());
}

PipelineResult run_pipeline(const features::FeatureMatrix& m, const PipelineConfig& cfg) {
  PipelineResult r;
  r.ids = m.ids;
  const RowMatrix x = shift_nonnegative(m.z);
  r.embedding = nmf(x, cfg.nmf);
  const RowMatrix& w = r.embedding.w;

  const double eps = cfg.eps > 0.0 ? cfg.eps : auto_eps(w, cfg.min_pts);
  r.raw_clusters = dbscan(w, eps, cfg.min_pts);
  r.clusters = demote_small_clusters(r.raw_clusters, cfg.small_cluster_fraction);
  r.outliers = outlier_scores(w, r.clusters);

  std::vector<std::size_t> rows;
  for (auto i : r.outliers.ranking)
    if (r.clusters.label[i] == kNoise) rows.push_back(i);
  for (auto i : rows) r.candidates.push_back(r.ids[i]);
  r.micro_group = micro_cluster(w, m.z, rows, cfg.micro);

  for (std::size_t i = 0; i < r.ids.size(); ++i)
    if (r.clusters.label[i] >= 0) r.cluster_map[r.ids[i]] = r.clusters.label[i];
  for (std::size_t c = 0; c < rows.size(); ++c)
    r.cluster_map[r.ids[rows[c]]] = r.clusters.cluster_count + r.micro_group[c];
  return r;
}

}  // namespace bothunt::detect
