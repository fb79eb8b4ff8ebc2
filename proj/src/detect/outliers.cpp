#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "bothunt/detect.hpp"

namespace bothunt::detect {

graphs::WeightedGraph knn_graph(const RowMatrix& x, int k) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (k < 1 || static_cast<std::size_t>(k) >= n)
    throw DetectError("knn_graph needs 1 <= k < rows (k=" + std::to_string(k) + ", rows=" +
                      std::to_string(n) + ")");
  graphs::WeightedGraph g(n);
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < n; ++i) {
    d.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        d.emplace_back((x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).norm(), j);
    std::partial_sort(d.begin(), d.begin() + k, d.end());
    for (int t = 0; t < k; ++t) {
      const auto [dist, j] = d[static_cast<std::size_t>(t)];
      // union: an edge found from both ends keeps its single weight
      if (g.weight(i, j) == 0.0) g.add_edge(i, j, 1.0 / (1.0 + dist));
    }
  }
  return g;
}

OutlierReport outlier_scores(const RowMatrix& x, const ClusterAssignment& clusters) {
  const auto n = x.rows();
  if (static_cast<std::size_t>(n) != clusters.label.size())
    throw DetectError("outlier_scores: cluster labels do not match rows");
  OutlierReport r;
  r.score.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<Eigen::RowVectorXd> centroids;
  if (clusters.cluster_count > 0) {
    centroids.assign(static_cast<std::size_t>(clusters.cluster_count), Eigen::RowVectorXd::Zero(x.cols()));
    std::vector<double> count(centroids.size(), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto l = clusters.label[static_cast<std::size_t>(i)];
      if (l < 0) continue;
      centroids[static_cast<std::size_t>(l)] += x.row(i);
      count[static_cast<std::size_t>(l)] += 1.0;
    }
    for (std::size_t c = 0; c < centroids.size(); ++c) centroids[c] /= count[c];
  } else if (n > 0) {
    centroids.push_back(x.colwise().mean());
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : centroids) best = std::min(best, (x.row(i) - c).norm());
    r.score[static_cast<std::size_t>(i)] = centroids.empty() ? 0.0 : best;
  }
  r.ranking.resize(static_cast<std::size_t>(n));
  std::iota(r.ranking.begin(), r.ranking.end(), std::size_t{0});
  std::stable_sort(r.ranking.begin(), r.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return r.score[a] > r.score[b]; });
  return r;
}

std::vector<long> micro_cluster(const RowMatrix& embedding, const RowMatrix& features,
                                const std::vector<std::size_t>& rows, const MicroConfig& cfg) {
  std::vector<long> group(rows.size(), 0);
  if (rows.size() < 2) return group;

  if (cfg.method == MicroMethod::knn_louvain) {
    RowMatrix sub(static_cast<Eigen::Index>(rows.size()), embedding.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
      sub.row(static_cast<Eigen::Index>(i)) = embedding.row(static_cast<Eigen::Index>(rows[i]));
    const int k = std::min<int>(cfg.knn_k, static_cast<int>(rows.size()) - 1);
    const auto assignment = graphs::louvain(knn_graph(sub, k));
    for (std::size_t i = 0; i < rows.size(); ++i) group[i] = static_cast<long>(assignment.community[i]);
    return group;
  }

  // second factorization restricted to the candidates; group = dominant factor
  RowMatrix sub(static_cast<Eigen::Index>(rows.size()), features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    sub.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
  sub = shift_nonnegative(sub);
  NmfConfig nc;
  nc.rank = std::min<int>(cfg.nmf_rank, static_cast<int>(std::min(sub.rows(), sub.cols())));
  nc.seed = cfg.seed;
  const auto e = nmf(sub, nc);
  std::map<Eigen::Index, long> renumber;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Eigen::Index best = 0;
    e.w.row(static_cast<Eigen::Index>(i)).maxCoeff(&best);
    auto [it, _] = renumber.emplace(best, static_cast<long>(renumber.size()));
    group[i] = it->second;
  }
  return group;
}

}  // namespace bothunt::detect
