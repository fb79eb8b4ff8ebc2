#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance run. Each one is written the slow, obvious way on purpose.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bothunt/corpus.hpp"
#include "bothunt/features.hpp"
#include "bothunt/graphs.hpp"

namespace bothunt::testing {

using RowMatrix = features::RowMatrix;

inline RowMatrix uniform_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  RowMatrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// ---- graphs -----------------------------------------------------------------

inline graphs::WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  graphs::WeightedGraph g(n);
  std::bernoulli_distribution coin(p);
  for (graphs::NodeIndex u = 0; u < n; ++u)
    for (graphs::NodeIndex v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v, 1.0);
  return g;
}

inline graphs::DiGraph random_digraph(std::mt19937_64& rng, std::size_t n, double p) {
  graphs::DiGraph g(n);
  std::bernoulli_distribution coin(p);
  std::uniform_int_distribution<int> weight(1, 3);
  for (graphs::NodeIndex u = 0; u < n; ++u)
    for (graphs::NodeIndex v = 0; v < n; ++v)
      if (u != v && coin(rng)) g.add_arc(u, v, weight(rng));
  return g;
}

// Dense power iteration on the Google matrix, dangling mass spread uniformly.
inline std::vector<double> dense_pagerank(const graphs::DiGraph& g, double d) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);  // column-stochastic
  for (Eigen::Index u = 0; u < n; ++u) {
    double out = 0.0;
    for (const auto& [v, w] : g.out_arcs(static_cast<graphs::NodeIndex>(u))) out += w;
    if (out == 0.0) {
      m.col(u).setConstant(1.0 / static_cast<double>(n));
    } else {
      for (const auto& [v, w] : g.out_arcs(static_cast<graphs::NodeIndex>(u)))
        m(static_cast<Eigen::Index>(v), u) = w / out;
    }
  }
  const Eigen::MatrixXd google = d * m + Eigen::MatrixXd::Constant(n, n, (1.0 - d) / static_cast<double>(n));
  Eigen::VectorXd r = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int i = 0; i < 2000; ++i) r = google * r;
  r /= r.sum();
  return {r.data(), r.data() + n};
}

// Every shortest path between every pair, enumerated explicitly.
inline std::vector<double> enumerated_betweenness(const graphs::WeightedGraph& g) {
  using graphs::NodeIndex;
  const std::size_t n = g.node_count();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (NodeIndex s = 0; s < n; ++s) {
    std::vector<NodeIndex> frontier{s};
    dist[s][s] = 0;
    for (int d = 1; !frontier.empty(); ++d) {
      std::vector<NodeIndex> next;
      for (auto u : frontier)
        for (const auto& [v, _] : g.neighbors(u))
          if (dist[s][v] < 0) {
            dist[s][v] = d;
            next.push_back(v);
          }
      frontier = next;
    }
  }
  std::vector<double> cb(n, 0.0);
  for (NodeIndex s = 0; s < n; ++s)
    for (NodeIndex t = s + 1; t < n; ++t) {
      if (dist[s][t] <= 0) continue;
      std::vector<std::vector<NodeIndex>> paths;
      std::vector<NodeIndex> path{s};
      auto walk = [&](auto&& self, NodeIndex u) -> void {
        if (u == t) {
          paths.push_back(path);
          return;
        }
        for (const auto& [v, _] : g.neighbors(u))
          if (dist[s][v] == dist[s][u] + 1 && dist[v][t] == dist[u][t] - 1) {
            path.push_back(v);
            self(self, v);
            path.pop_back();
          }
      };
      walk(walk, s);
      std::vector<std::size_t> through(n, 0);
      for (const auto& p : paths)
        for (std::size_t i = 1; i + 1 < p.size(); ++i) ++through[p[i]];
      for (NodeIndex v = 0; v < n; ++v)
        cb[v] += static_cast<double>(through[v]) / static_cast<double>(paths.size());
    }
  return cb;
}

inline std::vector<double> enumerated_clustering(const graphs::WeightedGraph& g) {
  using graphs::NodeIndex;
  const std::size_t n = g.node_count();
  std::vector<double> tri(n, 0.0);
  auto adj = [&](NodeIndex a, NodeIndex b) { return g.weight(a, b) > 0.0; };
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex j = i + 1; j < n; ++j)
      for (NodeIndex k = j + 1; k < n; ++k)
        if (adj(i, j) && adj(j, k) && adj(i, k)) {
          tri[i] += 1;
          tri[j] += 1;
          tri[k] += 1;
        }
  std::vector<double> c(n, 0.0);
  for (NodeIndex v = 0; v < n; ++v) {
    const double d = static_cast<double>(g.neighbors(v).size());
    if (d >= 2) c[v] = tri[v] / (d * (d - 1) / 2.0);
  }
  return c;
}

// Two 10-cliques joined by the single edge 9-10.
inline graphs::WeightedGraph two_cliques() {
  using graphs::NodeIndex;
  graphs::WeightedGraph g(20);
  for (NodeIndex base : {NodeIndex{0}, NodeIndex{10}})
    for (NodeIndex u = 0; u < 10; ++u)
      for (NodeIndex v = u + 1; v < 10; ++v) g.add_edge(base + u, base + v, 1.0);
  g.add_edge(9, 10, 1.0);
  return g;
}

// ---- density clustering ------------------------------------------------------

inline constexpr long kRefNoise = -1;

// Components of the core-core graph via union-find, then each border point
// joins the component whose lowest core index is smallest.
inline std::vector<long> reference_dbscan(const RowMatrix& x, double eps, int min_pts) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < x.cols(); ++k) {
        const double d = x(static_cast<Eigen::Index>(i), k) - x(static_cast<Eigen::Index>(j), k);
        s += d * d;
      }
      near[i][j] = std::sqrt(s) <= eps;
    }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = std::count(near[i].begin(), near[i].end(), true) >= min_pts;

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (core[i] && core[j] && near[i][j]) parent[find(i)] = find(j);

  std::map<std::size_t, std::size_t> lowest_core;  // root -> lowest core row
  for (std::size_t i = 0; i < n; ++i)
    if (core[i]) lowest_core.emplace(find(i), i);

  std::vector<long> label(n, kRefNoise);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      label[i] = static_cast<long>(lowest_core[find(i)]);
      continue;
    }
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j)
      if (core[j] && near[i][j]) best = std::min(best, lowest_core[find(j)]);
    if (best < n) label[i] = static_cast<long>(best);
  }
  return label;
}

// Relabels clusters by order of first appearance so partitions compare directly.
inline std::vector<long> canonical(const std::vector<long>& label) {
  std::map<long, long> remap;
  std::vector<long> out;
  for (auto l : label) {
    if (l < 0) {
      out.push_back(kRefNoise);
      continue;
    }
    auto [it, _] = remap.emplace(l, static_cast<long>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

// Four gaussian blobs with every seventh row scattered uniformly.
inline RowMatrix blobs_with_noise(std::mt19937_64& rng, int n, int d) {
  std::normal_distribution<double> g(0.0, 0.6);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> pick(0, 3);
  RowMatrix centers = uniform_matrix(rng, 4, d, -8.0, 8.0);
  RowMatrix x(n, d);
  for (int i = 0; i < n; ++i) {
    const bool stray = i % 7 == 0;
    const int c = pick(rng);
    for (int k = 0; k < d; ++k) x(i, k) = stray ? u(rng) : centers(c, k) + g(rng);
  }
  return x;
}

// ---- temporal entropy ----------------------------------------------------------

// Bin index of a gap, computed by repeated halving.
inline std::size_t slow_bin(Timestamp gap) {
  if (gap < 1) return 0;
  std::size_t bin = 1;
  while (gap >= 2 && bin < 21) {
    gap /= 2;
    ++bin;
  }
  return bin;
}

inline double histogram_entropy(const std::vector<Timestamp>& sorted) {
  std::map<std::size_t, double> hist;
  for (std::size_t i = 1; i < sorted.size(); ++i) hist[slow_bin(sorted[i] - sorted[i - 1])] += 1;
  double h = 0.0;
  const double n = static_cast<double>(sorted.size() - 1);
  for (const auto& [_, c] : hist) h -= (c / n) * std::log2(c / n);
  return h;
}

// Random sorted timestamps whose gaps span many orders of magnitude.
inline std::vector<Timestamp> random_times(std::mt19937_64& rng) {
  std::vector<Timestamp> times = {0};
  const int n = 2 + static_cast<int>(rng() % 60);
  for (int i = 0; i < n; ++i) {
    const int scale = static_cast<int>(rng() % 24);
    times.push_back(times.back() + static_cast<Timestamp>(rng() % (Timestamp{1} << scale)));
  }
  return times;
}

}  // namespace bothunt::testing
