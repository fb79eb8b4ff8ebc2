#include <cmath>
#include <queue>
#include <stdexcept>

#include "bothunt/graphs.hpp"

namespace bothunt::graphs {

PageRankResult pagerank(const DiGraph& g, double damping, double tol, int max_iter) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("pagerank on an empty graph");
  std::vector<double> out_weight(n, 0.0);
  for (NodeIndex u = 0; u < n; ++u)
    for (const auto& [_, w] : g.out_arcs(u)) out_weight[u] += w;

  PageRankResult res;
  res.scores.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int it = 1; it <= max_iter; ++it) {
    double dangling = 0.0;
    for (NodeIndex u = 0; u < n; ++u)
      if (out_weight[u] == 0.0) dangling += res.scores[u];
    const double base = (1.0 - damping) / static_cast<double>(n) + damping * dangling / static_cast<double>(n);
    std::fill(next.begin(), next.end(), base);
    for (NodeIndex u = 0; u < n; ++u) {
      if (out_weight[u] == 0.0) continue;
      const double share = damping * res.scores[u] / out_weight[u];
      for (const auto& [v, w] : g.out_arcs(u)) next[v] += share * w;
    }
    double change = 0.0;
    for (NodeIndex u = 0; u < n; ++u) change += std::abs(next[u] - res.scores[u]);
    res.scores.swap(next);
    res.iterations = it;
    if (change < tol) {
      res.converged = true;
      break;
    }
  }
  double total = 0.0;
  for (double s : res.scores) total += s;
  for (double& s : res.scores) s /= total;
  return res;
}

std::vector<double> local_clustering(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);
  for (NodeIndex v = 0; v < n; ++v) {
    const auto& nb = g.neighbors(v);
    const std::size_t deg = nb.size();
    if (deg < 2) continue;
    std::size_t triangles = 0;
    for (auto a = nb.begin(); a != nb.end(); ++a)
      for (auto b = std::next(a); b != nb.end(); ++b)
        if (g.neighbors(a->first).contains(b->first)) ++triangles;
    out[v] = 2.0 * static_cast<double>(triangles) / (static_cast<double>(deg) * static_cast<double>(deg - 1));
  }
  return out;
}

std::vector<double> betweenness(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> cb(n, 0.0);
  std::vector<std::vector<NodeIndex>> pred(n);
  std::vector<double> sigma(n);
  std::vector<long> dist(n);
  std::vector<double> delta(n);
  std::vector<NodeIndex> stack;
  stack.reserve(n);

  for (NodeIndex s = 0; s < n; ++s) {
    if (g.neighbors(s).empty()) continue;
    for (auto& p : pred) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(delta.begin(), delta.end(), 0.0);
    stack.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<NodeIndex> q;
    q.push(s);
    while (!q.empty()) {
      const NodeIndex v = q.front();
      q.pop();
      stack.push_back(v);
      for (const auto& [w, _] : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        }
      }
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      const NodeIndex w = *it;
      for (NodeIndex v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  // Each unordered pair was accumulated from both endpoints.
  for (double& c : cb) c /= 2.0;
  return cb;
}

}  // namespace bothunt::graphs
