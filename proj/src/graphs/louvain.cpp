#include <algorithm>
#include <map>
#include <numeric>

#include "bothunt/graphs.hpp"

namespace bothunt::graphs {

namespace {

// Working graph for one aggregation level. Self-loop weight counts once
// toward the total edge weight and twice toward the node's degree.
struct Level {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // ascending, no self
  std::vector<double> self_loop;
  std::vector<double> degree;
  double total = 0.0;  // m

  std::size_t size() const { return adj.size(); }
};

Level from_graph(const WeightedGraph& g) {
  Level lv;
  const std::size_t n = g.node_count();
  lv.adj.resize(n);
  lv.self_loop.assign(n, 0.0);
  lv.degree.assign(n, 0.0);
  for (NodeIndex u = 0; u < n; ++u)
    for (const auto& [v, w] : g.neighbors(u)) {
      lv.adj[u].emplace_back(v, w);
      lv.degree[u] += w;
    }
  lv.total = g.total_weight();
  return lv;
}

double level_modularity(const Level& lv, const std::vector<std::size_t>& comm) {
  if (lv.total <= 0.0) return 0.0;
  const double m2 = 2.0 * lv.total;
  const std::size_t k = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end()) + 1;
  std::vector<double> in(k, 0.0), tot(k, 0.0);
  for (std::size_t u = 0; u < lv.size(); ++u) {
    tot[comm[u]] += lv.degree[u];
    in[comm[u]] += 2.0 * lv.self_loop[u];
    for (const auto& [v, w] : lv.adj[u])
      if (comm[v] == comm[u]) in[comm[u]] += w;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) q += in[c] / m2 - (tot[c] / m2) * (tot[c] / m2);
  return q;
}

// Local moving phase. Returns true when at least one node changed community.
bool move_nodes(const Level& lv, std::vector<std::size_t>& comm) {
  const std::size_t n = lv.size();
  const double m = lv.total;
  std::vector<double> tot(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) tot[comm[u]] += lv.degree[u];

  bool any = false;
  std::map<std::size_t, double> links;  // community -> weight from the node
  while (true) {
    bool moved = false;
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t home = comm[u];
      links.clear();
      links[home] = 0.0;
      for (const auto& [v, w] : lv.adj[u]) links[comm[v]] += w;

      tot[home] -= lv.degree[u];
      const double ku = lv.degree[u];
      auto gain = [&](std::size_t c, double k_in) { return k_in / m - tot[c] * ku / (2.0 * m * m); };

      std::size_t best = home;
      double best_gain = gain(home, links[home]);
      for (const auto& [c, k_in] : links) {
        const double g = gain(c, k_in);
        if (g > best_gain + 1e-12) {
          best = c;
          best_gain = g;
        }
      }
      tot[best] += ku;
      if (best != home) {
        comm[u] = best;
        moved = true;
        any = true;
      }
    }
    if (!moved) break;
  }
  return any;
}

std::vector<std::size_t> renumber(std::vector<std::size_t> comm) {
  std::map<std::size_t, std::size_t> remap;
  for (auto& c : comm) {
    auto [it, _] = remap.emplace(c, remap.size());
    c = it->second;
  }
  return comm;
}

Level aggregate(const Level& lv, const std::vector<std::size_t>& comm, std::size_t k) {
  Level next;
  next.adj.resize(k);
  next.self_loop.assign(k, 0.0);
  next.degree.assign(k, 0.0);
  next.total = lv.total;
  std::vector<std::map<std::size_t, double>> acc(k);
  for (std::size_t u = 0; u < lv.size(); ++u) {
    const auto cu = comm[u];
    next.self_loop[cu] += lv.self_loop[u];
    next.degree[cu] += lv.degree[u];
    for (const auto& [v, w] : lv.adj[u]) {
      const auto cv = comm[v];
      if (cu == cv) {
        if (u < v) next.self_loop[cu] += w;
      } else {
        acc[cu][cv] += w;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) next.adj[c].assign(acc[c].begin(), acc[c].end());
  return next;
}

}  // namespace

std::size_t CommunityAssignment::community_count() const {
  return community.empty() ? 0 : *std::max_element(community.begin(), community.end()) + 1;
}

double modularity(const WeightedGraph& g, const std::vector<std::size_t>& community) {
  return level_modularity(from_graph(g), community);
}

CommunityAssignment louvain(const WeightedGraph& g) {
  CommunityAssignment out;
  const std::size_t n = g.node_count();
  out.community.resize(n);
  std::iota(out.community.begin(), out.community.end(), std::size_t{0});
  if (n == 0) return out;

  Level lv = from_graph(g);
  out.modularity = level_modularity(lv, out.community);
  out.pass_modularity.push_back(out.modularity);
  if (lv.total <= 0.0) return out;

  while (true) {
    std::vector<std::size_t> comm(lv.size());
    std::iota(comm.begin(), comm.end(), std::size_t{0});
    if (!move_nodes(lv, comm)) break;
    comm = renumber(std::move(comm));
    const std::size_t k = *std::max_element(comm.begin(), comm.end()) + 1;
    for (auto& c : out.community) c = comm[c];
    out.modularity = modularity(g, out.community);
    out.pass_modularity.push_back(out.modularity);
    if (k == lv.size()) break;
    lv = aggregate(lv, comm, k);
  }
  out.community = renumber(std::move(out.community));
  return out;
}

}  // namespace bothunt::graphs
