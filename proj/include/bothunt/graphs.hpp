#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bothunt/corpus.hpp"

namespace bothunt::graphs {

using NodeIndex = std::size_t;

/// Undirected weighted graph over dense node indices. Parallel insertions of
/// the same pair accumulate weight; self-loops are rejected.
class WeightedGraph {
 public:
  struct Edge {
    NodeIndex u;
    NodeIndex v;
    double weight;
  };

  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t node_count) : adjacency_(node_count) {}

  std::size_t node_count() const { return adjacency_.size(); }
  NodeIndex add_node();
  void add_edge(NodeIndex u, NodeIndex v, double weight);
  double weight(NodeIndex u, NodeIndex v) const;
  const std::map<NodeIndex, double>& neighbors(NodeIndex u) const { return adjacency_[u]; }
  /// Edges with u < v, sorted.
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;
  double total_weight() const;
  double strength(NodeIndex u) const;

 private:
  std::vector<std::map<NodeIndex, double>> adjacency_;
};

/// Directed weighted graph; node i corresponds to `ids[i]` when built from
/// user data.
class DiGraph {
 public:
  DiGraph() = default;
  explicit DiGraph(std::size_t node_count) : out_(node_count) {}

  std::size_t node_count() const { return out_.size(); }
  void add_arc(NodeIndex from, NodeIndex to, double weight);
  double weight(NodeIndex from, NodeIndex to) const;
  const std::map<NodeIndex, double>& out_arcs(NodeIndex u) const { return out_[u]; }
  std::size_t arc_count() const;
  /// Symmetrized simple graph (weights summed over both directions).
  WeightedGraph undirected() const;

 private:
  std::vector<std::map<NodeIndex, double>> out_;
};

struct HashtagGraph {
  WeightedGraph graph;
  std::vector<std::string> tags;  // node index -> case-folded tag
  std::unordered_map<std::string, NodeIndex> index;
};

HashtagGraph hashtag_cooccurrence(const std::vector<Tweet>& tweets);

/// Seeds plus every tag adjacent to a seed with weight >= min_weight.
std::set<std::string> expand_keywords(const HashtagGraph& g, const std::set<std::string>& seeds,
                                      double min_weight);

enum class InteractionKind { retweet, mention };

struct UserGraph {
  DiGraph graph;
  std::vector<UserId> ids;  // node index -> user id (ascending)
  std::unordered_map<UserId, NodeIndex> index;
};

/// Arc u->v weighted by how often u retweeted (or mentioned) v. Every id in
/// `nodes` gets a node even without interactions; mentions resolve through
/// the dataset's screen names.
UserGraph interaction_graph(const Dataset& ds, InteractionKind kind,
                            const std::vector<UserId>& nodes);

struct PageRankResult {
  std::vector<double> scores;
  int iterations = 0;
  bool converged = false;
};

PageRankResult pagerank(const DiGraph& g, double damping = 0.85, double tol = 1e-10,
                        int max_iter = 200);

std::vector<double> local_clustering(const WeightedGraph& g);

/// Unweighted, unnormalized Brandes betweenness on an undirected graph.
std::vector<double> betweenness(const WeightedGraph& g);

struct CommunityAssignment {
  std::vector<std::size_t> community;  // node -> community id (0..k-1)
  double modularity = 0.0;
  std::vector<double> pass_modularity;  // Q after each aggregation level

  std::size_t community_count() const;
};

double modularity(const WeightedGraph& g, const std::vector<std::size_t>& community);

CommunityAssignment louvain(const WeightedGraph& g);

/// `src dst weight` lines for debugging.
std::string to_edge_list(const WeightedGraph& g, const std::vector<std::string>& labels);
std::string to_edge_list(const DiGraph& g, const std::vector<std::string>& labels);

}  // namespace bothunt::graphs
