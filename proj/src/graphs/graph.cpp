#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "bothunt/graphs.hpp"
#include "bothunt/text.hpp"

namespace bothunt::graphs {

NodeIndex WeightedGraph::add_node() {
  adjacency_.emplace_back();
  return adjacency_.size() - 1;
}

void WeightedGraph::add_edge(NodeIndex u, NodeIndex v, double weight) {
  if (u == v) throw std::invalid_argument("self-loops are not allowed");
  if (!(weight > 0.0)) throw std::invalid_argument("edge weights must be positive");
  if (u >= node_count() || v >= node_count()) throw std::out_of_range("edge endpoint out of range");
  adjacency_[u][v] += weight;
  adjacency_[v][u] += weight;
}

double WeightedGraph::weight(NodeIndex u, NodeIndex v) const {
  auto it = adjacency_[u].find(v);
  return it == adjacency_[u].end() ? 0.0 : it->second;
}

std::vector<WeightedGraph::Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  for (NodeIndex u = 0; u < node_count(); ++u)
    for (const auto& [v, w] : adjacency_[u])
      if (u < v) out.push_back({u, v, w});
  return out;
}

std::size_t WeightedGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& adj : adjacency_) n += adj.size();
  return n / 2;
}

double WeightedGraph::total_weight() const {
  double w = 0.0;
  for (const auto& e : edges()) w += e.weight;
  return w;
}

double WeightedGraph::strength(NodeIndex u) const {
  double s = 0.0;
  for (const auto& [_, w] : adjacency_[u]) s += w;
  return s;
}

void DiGraph::add_arc(NodeIndex from, NodeIndex to, double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("arc weights must be positive");
  if (from >= node_count() || to >= node_count()) throw std::out_of_range("arc endpoint out of range");
  out_[from][to] += weight;
}

double DiGraph::weight(NodeIndex from, NodeIndex to) const {
  auto it = out_[from].find(to);
  return it == out_[from].end() ? 0.0 : it->second;
}

std::size_t DiGraph::arc_count() const {
  std::size_t n = 0;
  for (const auto& adj : out_) n += adj.size();
  return n;
}

WeightedGraph DiGraph::undirected() const {
  WeightedGraph g(node_count());
  for (NodeIndex u = 0; u < node_count(); ++u)
    for (const auto& [v, w] : out_[u])
      if (u != v) g.add_edge(u, v, w);
  return g;
}

HashtagGraph hashtag_cooccurrence(const std::vector<Tweet>& tweets) {
  std::vector<std::vector<std::string>> per_tweet;
  per_tweet.reserve(tweets.size());
  std::set<std::string> all;
  for (const auto& t : tweets) {
    std::set<std::string> tags;
    for (const auto& h : t.hashtags) {
      auto tag = text::to_lower(h);
      if (!tag.empty() && tag[0] == '#') tag.erase(0, 1);
      if (!tag.empty()) tags.insert(tag);
    }
    all.insert(tags.begin(), tags.end());
    per_tweet.emplace_back(tags.begin(), tags.end());
  }

  HashtagGraph out;
  out.tags.assign(all.begin(), all.end());
  out.graph = WeightedGraph(out.tags.size());
  for (NodeIndex i = 0; i < out.tags.size(); ++i) out.index.emplace(out.tags[i], i);
  for (const auto& tags : per_tweet)
    for (std::size_t a = 0; a < tags.size(); ++a)
      for (std::size_t b = a + 1; b < tags.size(); ++b)
        out.graph.add_edge(out.index.at(tags[a]), out.index.at(tags[b]), 1.0);
  return out;
}

std::set<std::string> expand_keywords(const HashtagGraph& g, const std::set<std::string>& seeds,
                                      double min_weight) {
  std::set<std::string> out = seeds;
  for (const auto& seed : seeds) {
    auto it = g.index.find(seed);
    if (it == g.index.end()) continue;
    for (const auto& [v, w] : g.graph.neighbors(it->second))
      if (w >= min_weight) out.insert(g.tags[v]);
  }
  return out;
}

UserGraph interaction_graph(const Dataset& ds, InteractionKind kind, const std::vector<UserId>& nodes) {
  UserGraph out;
  out.ids = nodes;
  std::sort(out.ids.begin(), out.ids.end());
  out.ids.erase(std::unique(out.ids.begin(), out.ids.end()), out.ids.end());
  out.graph = DiGraph(out.ids.size());
  for (NodeIndex i = 0; i < out.ids.size(); ++i) out.index.emplace(out.ids[i], i);

  auto arc = [&](UserId from, UserId to) {
    if (from == to) return;
    auto a = out.index.find(from);
    auto b = out.index.find(to);
    if (a != out.index.end() && b != out.index.end()) out.graph.add_arc(a->second, b->second, 1.0);
  };
  for (const auto& t : ds.tweets) {
    if (kind == InteractionKind::retweet) {
      if (t.retweet_of) arc(t.user_id, *t.retweet_of);
    } else {
      for (const auto& name : t.mentions)
        if (auto target = ds.find_by_screen_name(name)) arc(t.user_id, *target);
    }
  }
  return out;
}

std::string to_edge_list(const WeightedGraph& g, const std::vector<std::string>& labels) {
  std::ostringstream os;
  for (const auto& e : g.edges()) os << labels.at(e.u) << ' ' << labels.at(e.v) << ' ' << e.weight << '\n';
  return os.str();
}

std::string to_edge_list(const DiGraph& g, const std::vector<std::string>& labels) {
  std::ostringstream os;
  for (NodeIndex u = 0; u < g.node_count(); ++u)
    for (const auto& [v, w] : g.out_arcs(u)) os << labels.at(u) << ' ' << labels.at(v) << ' ' << w << '\n';
  return os.str();
}

}  // namespace bothunt::graphs
