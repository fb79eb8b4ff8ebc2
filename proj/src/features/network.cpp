#include "bothunt/features.hpp"

namespace bothunt::features {

NetworkKernels NetworkKernels::build(const Dataset& ds) {
  NetworkKernels k;
  const auto ids = ds.account_ids();
  k.retweet = graphs::interaction_graph(ds, graphs::InteractionKind::retweet, ids);
  k.mention = graphs::interaction_graph(ds, graphs::InteractionKind::mention, ids);

  k.pagerank_retweet = graphs::pagerank(k.retweet.graph).scores;
  k.pagerank_mention = graphs::pagerank(k.mention.graph).scores;
  const auto rt = k.retweet.graph.undirected();
  const auto mn = k.mention.graph.undirected();
  k.betweenness_retweet = graphs::betweenness(rt);
  k.betweenness_mention = graphs::betweenness(mn);
  k.clustering_retweet = graphs::local_clustering(rt);
  k.clustering_mention = graphs::local_clustering(mn);
  k.final_follows = network_snapshot(ds, ds.duration_days);
  return k;
}

NamedValues network_features(UserId user, const NetworkKernels& kernels,
                             const std::set<UserId>& known_bots, const ClusterMap* clusters) {
  NamedValues out;
  auto at = [](const graphs::UserGraph& g, const std::vector<double>& v, UserId id) {
    auto it = g.index.find(id);
    return it == g.index.end() || v.empty() ? 0.0 : v[it->second];
  };
  out.set("pagerank_retweet", at(kernels.retweet, kernels.pagerank_retweet, user));
  out.set("pagerank_mention", at(kernels.mention, kernels.pagerank_mention, user));
  out.set("betweenness_retweet", at(kernels.retweet, kernels.betweenness_retweet, user));
  out.set("betweenness_mention", at(kernels.mention, kernels.betweenness_mention, user));
  out.set("clustering_coeff_retweet", at(kernels.retweet, kernels.clustering_retweet, user));
  out.set("clustering_coeff_mention", at(kernels.mention, kernels.clustering_mention, user));

  double followed = 0;
  if (auto it = kernels.final_follows.out.find(user); it != kernels.final_follows.out.end())
    for (auto target : it->second)
      if (known_bots.contains(target)) followed += 1;
  out.set("known_bots_followed", followed);

  double fraction = 0.0;
  if (clusters) {
    auto mine = clusters->find(user);
    if (mine != clusters->end() && mine->second >= 0) {
      double size = 0, bots = 0;
      for (const auto& [id, c] : *clusters) {
        if (c != mine->second) continue;
        size += 1;
        if (known_bots.contains(id)) bots += 1;
      }
      fraction = bots / size;
    }
  }
  out.set("cluster_bot_fraction", fraction);
  return out;
}

}  // namespace bothunt::features
