#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "bothunt/detect.hpp"

namespace bothunt::detect {

std::size_t ClusterAssignment::noise_count() const {
  return static_cast<std::size_t>(std::count(label.begin(), label.end(), kNoise));
}

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(cluster_count), 0);
  for (auto l : label)
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

namespace {
std::vector<std::vector<std::size_t>> neighborhoods(const RowMatrix& x, double eps) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::vector<std::size_t>> nb(n);
  const double eps2 = eps * eps;
  for (std::size_t i = 0; i < n; ++i) {
    nb[i].push_back(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if ((x.row(ii) - x.row(jj)).squaredNorm() <= eps2) {
        nb[i].push_back(j);
        nb[j].push_back(i);
      }
    }
  }
  for (auto& v : nb) std::sort(v.begin(), v.end());
  return nb;
}
}  // namespace

ClusterAssignment dbscan(const RowMatrix& x, double eps, int min_pts) {
  if (!(eps > 0.0)) throw DetectError("dbscan eps must be positive");
  if (min_pts < 1) throw DetectError("dbscan min_pts must be at least 1");
  ClusterAssignment out;
  out.eps = eps;
  out.min_pts = min_pts;
  const auto n = static_cast<std::size_t>(x.rows());
  constexpr long kUnvisited = -2;
  out.label.assign(n, kUnvisited);
  const auto nb = neighborhoods(x, eps);
  auto is_core = [&](std::size_t i) { return nb[i].size() >= static_cast<std::size_t>(min_pts); };

  for (std::size_t i = 0; i < n; ++i) {
    if (out.label[i] != kUnvisited) continue;
    if (!is_core(i)) {
      out.label[i] = kNoise;  // may still become a border point later
      continue;
    }
    const long c = out.cluster_count++;
    out.label[i] = c;
    std::deque<std::size_t> queue(nb[i].begin(), nb[i].end());
    while (!queue.empty()) {
      const auto q = queue.front();
      queue.pop_front();
      if (out.label[q] == kNoise) out.label[q] = c;
      if (out.label[q] != kUnvisited) continue;
      out.label[q] = c;
      if (is_core(q)) queue.insert(queue.end(), nb[q].begin(), nb[q].end());
    }
  }
  return out;
}

double estimate_eps(const RowMatrix& x, int k) {
  const auto n = x.rows();
  if (k < 1) throw DetectError("estimate_eps needs k >= 1");
  if (n <= k) throw DetectError("estimate_eps needs more than k rows");
  std::vector<double> kth;
  kth.reserve(static_cast<std::size_t>(n));
  std::vector<double> d;
  for (Eigen::Index i = 0; i < n; ++i) {
    d.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) d.push_back((x.row(i) - x.row(j)).norm());
    std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
    kth.push_back(d[static_cast<std::size_t>(k - 1)]);
  }
  std::sort(kth.begin(), kth.end());
  const double pos = 0.9 * static_cast<double>(kth.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, kth.size() - 1);
  return kth[lo] + (pos - static_cast<double>(lo)) * (kth[hi] - kth[lo]);
}

double auto_eps(const RowMatrix& x, int k) { return std::max(estimate_eps(x, k), kMinEps); }

ClusterAssignment demote_small_clusters(const ClusterAssignment& c, double min_fraction) {
  ClusterAssignment out = c;
  const auto sizes = c.cluster_sizes();
  const double floor = min_fraction * static_cast<double>(c.label.size());
  std::map<long, long> remap;
  for (auto& l : out.label) {
    if (l < 0) continue;
    if (static_cast<double>(sizes[static_cast<std::size_t>(l)]) < floor) {
      l = kNoise;
      continue;
    }
    auto [it, _] = remap.emplace(l, static_cast<long>(remap.size()));
    l = it->second;
  }
  out.cluster_count = static_cast<long>(remap.size());
  return out;
}

}  // namespace bothunt::detect
