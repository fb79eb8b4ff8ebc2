#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bothunt/corpus.hpp"
#include "bothunt/features.hpp"
#include "bothunt/graphs.hpp"

namespace bothunt::detect {

using features::RowMatrix;

class DetectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- NMF ------------------------------------------------------------------

enum class NmfSolver { multiplicative, hals };

struct NmfConfig {
  NmfSolver solver = NmfSolver::multiplicative;
  int rank = 8;
  int max_iter = 500;
  double tol = 1e-6;          // stop on relative objective decrease below this
  double ortho_lambda = 0.0;  // orthogonality penalty on W
  std::uint64_t seed = 7;
};

struct Embedding {
  RowMatrix w;  // rows x rank
  RowMatrix h;  // rank x cols
  double objective = 0.0;               // ||X - WH||_F^2
  std::vector<double> objective_trace;  // objective after init and after every iteration
  int iterations = 0;
};

/// Subtracts each column's minimum so every entry is >= 0.
RowMatrix shift_nonnegative(const RowMatrix& x);

/// Lee-Seung multiplicative updates (or HALS column sweeps) from a seeded
/// uniform positive start. Both are monotone without the orthogonality term;
/// HALS ignores ortho_lambda. Throws DetectError on a bad rank or negative input.
Embedding nmf(const RowMatrix& x, const NmfConfig& cfg);

double reconstruction_error(const RowMatrix& x, const RowMatrix& w, const RowMatrix& h);

// ---- density clustering ---------------------------------------------------

inline constexpr long kNoise = -1;

struct ClusterAssignment {
  std::vector<long> label;  // per row; kNoise or 0..cluster_count-1
  double eps = 0.0;
  int min_pts = 0;
  long cluster_count = 0;

  std::size_t noise_count() const;
  std::vector<std::size_t> cluster_sizes() const;
};

/// Rows within `eps` (inclusive, self included) are neighbours; a row with at
/// least `min_pts` neighbours is core. Rows scanned in ascending order.
ClusterAssignment dbscan(const RowMatrix& x, double eps, int min_pts);

/// 90th percentile (linear interpolation) of every row's k-th nearest
/// neighbour distance, self excluded. Throws when rows <= k.
double estimate_eps(const RowMatrix& x, int k);

/// estimate_eps floored at kMinEps, so rows that coincide still count as
/// neighbours when most of the k-NN distances are zero.
inline constexpr double kMinEps = 1e-9;
double auto_eps(const RowMatrix& x, int k);

/// Clusters holding fewer than `min_fraction` of all rows become noise;
/// survivors are renumbered in order of first appearance.
ClusterAssignment demote_small_clusters(const ClusterAssignment& c, double min_fraction);

// ---- similarity graph and outliers ----------------------------------------

/// Union of each row's k nearest rows, weight 1/(1+d); equal distances go to
/// the lower row. Throws when k >= rows or k < 1.
graphs::WeightedGraph knn_graph(const RowMatrix& x, int k);

struct OutlierReport {
  std::vector<double> score;         // per row
  std::vector<std::size_t> ranking;  // rows by descending score, ties by row
};

/// Distance to the nearest non-noise cluster centroid; distance to the global
/// centroid when no cluster exists.
OutlierReport outlier_scores(const RowMatrix& x, const ClusterAssignment& clusters);

enum class MicroMethod { knn_louvain, nmf };

struct MicroConfig {
  MicroMethod method = MicroMethod::knn_louvain;
  int knn_k = 5;
  int nmf_rank = 3;
  std::uint64_t seed = 11;
};

/// Groups the given rows among themselves; returns a group id per listed row.
std::vector<long> micro_cluster(const RowMatrix& embedding, const RowMatrix& features,
                                const std::vector<std::size_t>& rows, const MicroConfig& cfg);

// ---- the unsupervised pipeline --------------------------------------------

struct PipelineConfig {
  NmfConfig nmf;
  double eps = 0.0;  // <= 0 means estimate
  int min_pts = 5;
  double small_cluster_fraction = 0.05;
  MicroConfig micro;
};

struct PipelineResult {
  std::vector<UserId> ids;
  Embedding embedding;
  ClusterAssignment raw_clusters;  // straight from dbscan
  ClusterAssignment clusters;      // after small-cluster demotion
  OutlierReport outliers;
  std::vector<UserId> candidates;  // noise after demotion, by descending outlier score
  std::vector<long> micro_group;   // per candidate
  features::ClusterMap cluster_map;  // macro clusters then micro groups, disjoint ids

  double outlier_score(UserId id) const;
  double max_outlier_score() const;
};

PipelineResult run_pipeline(const features::FeatureMatrix& m, const PipelineConfig& cfg);

// ---- suspect ranking -------------------------------------------------------

struct SuspectWeights {
  double cluster = 0.4;
  double outlier = 0.3;
  double similarity = 0.3;
};

struct Suspect {
  UserId user_id = 0;
  double score = 0.0;
  double cluster_bot_fraction = 0.0;
  double outlier = 0.0;  // normalized to [0,1]
  double similarity = 0.0;
};

/// Signed cue set of a row: features with |z| >= threshold, tagged by sign.
std::set<std::string> salient_features(const features::FeatureMatrix& m, std::size_t row,
                                       double threshold = 1.0);

struct SuspectInputs {
  std::set<UserId> known_bots;
  std::set<UserId> known_humans;
  std::set<UserId> guessed;
};

std::vector<Suspect> rank_suspects(const features::FeatureMatrix& m, const features::ClusterMap& clusters,
                                   const std::map<UserId, double>& outlier_score,
                                   const SuspectInputs& labels, const SuspectWeights& weights = {});

}  // namespace bothunt::detect
