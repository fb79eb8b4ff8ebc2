#include <cmath>
#include <limits>

#include "bothunt/detect.hpp"
#include "bothunt/random.hpp"

namespace bothunt::detect {

RowMatrix shift_nonnegative(const RowMatrix& x) {
  RowMatrix out = x;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (out.rows() == 0) break;
    out.col(j).array() -= out.col(j).minCoeff();
  }
  return out;
}

double reconstruction_error(const RowMatrix& x, const RowMatrix& w, const RowMatrix& h) {
  return (x - w * h).squaredNorm();
}

namespace {
constexpr double kTiny = std::numeric_limits<double>::min();

// elementwise a <- a * num / den, guarding exact zeros in den
void multiplicative_step(RowMatrix& a, const RowMatrix& num, const RowMatrix& den) {
  a.array() *= num.array() / den.array().max(kTiny);
}
// One HALS sweep over the rows of `h` (rank x cols) given the Gram matrix
// `g` = WᵀW and `p` = WᵀX. Each row is the exact nonnegative minimizer with
// the others held fixed.
void hals_sweep(RowMatrix& h, const RowMatrix& g, const RowMatrix& p) {
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    if (g(k, k) <= 0.0) continue;
    const Eigen::RowVectorXd grad = p.row(k) - g.row(k) * h;
    h.row(k) = (h.row(k) + grad / g(k, k)).cwiseMax(0.0);
  }
}
}  // namespace

Embedding nmf(const RowMatrix& x, const NmfConfig& cfg) {
  const auto n = x.rows();
  const auto d = x.cols();
  if (cfg.rank < 1 || cfg.rank > std::min(n, d))
    throw DetectError("nmf rank " + std::to_string(cfg.rank) + " outside [1, " +
                      std::to_string(std::min(n, d)) + "]");
  if ((x.array() < 0.0).any()) throw DetectError("nmf input has negative entries; shift it first");

  Rng rng(cfg.seed);
  const double scale = std::sqrt(std::max(x.mean(), 1e-12) / cfg.rank);
  Embedding e;
  e.w.resize(n, cfg.rank);
  e.h.resize(cfg.rank, d);
  for (Eigen::Index i = 0; i < e.w.size(); ++i) e.w.data()[i] = scale * rng.uniform(0.01, 1.0);
  for (Eigen::Index i = 0; i < e.h.size(); ++i) e.h.data()[i] = scale * rng.uniform(0.01, 1.0);

  double prev = reconstruction_error(x, e.w, e.h);
  e.objective_trace.push_back(prev);
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (cfg.solver == NmfSolver::hals) {
      const RowMatrix wt = e.w.transpose();
      hals_sweep(e.h, wt * e.w, wt * x);
      // W sweep runs on the transposed problem
      RowMatrix wt2 = e.w.transpose();
      hals_sweep(wt2, e.h * e.h.transpose(), e.h * x.transpose());
      e.w = wt2.transpose();
      const double cur = reconstruction_error(x, e.w, e.h);
      e.objective_trace.push_back(cur);
      e.iterations = it + 1;
      const bool done = prev <= 0.0 || (prev - cur) / prev < cfg.tol;
      prev = cur;
      if (done) break;
      continue;
    }
    const RowMatrix wt = e.w.transpose();
    multiplicative_step(e.h, wt * x, (wt * e.w) * e.h);
    const RowMatrix ht = e.h.transpose();
    if (cfg.ortho_lambda > 0.0) {
      const RowMatrix wtw = e.w.transpose() * e.w;
      multiplicative_step(e.w, x * ht + cfg.ortho_lambda * e.w,
                          e.w * (e.h * ht) + cfg.ortho_lambda * (e.w * wtw));
    } else {
      multiplicative_step(e.w, x * ht, e.w * (e.h * ht));
    }
    const double cur = reconstruction_error(x, e.w, e.h);
    e.objective_trace.push_back(cur);
    e.iterations = it + 1;
    const bool done = prev <= 0.0 || (prev - cur) / prev < cfg.tol;
    prev = cur;
    if (done) break;
  }
  e.objective = prev;
  return e;
}

}  // namespace bothunt::detect
