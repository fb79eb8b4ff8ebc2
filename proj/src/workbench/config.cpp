#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bothunt/workbench.hpp"

namespace bothunt::workbench {

namespace {

using json = nlohmann::json;

// Reads the listed keys from `j` into their targets; any other key is an
// error so a misspelt option never silently falls back to its default.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw WorkbenchError("config: " + where_ + " must be an object");
  }

  template <typename T>
  Reader& opt(const char* key, T& target) {
    seen_.insert(key);
    if (j_.contains(key)) {
      try {
        target = j_.at(key).get<T>();
      } catch (const json::exception&) {
        throw WorkbenchError("config: bad value for " + where_ + "." + key);
      }
    }
    return *this;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void done() const {
    for (const auto& [k, _] : j_.items())
      if (!seen_.contains(k)) throw WorkbenchError("config: unknown key " + where_ + "." + k);
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

}  // namespace

SessionConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw WorkbenchError(std::string("config: ") + e.what());
  }
  SessionConfig cfg;
  Reader top(root, "config");

  if (const auto* f = top.child("features")) {
    std::vector<Timestamp> breaks{cfg.features.session_breaks[0], cfg.features.session_breaks[1]};
    Reader r(*f, "features");
    r.opt("session_breaks", breaks)
        .opt("flipflop_dead_zone", cfg.features.flipflop_dead_zone)
        .opt("snr_epsilon", cfg.features.snr_epsilon)
        .opt("snapshot_interval_days", cfg.features.snapshot_interval_days)
        .opt("keyword_min_weight", cfg.features.keyword_min_weight)
        .done();
    if (breaks.size() != 2) throw WorkbenchError("config: features.session_breaks needs two entries");
    cfg.features.session_breaks = {breaks[0], breaks[1]};
    if (cfg.features.snapshot_interval_days < 1) throw WorkbenchError("config: snapshot_interval_days must be >= 1");
  }
  if (const auto* d = top.child("detect")) {
    Reader r(*d, "detect");
    auto& dc = cfg.detect;
    r.opt("eps", dc.eps).opt("min_pts", dc.min_pts).opt("small_cluster_fraction", dc.small_cluster_fraction);
    if (const auto* n = r.child("nmf")) {
      std::string solver = dc.nmf.solver == detect::NmfSolver::hals ? "hals" : "multiplicative";
      Reader rn(*n, "detect.nmf");
      rn.opt("solver", solver)
          .opt("rank", dc.nmf.rank)
          .opt("max_iter", dc.nmf.max_iter)
          .opt("tol", dc.nmf.tol)
          .opt("ortho_lambda", dc.nmf.ortho_lambda)
          .opt("seed", dc.nmf.seed)
          .done();
      if (solver == "hals")
        dc.nmf.solver = detect::NmfSolver::hals;
      else if (solver == "multiplicative")
        dc.nmf.solver = detect::NmfSolver::multiplicative;
      else
        throw WorkbenchError("config: detect.nmf.solver must be multiplicative or hals");
    }
    if (const auto* m = r.child("micro")) {
      std::string method = dc.micro.method == detect::MicroMethod::nmf ? "nmf" : "knn_louvain";
      Reader rm(*m, "detect.micro");
      rm.opt("method", method).opt("knn_k", dc.micro.knn_k).opt("nmf_rank", dc.micro.nmf_rank).opt("seed", dc.micro.seed).done();
      if (method == "nmf")
        dc.micro.method = detect::MicroMethod::nmf;
      else if (method == "knn_louvain")
        dc.micro.method = detect::MicroMethod::knn_louvain;
      else
        throw WorkbenchError("config: detect.micro.method must be knn_louvain or nmf");
    }
    r.done();
  }
  if (const auto* w = top.child("weights")) {
    Reader(*w, "weights")
        .opt("cluster", cfg.weights.cluster)
        .opt("outlier", cfg.weights.outlier)
        .opt("similarity", cfg.weights.similarity)
        .done();
  }
  if (const auto* l = top.child("linear")) {
    Reader(*l, "linear")
        .opt("epochs", cfg.linear.epochs)
        .opt("lambda", cfg.linear.lambda)
        .opt("balance_classes", cfg.linear.balance_classes)
        .opt("seed", cfg.linear.seed)
        .done();
  }
  if (const auto* c = top.child("campaign")) {
    auto& cc = cfg.campaign;
    Reader(*c, "campaign")
        .opt("budget", cc.budget)
        .opt("auto_analyst", cc.auto_analyst)
        .opt("noise", cc.noise)
        .opt("train_bots", cc.train_bots)
        .opt("train_humans", cc.train_humans)
        .opt("initial_review", cc.initial_review)
        .opt("human_sample", cc.human_sample)
        .opt("review_per_day", cc.review_per_day)
        .opt("guesses_per_day", cc.guesses_per_day)
        .opt("candidate_pool", cc.candidate_pool)
        .opt("hit_feedback", cc.hit_feedback)
        .opt("miss_feedback", cc.miss_feedback)
        .opt("seed", cc.seed)
        .done();
    if (cc.noise < 0.0 || cc.noise > 1.0) throw WorkbenchError("config: campaign.noise must lie in [0,1]");
  }
  std::string dir;
  top.opt("session_dir", dir);
  if (!dir.empty()) cfg.session_dir = dir;
  top.done();
  return cfg;
}

std::string config_to_json(const SessionConfig& cfg) {
  nlohmann::ordered_json j;
  const auto& f = cfg.features;
  j["features"] = {{"session_breaks", {f.session_breaks[0], f.session_breaks[1]}},
                   {"flipflop_dead_zone", f.flipflop_dead_zone},
                   {"snr_epsilon", f.snr_epsilon},
                   {"snapshot_interval_days", f.snapshot_interval_days},
                   {"keyword_min_weight", f.keyword_min_weight}};
  const auto& d = cfg.detect;
  j["detect"] = {
      {"nmf",
       {{"solver", d.nmf.solver == detect::NmfSolver::hals ? "hals" : "multiplicative"},
        {"rank", d.nmf.rank},
        {"max_iter", d.nmf.max_iter},
        {"tol", d.nmf.tol},
        {"ortho_lambda", d.nmf.ortho_lambda},
        {"seed", d.nmf.seed}}},
      {"eps", d.eps},
      {"min_pts", d.min_pts},
      {"small_cluster_fraction", d.small_cluster_fraction},
      {"micro",
       {{"method", d.micro.method == detect::MicroMethod::nmf ? "nmf" : "knn_louvain"},
        {"knn_k", d.micro.knn_k},
        {"nmf_rank", d.micro.nmf_rank},
        {"seed", d.micro.seed}}}};
  j["weights"] = {{"cluster", cfg.weights.cluster}, {"outlier", cfg.weights.outlier}, {"similarity", cfg.weights.similarity}};
  j["linear"] = {{"epochs", cfg.linear.epochs},
                 {"lambda", cfg.linear.lambda},
                 {"balance_classes", cfg.linear.balance_classes},
                 {"seed", cfg.linear.seed}};
  const auto& c = cfg.campaign;
  j["campaign"] = {{"budget", c.budget},
                   {"auto_analyst", c.auto_analyst},
                   {"noise", c.noise},
                   {"train_bots", c.train_bots},
                   {"train_humans", c.train_humans},
                   {"initial_review", c.initial_review},
                   {"human_sample", c.human_sample},
                   {"review_per_day", c.review_per_day},
                   {"guesses_per_day", c.guesses_per_day},
                   {"candidate_pool", c.candidate_pool},
                   {"hit_feedback", c.hit_feedback},
                   {"miss_feedback", c.miss_feedback},
                   {"seed", c.seed}};
  if (cfg.session_dir) j["session_dir"] = cfg.session_dir->string();
  return j.dump(2);
}

SessionConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw WorkbenchError("cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace bothunt::workbench
