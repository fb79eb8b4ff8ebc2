// Acceptance run: one PASS/FAIL line per criterion with its wall time.
// Exits non-zero when any criterion fails or runs past its time limit.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bothunt/corpus.hpp"
#include "bothunt/detect.hpp"
#include "bothunt/features.hpp"
#include "bothunt/graphs.hpp"
#include "bothunt/learn.hpp"
#include "bothunt/oracle.hpp"
#include "bothunt/workbench.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bothunt;
namespace bt = bothunt::testing;

namespace {

// Collects the first few reasons a criterion failed.
class Verdict {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
  }
  bool ok() const { return failures_ == 0; }
  std::string notes() const {
    auto s = notes_.str();
    if (failures_ > 3) s += "; +" + std::to_string(failures_ - 3) + " more";
    return s;
  }
  void info(const std::string& s) { info_ = s; }
  const std::string& info() const { return info_; }

 private:
  int failures_ = 0;
  std::ostringstream notes_;
  std::string info_;
};

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<void(Verdict&)> body;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

bool close_rel(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::max(1.0, std::abs(want));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1: results table -------------------------------------------------------

struct TableRow {
  const char* team;
  int misses, hits;
  double accuracy;
  int speed;
  double final_score;
};

const TableRow kTable[] = {
    {"Sentimetrix", 1, 39, 38.75, 12, 50.75}, {"USC", 0, 39, 39, 6, 45},       {"DESPIC", 7, 39, 37.25, 6, 43.25},
    {"IBM", 4, 39, 38, 5, 43},                {"B. Fusion", 9, 39, 36.75, 5, 41.75}, {"G. Tech", 56, 38, 24, 0, 24},
};

void results_table(Verdict& v) {
  for (const auto& r : kTable) {
    const std::string team = r.team;
    const auto s = oracle::score_from_counts(r.hits, r.misses, r.speed);
    v.expect(s.accuracy == r.accuracy && s.final_score == r.final_score,
             team + " counts give " + fmt(s.accuracy) + "/" + fmt(s.final_score));

    // same row through a live challenge: misses, wait, then the hits
    std::set<UserId> bots;
    for (int i = 1; i <= 39; ++i) bots.insert(static_cast<UserId>(1000 + i));
    oracle::ChallengeState c(bots, 28);
    const int finish_day = r.speed > 0 ? 28 - r.speed : 27;
    for (int i = 0; i < r.misses; ++i) c.submit_guess(static_cast<UserId>(i + 1));
    while (c.current_day() < finish_day) c.advance_day();
    for (int i = 1; i <= r.hits; ++i) c.submit_guess(static_cast<UserId>(1000 + i));
    const auto live = c.scoreboard();
    v.expect(live.accuracy == r.accuracy && live.speed == r.speed && live.final_score == r.final_score,
             team + " live replay gives " + fmt(live.accuracy) + "/" + fmt(live.final_score));
  }
  v.info("6 rows");
}

// ---- 2: hedge -----------------------------------------------------------------

void hedge_closed_form(Verdict& v) {
  const std::vector<double> x = {1, -1, 1, 1, -1, 1, -1, -1, 1, 1};
  const std::vector<std::vector<double>> f = {
      {0.9, 0.1, 0.5}, {0.8, 0.3, 0.5}, {0.7, 0.2, 0.6}, {1.0, 0.0, 0.4}, {0.2, 0.9, 0.5},
      {0.6, 0.6, 0.6}, {0.1, 0.7, 0.3}, {0.4, 0.25, 0.8}, {0.95, 0.05, 0.35}, {0.55, 0.45, 0.15}};
  auto s = learn::hedge_init({"a", "b", "c"});
  for (std::size_t t = 0; t < x.size(); ++t) learn::hedge_update(s, static_cast<UserId>(t + 1), x[t], f[t]);
  double worst = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    long double sum = 0;
    for (std::size_t t = 0; t < x.size(); ++t) sum += static_cast<long double>(x[t]) * f[t][j];
    const double want = static_cast<double>(std::exp(sum));
    worst = std::max(worst, std::abs(s.weights[j] - want) / want);
  }
  v.expect(worst < 1e-12, "relative weight error " + fmt(worst));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<UserId, std::vector<double>> table;
  std::vector<UserId> ids;
  for (UserId id = 1; id <= 200; ++id) {
    table[id] = {u(rng), u(rng), u(rng)};
    ids.push_back(id);
  }
  auto scaled = s;
  for (auto& w : scaled.weights) w *= 1e6;
  v.expect(learn::hedge_select(s, ids, table) == learn::hedge_select(scaled, ids, table),
           "selection changed under rescale");
  v.info("max rel error " + fmt(worst));
}

// ---- 3: dbscan ------------------------------------------------------------------

void dbscan_reference(Verdict& v) {
  int matched = 0;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + seed));
    const auto x = bt::blobs_with_noise(rng, 100, 5);
    const double eps = 1.2 + 0.05 * seed;
    const int min_pts = 3 + seed % 4;
    const auto got = detect::dbscan(x, eps, min_pts);
    const auto want = bt::reference_dbscan(x, eps, min_pts);
    const bool same = bt::canonical(got.label) == bt::canonical(want);
    v.expect(same, "instance " + std::to_string(seed) + " differs");
    matched += same;
  }
  v.info(std::to_string(matched) + "/20 instances match");
}

// ---- 4: nmf -------------------------------------------------------------------------

void nmf_checks(Verdict& v) {
  int monotone = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    std::mt19937_64 rng(seed);
    const auto x = bt::uniform_matrix(rng, 30, 20, 0.0, 1.0);
    detect::NmfConfig cfg;
    cfg.rank = 5;
    cfg.max_iter = 200;
    cfg.seed = seed;
    const auto e = detect::nmf(x, cfg);
    bool ok = e.objective_trace.size() >= 2;
    for (std::size_t t = 1; t < e.objective_trace.size(); ++t)
      ok = ok && e.objective_trace[t] <= e.objective_trace[t - 1];
    v.expect(ok, "objective rose for seed " + std::to_string(seed));
    monotone += ok;
  }

  std::mt19937_64 rng(99);
  const auto w0 = bt::uniform_matrix(rng, 30, 3, 0.0, 1.0);
  const auto h0 = bt::uniform_matrix(rng, 3, 20, 0.0, 1.0);
  const bt::RowMatrix x = w0 * h0;
  detect::NmfConfig cfg;
  cfg.rank = 3;
  cfg.max_iter = 20000;
  cfg.tol = 1e-12;
  const auto e = detect::nmf(x, cfg);
  const double err = (x - e.w * e.h).norm() / x.norm();
  v.expect(err < 1e-6, "planted rank error " + fmt(err));
  v.info(std::to_string(monotone) + "/50 monotone, planted rel error " + fmt(err));
}

// ---- 5: centrality ---------------------------------------------------------------------

void centrality(Verdict& v) {
  std::mt19937_64 rng(7);
  double worst_pr = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = bt::random_digraph(rng, 50, 0.04 + 0.01 * trial);
    const auto r = graphs::pagerank(g);
    const auto want = bt::dense_pagerank(g, 0.85);
    double sum = 0.0;
    for (double s : r.scores) sum += s;
    v.expect(std::abs(sum - 1.0) <= 1e-9, "pagerank sum " + fmt(sum));
    for (std::size_t i = 0; i < want.size(); ++i) worst_pr = std::max(worst_pr, std::abs(r.scores[i] - want[i]));
  }
  v.expect(worst_pr < 1e-8, "pagerank deviation " + fmt(worst_pr));

  std::mt19937_64 brng(12);
  double worst_cb = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial % 9);
    const auto g = bt::random_graph(brng, n, 0.25 + 0.02 * trial);
    const auto got = graphs::betweenness(g);
    const auto want = bt::enumerated_betweenness(g);
    for (std::size_t i = 0; i < n; ++i) {
      v.expect(close_rel(got[i], want[i], 1e-12), "betweenness off on graph " + std::to_string(trial));
      worst_cb = std::max(worst_cb, std::abs(got[i] - want[i]));
    }
  }
  v.info("pagerank max dev " + fmt(worst_pr) + ", betweenness max dev " + fmt(worst_cb));
}

// ---- 6: louvain ------------------------------------------------------------------------

void louvain_checks(Verdict& v) {
  const auto g = bt::two_cliques();
  const auto c = graphs::louvain(g);
  bool split = c.community_count() == 2 && c.community[0] != c.community[10];
  for (graphs::NodeIndex u = 0; u < 20; ++u) split = split && c.community[u] == c.community[u < 10 ? 0 : 10];
  v.expect(split, "cliques not recovered");

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = graphs::louvain(bt::random_graph(rng, 60, 0.08));
    for (std::size_t i = 1; i < r.pass_modularity.size(); ++i)
      v.expect(r.pass_modularity[i] >= r.pass_modularity[i - 1], "Q dropped on graph " + std::to_string(trial));
  }
  v.info("Q " + fmt(c.modularity) + " on the cliques");
}

// ---- 7: entropy -------------------------------------------------------------------------

void entropy_checks(Verdict& v) {
  std::vector<Timestamp> cadence;
  for (int i = 0; i < 50; ++i) cadence.push_back(1000 + 60 * i);
  v.expect(features::inter_tweet_entropy_bits(cadence) == 0.0, "cadence entropy non-zero");

  std::mt19937_64 rng(77);
  int same = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto times = bt::random_times(rng);
    const bool eq = features::inter_tweet_entropy_bits(times) == bt::histogram_entropy(times);
    v.expect(eq, "histogram mismatch on trial " + std::to_string(trial));
    same += eq;
  }
  v.info(std::to_string(same) + "/200 match the histogram");
}

// ---- 8 and 9: campaign, determinism -----------------------------------------------------------

workbench::CampaignReport run_campaign(const Dataset& ds, const GroundTruth& truth) {
  workbench::Session s(ds, {}, truth);
  s.attach_oracle(oracle::create_challenge(truth, ds.duration_days));
  return s.campaign_auto(workbench::CampaignConfig{});
}

void campaign(Verdict& v) {
  const auto& [ds, truth] = bt::default_challenge();
  const auto r = run_campaign(ds, truth);
  const auto& sb = r.scoreboard;
  v.expect(sb.hits == 39, "hits " + std::to_string(sb.hits));
  v.expect(sb.misses <= 10, "misses " + std::to_string(sb.misses));
  v.expect(sb.speed > 0, "speed 0");
  v.expect(sb.guesses <= 120, "over budget");
  v.expect(r.candidate_recall == 1.0, "candidate recall " + fmt(r.candidate_recall));
  v.expect(run_campaign(ds, truth).ledger == r.ledger, "second run differs");
  v.info("hits " + std::to_string(sb.hits) + ", misses " + std::to_string(sb.misses) + ", speed " +
         std::to_string(sb.speed) + ", final " + fmt(sb.final_score) + ", recall " + fmt(r.candidate_recall));
}

void determinism(Verdict& v) {
  const char* files[] = {"accounts.jsonl", "tweets.jsonl", "network.csv", "meta.json"};
  GeneratorConfig cfg;
  const auto a = generate_challenge(cfg, cfg.seed);
  const auto b = generate_challenge(cfg, cfg.seed);
  bt::TempDir dir("acceptance");
  write_dataset(a.first, dir.path() / "a");
  write_dataset(b.first, dir.path() / "b");
  for (const char* f : files)
    v.expect(slurp(dir.path() / "a" / f) == slurp(dir.path() / "b" / f), std::string("regenerated ") + f + " differs");
  v.expect(a.second == b.second, "ground truth differs");

  const auto back = load_dataset(dir.path() / "a");
  v.expect(back == a.first, "loaded dataset differs");
  write_dataset(back, dir.path() / "c");
  for (const char* f : files)
    v.expect(slurp(dir.path() / "a" / f) == slurp(dir.path() / "c" / f), std::string("rewritten ") + f + " differs");
  write_ground_truth(a.second, dir.path() / "truth.json");
  const auto truth = load_ground_truth(dir.path() / "truth.json");
  v.expect(truth == a.second, "ground truth round-trip differs");

  // a campaign over the reloaded copy, its ledger saved and replayed
  const auto r = run_campaign(back, truth);
  oracle::LedgerFile lf{back.duration_days, truth.bot_ids.size(), r.ledger};
  oracle::save_ledger(lf, dir.path() / "ledger.json");
  const auto loaded = oracle::load_ledger(dir.path() / "ledger.json");
  v.expect(loaded.guesses == r.ledger, "ledger round-trip differs");
  v.expect(oracle::replay(loaded.guesses, loaded.bot_count, loaded.duration_days) == r.scoreboard,
           "replayed scoreboard differs");
  v.info(std::to_string(a.first.tweets.size()) + " tweets, " + std::to_string(r.ledger.size()) + " guesses replayed");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"results table scores", 1, results_table},
      {"hedge closed form and scale invariance", 1, hedge_closed_form},
      {"dbscan matches brute force", 5, dbscan_reference},
      {"nmf monotone and planted rank", 30, nmf_checks},
      {"pagerank and betweenness oracles", 10, centrality},
      {"louvain monotone and planted cliques", 1, louvain_checks},
      {"inter-tweet entropy", 1, entropy_checks},
      {"end-to-end campaign", 120, campaign},
      {"determinism and round-trip", 120, determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.expect(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.expect(secs < c.limit_seconds, "took longer than " + fmt(c.limit_seconds) + " s");
    const bool ok = v.ok();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << c.name << "  (" << std::fixed
              << std::setprecision(3) << secs << " s)" << std::defaultfloat;
    if (!v.info().empty()) std::cout << "  " << v.info();
    if (!ok) std::cout << "  -- " << v.notes();
    std::cout << "\n";
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
