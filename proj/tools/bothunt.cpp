// bothunt command line: generate, extract, graph, cluster, outliers, score,
// hunt, serve, validate.
#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bothunt/corpus.hpp"
#include "bothunt/detect.hpp"
#include "bothunt/features.hpp"
#include "bothunt/graphs.hpp"
#include "bothunt/lexicon.hpp"
#include "bothunt/oracle.hpp"
#include "bothunt/workbench.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace bothunt;

namespace {

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SentimentLexicon lexicon_or_builtin(const std::string& path) {
  return path.empty() ? SentimentLexicon::builtin() : SentimentLexicon::load(path);
}

workbench::SessionConfig session_config(const std::string& path) {
  return path.empty() ? workbench::SessionConfig{} : workbench::load_config(path);
}

json scoreboard_json(const oracle::Scoreboard& s) {
  return json::parse(oracle::scoreboard_to_json(s));
}

workbench::Server* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bothunt: synthetic bot challenges, detection pipeline and scoring oracle"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a synthetic challenge");
  std::string gen_config, gen_out, gen_truth;
  std::uint64_t gen_seed = 42;
  std::optional<int> gen_users, gen_bots;
  gen->add_option("--config", gen_config, "generator config (JSON)");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "dataset directory")->required();
  gen->add_option("--truth", gen_truth, "ground truth file (default <out>.ground_truth.json)");
  gen->add_option("--users", gen_users, "override n_users");
  gen->add_option("--bots", gen_bots, "override n_bots");

  // validate
  auto* val = app.add_subcommand("validate", "check a dataset for schema violations");
  std::string val_data;
  val->add_option("--data", val_data, "dataset directory")->required();

  // extract
  auto* ext = app.add_subcommand("extract", "compute the feature matrix");
  std::string ext_data, ext_lexicon, ext_out;
  ext->add_option("--data", ext_data, "dataset directory")->required();
  ext->add_option("--lexicon", ext_lexicon, "sentiment lexicon (default: built in)");
  ext->add_option("--out", ext_out, "features.csv")->required();

  // graph
  auto* gr = app.add_subcommand("graph", "export a graph as an edge list");
  std::string gr_kind = "hashtag", gr_data, gr_out;
  gr->add_option("--kind", gr_kind, "hashtag | retweet | mention")->check(CLI::IsMember({"hashtag", "retweet", "mention"}));
  gr->add_option("--data", gr_data, "dataset directory")->required();
  gr->add_option("--out", gr_out, "edge list file")->required();

  // cluster
  auto* cl = app.add_subcommand("cluster", "NMF embedding + DBSCAN");
  std::string cl_features, cl_eps = "auto", cl_out;
  int cl_min_pts = 5, cl_rank = 8;
  cl->add_option("--features", cl_features, "features.csv")->required();
  cl->add_option("--eps", cl_eps, "'auto' or a positive radius");
  cl->add_option("--min-pts", cl_min_pts, "DBSCAN min_pts");
  cl->add_option("--rank", cl_rank, "NMF rank");
  cl->add_option("--out", cl_out, "clusters.json")->required();

  // outliers
  auto* ol = app.add_subcommand("outliers", "outlier scores and candidate micro-clusters");
  std::string ol_features, ol_out, ol_micro = "knn";
  int ol_rank = 8, ol_min_pts = 5;
  ol->add_option("--features", ol_features, "features.csv")->required();
  ol->add_option("--rank", ol_rank, "NMF rank");
  ol->add_option("--min-pts", ol_min_pts, "DBSCAN min_pts");
  ol->add_option("--micro", ol_micro, "knn | nmf")->check(CLI::IsMember({"knn", "nmf"}));
  ol->add_option("--out", ol_out, "outliers.json")->required();

  // score
  auto* sc = app.add_subcommand("score", "recompute a scoreboard from a guess ledger");
  std::string sc_ledger;
  sc->add_option("--ledger", sc_ledger, "ledger or hunt report JSON")->required();

  // hunt
  auto* hu = app.add_subcommand("hunt", "run a simulated-analyst campaign against the oracle");
  std::string hu_data, hu_truth, hu_out, hu_config, hu_lexicon;
  bool hu_auto = false;
  std::optional<double> hu_noise;
  std::optional<int> hu_budget;
  std::optional<std::uint64_t> hu_seed;
  hu->add_option("--data", hu_data, "dataset directory")->required();
  hu->add_option("--truth", hu_truth, "ground truth file")->required();
  hu->add_flag("--auto", hu_auto, "use the simulated analyst");
  hu->add_option("--noise", hu_noise, "analyst flip probability");
  hu->add_option("--budget", hu_budget, "guess budget");
  hu->add_option("--seed", hu_seed, "campaign seed");
  hu->add_option("--config", hu_config, "session config (JSON)");
  hu->add_option("--lexicon", hu_lexicon, "sentiment lexicon");
  hu->add_option("--out", hu_out, "report.json")->required();

  // serve
  auto* sv = app.add_subcommand("serve", "serve the workbench HTTP API");
  std::string sv_data, sv_truth, sv_bind = "127.0.0.1:8080", sv_config, sv_lexicon;
  bool sv_lazy = false;
  sv->add_option("--data", sv_data, "dataset directory")->required();
  sv->add_option("--truth", sv_truth, "ground truth file (enables guessing)");
  sv->add_option("--bind", sv_bind, "host:port");
  sv->add_option("--config", sv_config, "session config (JSON)");
  sv->add_option("--lexicon", sv_lexicon, "sentiment lexicon");
  sv->add_flag("--lazy", sv_lazy, "skip precomputing the graphs and features stages");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      GeneratorConfig cfg = gen_config.empty() ? GeneratorConfig{} : load_generator_config(gen_config);
      if (gen_users) cfg.n_users = *gen_users;
      if (gen_bots) cfg.n_bots = *gen_bots;
      cfg.seed = gen_seed;
      cfg.validate();
      auto [ds, gt] = generate_challenge(cfg, gen_seed);
      write_dataset(ds, gen_out);
      fs::path out_dir(gen_out);
      const fs::path truth = gen_truth.empty()
                                 ? out_dir.parent_path() / (out_dir.filename().string() + ".ground_truth.json")
                                 : fs::path(gen_truth);
      write_ground_truth(gt, truth);
      std::cout << "wrote " << ds.accounts.size() << " accounts, " << ds.tweets.size() << " tweets, "
                << ds.network_events.size() << " network events to " << gen_out << "\n"
                << "ground truth (" << gt.bot_ids.size() << " bots) in " << truth.string() << "\n";
    } else if (*val) {
      const auto ds = load_dataset(val_data);
      const auto report = validate_dataset(ds);
      if (report.empty()) {
        std::cout << "ok: no violations\n";
        return 0;
      }
      for (const auto& [v, n] : report.counts) std::cout << to_string(v) << ": " << n << "\n";
      for (const auto& s : report.samples) std::cout << "  " << s << "\n";
      return 1;
    } else if (*ext) {
      const auto ds = load_dataset(ext_data);
      const auto lexicon = lexicon_or_builtin(ext_lexicon);
      features::FeatureContext ctx(ds, lexicon);
      const auto m = ctx.assemble({});
      write_text(ext_out, features::to_csv(m));
      std::cout << "wrote " << m.ids.size() << " x " << m.columns.size() << " features to " << ext_out << "\n";
    } else if (*gr) {
      const auto ds = load_dataset(gr_data);
      std::string text;
      if (gr_kind == "hashtag") {
        const auto g = graphs::hashtag_cooccurrence(ds.tweets);
        text = graphs::to_edge_list(g.graph, g.tags);
      } else {
        const auto kind = gr_kind == "retweet" ? graphs::InteractionKind::retweet : graphs::InteractionKind::mention;
        const auto g = graphs::interaction_graph(ds, kind, ds.account_ids());
        std::vector<std::string> labels;
        for (auto id : g.ids) labels.push_back(std::to_string(id));
        text = graphs::to_edge_list(g.graph, labels);
      }
      write_text(gr_out, text);
      std::cout << "wrote " << gr_kind << " graph to " << gr_out << "\n";
    } else if (*cl) {
      const auto m = features::from_csv(read_text(cl_features));
      detect::NmfConfig nc;
      nc.rank = cl_rank;
      const auto e = detect::nmf(detect::shift_nonnegative(m.z), nc);
      double eps = 0.0;
      if (cl_eps == "auto") {
        eps = detect::auto_eps(e.w, cl_min_pts);
      } else {
        eps = std::stod(cl_eps);
        if (!(eps > 0)) throw std::invalid_argument("--eps must be positive or 'auto'");
      }
      const auto c = detect::dbscan(e.w, eps, cl_min_pts);
      json assignment = json::object();
      for (std::size_t i = 0; i < m.ids.size(); ++i) assignment[std::to_string(m.ids[i])] = c.label[i];
      json out{{"eps", eps},
               {"min_pts", cl_min_pts},
               {"rank", cl_rank},
               {"nmf_objective", e.objective},
               {"cluster_count", c.cluster_count},
               {"cluster_sizes", c.cluster_sizes()},
               {"noise", c.noise_count()},
               {"assignment", assignment}};
      write_text(cl_out, out.dump(2) + "\n");
      std::cout << c.cluster_count << " clusters, " << c.noise_count() << " noise points (eps " << eps << ")\n";
    } else if (*ol) {
      const auto m = features::from_csv(read_text(ol_features));
      detect::PipelineConfig pc;
      pc.nmf.rank = ol_rank;
      pc.min_pts = ol_min_pts;
      pc.micro.method = ol_micro == "nmf" ? detect::MicroMethod::nmf : detect::MicroMethod::knn_louvain;
      const auto r = detect::run_pipeline(m, pc);
      json ranked = json::array();
      for (auto i : r.outliers.ranking) ranked.push_back({{"user_id", r.ids[i]}, {"score", r.outliers.score[i]}});
      json candidates = json::array();
      for (std::size_t c = 0; c < r.candidates.size(); ++c)
        candidates.push_back({{"user_id", r.candidates[c]}, {"micro_group", r.micro_group[c]}});
      json out{{"rank", ol_rank},
               {"eps", r.raw_clusters.eps},
               {"min_pts", ol_min_pts},
               {"micro", ol_micro},
               {"candidates", candidates},
               {"ranking", ranked}};
      write_text(ol_out, out.dump(2) + "\n");
      std::cout << r.candidates.size() << " outlier candidates\n";
    } else if (*sc) {
      const auto ledger = oracle::load_ledger(sc_ledger);
      const auto s = oracle::replay(ledger.guesses, ledger.bot_count, ledger.duration_days);
      std::cout << scoreboard_json(s).dump(2) << "\n";
    } else if (*hu) {
      auto cfg = session_config(hu_config);
      if (hu_auto) cfg.campaign.auto_analyst = true;
      if (hu_noise) cfg.campaign.noise = *hu_noise;
      if (hu_budget) cfg.campaign.budget = *hu_budget;
      if (hu_seed) cfg.campaign.seed = *hu_seed;
      if (!hu_auto) throw std::runtime_error("hunt runs unattended only with --auto; use serve for a human analyst");
      auto ds = load_dataset(hu_data);
      const auto truth = load_ground_truth(hu_truth);
      const int days = ds.duration_days;
      workbench::Session session(std::move(ds), cfg, truth, lexicon_or_builtin(hu_lexicon));
      session.attach_oracle(oracle::create_challenge(truth, days));
      const auto report = session.campaign_auto(cfg.campaign);

      json guesses = json::array();
      for (const auto& g : report.ledger) guesses.push_back({{"user_id", g.user_id}, {"day", g.day}, {"correct", g.correct}});
      json counts = json::object();
      for (const auto& [k, v] : report.counts) counts[k] = v;
      json out{{"scoreboard", scoreboard_json(report.scoreboard)},
               {"ledger", {{"duration_days", days}, {"bot_count", truth.bot_ids.size()}, {"guesses", guesses}}},
               {"counts", counts},
               {"days_used", report.days_used},
               {"outlier_candidates", report.outlier_candidates.size()},
               {"candidate_recall", report.candidate_recall},
               {"log", report.log}};
      write_text(hu_out, out.dump(2) + "\n");
      const auto& s = report.scoreboard;
      std::cout << "hits " << s.hits << ", misses " << s.misses << ", speed " << s.speed << ", final score "
                << s.final_score << "\n";
    } else if (*sv) {
      auto cfg = session_config(sv_config);
      auto ds = load_dataset(sv_data);
      const int days = ds.duration_days;
      std::optional<GroundTruth> truth;
      if (!sv_truth.empty()) truth = load_ground_truth(sv_truth);
      workbench::Session session(std::move(ds), cfg, truth, lexicon_or_builtin(sv_lexicon));
      if (truth) session.attach_oracle(oracle::create_challenge(*truth, days));
      if (!sv_lazy) {
        session.run_stage(workbench::Stage::graphs);
        session.run_stage(workbench::Stage::features);
      }
      const auto colon = sv_bind.rfind(':');
      if (colon == std::string::npos) throw std::invalid_argument("--bind expects host:port");
      const std::string host = sv_bind.substr(0, colon);
      const int port = std::stoi(sv_bind.substr(colon + 1));
      workbench::Server server(session);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving on " << host << ":" << bound << std::endl;
      server.run();
      g_server = nullptr;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& issue : e.issues()) std::cerr << "  " << issue.file << ":" << issue.line << ": " << issue.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
