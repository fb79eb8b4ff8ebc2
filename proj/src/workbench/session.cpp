#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bothunt/workbench.hpp"

namespace bothunt::workbench {

namespace {

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

template <typename E>
E parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> table, const char* what) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw WorkbenchError(std::string("unknown ") + what + " '" + s + "'");
}

std::string matrix_text(const features::RowMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string to_string(Label l) {
  switch (l) {
    case Label::bot: return "bot";
    case Label::human: return "human";
    case Label::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::analyst: return "analyst";
    case Provenance::oracle: return "oracle";
    case Provenance::classifier: return "classifier";
  }
  return "analyst";
}

Label label_from_string(const std::string& s) {
  return parse_enum<Label>(s, {{"bot", Label::bot}, {"human", Label::human}, {"unknown", Label::unknown}}, "label");
}

Provenance provenance_from_string(const std::string& s) {
  return parse_enum<Provenance>(
      s, {{"analyst", Provenance::analyst}, {"oracle", Provenance::oracle}, {"classifier", Provenance::classifier}},
      "provenance");
}

std::string to_string(Stage s) {
  switch (s) {
    case Stage::graphs: return "graphs";
    case Stage::features: return "features";
    case Stage::cluster: return "cluster";
    case Stage::outliers: return "outliers";
    case Stage::train: return "train";
    case Stage::hedge: return "hedge";
  }
  return "?";
}

Stage stage_from_string(const std::string& s) {
  for (auto st : kStages)
    if (to_string(st) == s) return st;
  throw WorkbenchError("unknown stage '" + s + "'");
}

// FNV-1a, 64 bit
std::string artifact_digest(const std::string& content) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : content) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Session::Session(Dataset ds, SessionConfig cfg, std::optional<GroundTruth> truth, SentimentLexicon lexicon)
    : ds_(std::move(ds)), cfg_(std::move(cfg)), lexicon_(std::move(lexicon)), truth_(std::move(truth)) {
  ds_.finalize();
  if (cfg_.session_dir) std::filesystem::create_directories(*cfg_.session_dir);
}

bool Session::has(Stage stage) const {
  auto it = stages_.find(stage);
  return it != stages_.end() && it->second.run;
}

bool Session::stale(Stage stage) const {
  auto it = stages_.find(stage);
  return it != stages_.end() && it->second.stale;
}

std::string Session::artifact_hash(Stage stage) const {
  auto it = stages_.find(stage);
  if (it == stages_.end() || !it->second.run) throw DependencyError("stage " + to_string(stage) + " has not run");
  return it->second.hash;
}

void Session::require(Stage stage, Stage needed) const {
  if (!has(needed))
    throw DependencyError("stage " + to_string(stage) + " needs " + to_string(needed) + " to run first");
}

void Session::mark_stale(Stage stage) {
  auto it = stages_.find(stage);
  if (it != stages_.end() && it->second.run) it->second.stale = true;
}

void Session::persist(Stage stage, const std::string& content, const std::string& ext) {
  const auto hash = artifact_digest(content);
  auto& st = stages_[stage];
  st.run = true;
  st.stale = false;
  st.hash = hash;
  if (!cfg_.session_dir) return;
  const auto file = *cfg_.session_dir / (to_string(stage) + "-" + hash + ext);
  if (std::filesystem::exists(file)) return;
  std::ofstream out(file);
  if (!out) throw WorkbenchError("cannot write artifact " + file.string());
  out << content;
}

const features::FeatureContext& Session::context() const {
  if (!context_) throw DependencyError("graphs stage has not run");
  return *context_;
}

const features::FeatureMatrix& Session::matrix() const {
  if (!matrix_) throw DependencyError("features stage has not run");
  return *matrix_;
}

const detect::PipelineResult& Session::pipeline() const {
  if (!pipeline_) throw DependencyError("cluster stage has not run");
  return *pipeline_;
}

const learn::LinearModel& Session::model() const {
  if (!model_) throw DependencyError("train stage has not run");
  return *model_;
}

const learn::HedgeState& Session::hedge() const {
  if (!hedge_) throw DependencyError("hedge stage has not run");
  return *hedge_;
}

StageReport Session::run_stage(Stage stage) {
  const auto t0 = std::chrono::steady_clock::now();
  StageReport report;
  report.stage = stage;
  std::string content;
  std::string ext = ".txt";

  switch (stage) {
    case Stage::graphs: {
      context_ = std::make_unique<features::FeatureContext>(ds_, lexicon_, cfg_.features);
      const auto& k = context_->kernels();
      std::vector<std::string> users;
      for (auto id : k.retweet.ids) users.push_back(std::to_string(id));
      content = "# hashtags\n" + graphs::to_edge_list(context_->hashtags().graph, context_->hashtags().tags) +
                "# retweet\n" + graphs::to_edge_list(k.retweet.graph, users) + "# mention\n" +
                graphs::to_edge_list(k.mention.graph, users);
      for (const auto& t : context_->topic().hashtags) content += "topic #" + t + "\n";
      report.stats["hashtags"] = static_cast<double>(context_->hashtags().tags.size());
      report.stats["hashtag_edges"] = static_cast<double>(context_->hashtags().graph.edge_count());
      report.stats["retweet_arcs"] = static_cast<double>(k.retweet.graph.arc_count());
      report.stats["mention_arcs"] = static_cast<double>(k.mention.graph.arc_count());
      report.stats["topic_hashtags"] = static_cast<double>(context_->topic().hashtags.size());
      break;
    }
    case Stage::features: {
      if (!context_) run_stage(Stage::graphs);
      features::LabelInputs li;
      li.known_bots = known(Label::bot);
      if (pipeline_ && has(Stage::outliers)) li.clusters = pipeline_->cluster_map;
      matrix_ = context_->assemble(li);
      content = features::to_csv(*matrix_);
      ext = ".csv";
      report.stats["rows"] = static_cast<double>(matrix_->ids.size());
      report.stats["columns"] = static_cast<double>(matrix_->columns.size());
      report.stats["missing"] = static_cast<double>(matrix_->missing.count());
      mark_stale(Stage::train);
      mark_stale(Stage::hedge);
      break;
    }
    case Stage::cluster: {
      require(stage, Stage::features);
      const auto& dc = cfg_.detect;
      detect::PipelineResult r;
      r.ids = matrix_->ids;
      r.embedding = detect::nmf(detect::shift_nonnegative(matrix_->z), dc.nmf);
      const double eps = dc.eps > 0.0 ? dc.eps : detect::auto_eps(r.embedding.w, dc.min_pts);
      r.raw_clusters = detect::dbscan(r.embedding.w, eps, dc.min_pts);
      r.clusters = detect::demote_small_clusters(r.raw_clusters, dc.small_cluster_fraction);
      pipeline_ = std::move(r);
      nlohmann::ordered_json j;
      j["eps"] = eps;
      j["min_pts"] = dc.min_pts;
      j["labels"] = pipeline_->clusters.label;
      j["raw_labels"] = pipeline_->raw_clusters.label;
      content = j.dump() + "\n" + matrix_text(pipeline_->embedding.w);
      ext = ".json";
      report.stats["eps"] = eps;
      report.stats["nmf_objective"] = pipeline_->embedding.objective;
      report.stats["nmf_iterations"] = pipeline_->embedding.iterations;
      report.stats["clusters"] = static_cast<double>(pipeline_->clusters.cluster_count);
      report.stats["raw_clusters"] = static_cast<double>(pipeline_->raw_clusters.cluster_count);
      report.stats["noise"] = static_cast<double>(pipeline_->clusters.noise_count());
      stages_.erase(Stage::outliers);
      break;
    }
    case Stage::outliers: {
      require(stage, Stage::cluster);
      auto& r = *pipeline_;
      r.outliers = detect::outlier_scores(r.embedding.w, r.clusters);
      std::vector<std::size_t> rows;
      for (auto i : r.outliers.ranking)
        if (r.clusters.label[i] == detect::kNoise) rows.push_back(i);
      r.candidates.clear();
      for (auto i : rows) r.candidates.push_back(r.ids[i]);
      r.micro_group = detect::micro_cluster(r.embedding.w, matrix_->z, rows, cfg_.detect.micro);
      r.cluster_map.clear();
      for (std::size_t i = 0; i < r.ids.size(); ++i)
        if (r.clusters.label[i] >= 0) r.cluster_map[r.ids[i]] = r.clusters.label[i];
      for (std::size_t c = 0; c < rows.size(); ++c)
        r.cluster_map[r.ids[rows[c]]] = r.clusters.cluster_count + r.micro_group[c];
      nlohmann::ordered_json j;
      j["scores"] = r.outliers.score;
      j["candidates"] = r.candidates;
      j["micro_group"] = r.micro_group;
      content = j.dump();
      ext = ".json";
      report.stats["candidates"] = static_cast<double>(r.candidates.size());
      report.stats["micro_groups"] =
          r.micro_group.empty() ? 0.0 : static_cast<double>(*std::max_element(r.micro_group.begin(), r.micro_group.end()) + 1);
      report.stats["max_score"] = r.max_outlier_score();
      break;
    }
    case Stage::train: {
      require(stage, Stage::features);
      std::vector<std::size_t> rows;
      std::vector<int> y;
      std::string label_list;
      for (const auto& [id, rec] : labels_) {
        if (rec.label == Label::unknown) continue;
        auto row = matrix_->row_of(id);
        if (!row) continue;
        rows.push_back(*row);
        y.push_back(rec.label == Label::bot ? 1 : -1);
        label_list += std::to_string(id) + (rec.label == Label::bot ? " bot\n" : " human\n");
      }
      const auto bots = std::count(y.begin(), y.end(), 1);
      if (bots == 0 || bots == static_cast<long>(y.size()))
        throw DependencyError("train needs at least one confirmed bot and one confirmed human");
      features::RowMatrix x(static_cast<Eigen::Index>(rows.size()), matrix_->z.cols());
      for (std::size_t i = 0; i < rows.size(); ++i)
        x.row(static_cast<Eigen::Index>(i)) = matrix_->z.row(static_cast<Eigen::Index>(rows[i]));
      model_ = learn::train_linear(x, y, matrix_->columns, cfg_.linear);
      content = learn::model_to_text(*model_) + "# labels\n" + label_list;
      std::size_t correct = 0;
      for (std::size_t i = 0; i < rows.size(); ++i)
        correct += (model_->margin(x.row(static_cast<Eigen::Index>(i))) > 0) == (y[i] > 0);
      report.stats["examples"] = static_cast<double>(rows.size());
      report.stats["bots"] = static_cast<double>(bots);
      report.stats["training_accuracy"] = static_cast<double>(correct) / static_cast<double>(rows.size());
      mark_stale(Stage::hedge);
      break;
    }
    case Stage::hedge: {
      require(stage, Stage::train);
      require(stage, Stage::outliers);
      if (!hedge_) hedge_ = learn::hedge_init(kDefaultArms);
      content = learn::hedge_to_json(*hedge_);
      ext = ".json";
      for (std::size_t j = 0; j < hedge_->arms.size(); ++j) report.stats["weight_" + hedge_->arms[j]] = hedge_->weights[j];
      report.stats["history"] = static_cast<double>(hedge_->history.size());
      break;
    }
  }
  persist(stage, content, ext);
  report.artifact_hash = stages_[stage].hash;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

LabelRecord Session::set_label(UserId id, Label label, std::vector<std::string> flags, Provenance provenance) {
  if (!ds_.find_account(id)) throw UnknownUserError(id);
  LabelRecord rec{id, label, std::move(flags), provenance, now_ms(), next_sequence()};
  labels_[id] = rec;
  // label-dependent columns, the model and the guesser all read labels
  mark_stale(Stage::features);
  mark_stale(Stage::train);
  mark_stale(Stage::hedge);
  return rec;
}

std::optional<LabelRecord> Session::label_of(UserId id) const {
  auto it = labels_.find(id);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::set<UserId> Session::known(Label label) const {
  std::set<UserId> out;
  for (const auto& [id, rec] : labels_)
    if (rec.label == label) out.insert(id);
  return out;
}

std::vector<InitialSuspect> Session::heuristic_scores() const {
  const auto& m = matrix();
  const auto c_name = m.column("name_autogen_score");
  const auto c_image = m.column("image_clone_flag");
  const auto c_url = m.column("url_clone_flag");
  const auto c_eliza = m.column("eliza_score");
  const auto c_session = m.column("longest_session_hours_10min");
  const double max_session = m.raw.col(static_cast<Eigen::Index>(c_session)).maxCoeff();

  std::vector<InitialSuspect> out;
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    auto v = [&](std::size_t c) { return m.raw(r, static_cast<Eigen::Index>(c)); };
    const double session = max_session > 0 ? v(c_session) / max_session : 0.0;
    InitialSuspect s;
    s.user_id = m.ids[i];
    s.score = v(c_name) + v(c_image) + v(c_url) + v(c_eliza) + session;
    if (v(c_name) >= 0.5) s.reasons.push_back("auto-generated name");
    if (v(c_image) > 0) s.reasons.push_back("cloned profile image");
    if (v(c_url) > 0) s.reasons.push_back("shared profile url");
    if (v(c_eliza) >= 0.5) s.reasons.push_back("templated openings");
    if (session >= 0.5) s.reasons.push_back("marathon sessions");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<InitialSuspect> Session::initial_suspects(std::size_t k) const {
  auto all = heuristic_scores();
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<detect::Suspect> Session::suspects(std::size_t limit) const {
  if (!has(Stage::outliers)) throw DependencyError("suspects need the outliers stage");
  detect::SuspectInputs in;
  in.known_bots = known(Label::bot);
  in.known_humans = known(Label::human);
  if (oracle_)
    for (const auto& g : oracle_->ledger()) in.guessed.insert(g.user_id);
  std::map<UserId, double> scores;
  const auto& r = *pipeline_;
  for (std::size_t i = 0; i < r.ids.size(); ++i) scores[r.ids[i]] = r.outliers.score[i];
  auto out = detect::rank_suspects(matrix(), r.cluster_map, scores, in, cfg_.weights);
  if (out.size() > limit) out.resize(limit);
  return out;
}

Explanation Session::explain_user(UserId id, std::size_t k) const {
  const auto& m = matrix();
  const auto row = m.row_of(id);
  if (!row) throw UnknownUserError(id);
  Explanation e;
  e.user_id = id;
  e.model_based = model_.has_value();
  const auto r = static_cast<Eigen::Index>(*row);
  for (std::size_t j = 0; j < m.columns.size(); ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    ExplanationEntry entry{m.columns[j], m.raw(r, c), m.z(r, c), 0.0};
    entry.contribution = e.model_based ? model_->weights(c) * entry.z : std::abs(entry.z);
    e.entries.push_back(std::move(entry));
  }
  std::stable_sort(e.entries.begin(), e.entries.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.contribution) > std::abs(b.contribution); });
  e.entries.resize(std::min({k, kMaxExplanation, e.entries.size()}));

  if (has(Stage::outliers)) {
    const auto& p = *pipeline_;
    const auto bots = known(Label::bot);
    double cbf = 0.0;
    if (auto it = p.cluster_map.find(id); it != p.cluster_map.end()) {
      double size = 0, hits = 0;
      for (const auto& [uid, c] : p.cluster_map)
        if (c == it->second) {
          size += 1;
          hits += bots.contains(uid) ? 1 : 0;
        }
      cbf = hits / size;
    }
    const double max_out = p.max_outlier_score();
    const double out = max_out > 0 ? p.outlier_score(id) / max_out : 0.0;
    double sim = 0.0;
    const auto mine = detect::salient_features(m, *row);
    for (auto b : bots)
      if (b != id)
        if (auto br = m.row_of(b)) sim = std::max(sim, features::jaccard(mine, detect::salient_features(m, *br)));
    e.suspicion = cfg_.weights.cluster * cbf + cfg_.weights.outlier * out + cfg_.weights.similarity * sim;
  } else {
    for (const auto& s : heuristic_scores())
      if (s.user_id == id) e.suspicion = s.score / 5.0;
  }
  return e;
}

std::map<UserId, std::vector<double>> Session::arm_scores(const std::vector<UserId>& users) const {
  const auto& m = matrix();
  const auto& p = pipeline();
  if (!has(Stage::outliers)) throw DependencyError("arm scores need the outliers stage");
  const auto bots = known(Label::bot);

  std::map<long, std::pair<double, double>> tally;
  for (const auto& [uid, c] : p.cluster_map) {
    auto& t = tally[c];
    t.first += 1;
    t.second += bots.contains(uid) ? 1 : 0;
  }
  std::vector<std::pair<UserId, std::set<std::string>>> bot_tokens;
  for (auto b : bots)
    if (const auto* a = ds_.find_account(b)) bot_tokens.emplace_back(b, features::profile_tokens(*a));
  const auto c_entropy = static_cast<Eigen::Index>(m.column("inter_tweet_entropy_bits"));
  const double max_entropy = m.raw.col(c_entropy).maxCoeff();
  const double max_out = p.max_outlier_score();

  std::map<UserId, std::vector<double>> out;
  for (auto id : users) {
    const auto row = m.row_of(id);
    if (!row) throw UnknownUserError(id);
    const auto r = static_cast<Eigen::Index>(*row);
    std::vector<double> f(kDefaultArms.size(), 0.0);
    f[0] = model_ ? learn::predict_prob(*model_, m.z.row(r)) : 0.5;
    f[1] = max_out > 0 ? p.outlier_score(id) / max_out : 0.0;
    if (auto it = p.cluster_map.find(id); it != p.cluster_map.end()) {
      const auto& [size, hits] = tally[it->second];
      f[2] = hits / size;
    }
    if (const auto* a = ds_.find_account(id)) {
      const auto mine = features::profile_tokens(*a);
      for (const auto& [b, tokens] : bot_tokens)
        if (b != id) f[3] = std::max(f[3], features::jaccard(mine, tokens));
    }
    f[4] = max_entropy > 0 ? std::clamp(1.0 - m.raw(r, c_entropy) / max_entropy, 0.0, 1.0) : 0.0;
    out.emplace(id, std::move(f));
  }
  return out;
}

void Session::attach_oracle(oracle::ChallengeState state) { oracle_ = std::move(state); }

oracle::ChallengeState& Session::challenge() {
  if (!oracle_) throw WorkbenchError("no oracle attached");
  return *oracle_;
}

const oracle::ChallengeState& Session::challenge() const {
  if (!oracle_) throw WorkbenchError("no oracle attached");
  return *oracle_;
}

oracle::GuessOutcome Session::guess(UserId id) {
  auto outcome = challenge().submit_guess(id);
  if (ds_.find_account(id)) set_label(id, outcome.correct ? Label::bot : Label::human, {}, Provenance::oracle);
  return outcome;
}

}  // namespace bothunt::workbench
