#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bothunt/corpus.hpp"
#include "bothunt/detect.hpp"
#include "bothunt/features.hpp"
#include "bothunt/learn.hpp"
#include "bothunt/lexicon.hpp"
#include "bothunt/oracle.hpp"

namespace bothunt::workbench {

class WorkbenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DependencyError : public WorkbenchError {
 public:
  using WorkbenchError::WorkbenchError;
};

class UnknownUserError : public WorkbenchError {
 public:
  explicit UnknownUserError(UserId id) : WorkbenchError("unknown user " + std::to_string(id)), id_(id) {}
  UserId id() const { return id_; }

 private:
  UserId id_;
};

enum class Label { bot, human, unknown };
enum class Provenance { analyst, oracle, classifier };

std::string to_string(Label l);
std::string to_string(Provenance p);
Label label_from_string(const std::string& s);
Provenance provenance_from_string(const std::string& s);

struct LabelRecord {
  UserId user_id = 0;
  Label label = Label::unknown;
  std::vector<std::string> flags;
  Provenance provenance = Provenance::analyst;
  std::int64_t timestamp = 0;  // epoch milliseconds
  std::uint64_t sequence = 0;  // order of recording within the session
};

enum class Stage { graphs, features, cluster, outliers, train, hedge };

inline constexpr std::array<Stage, 6> kStages = {Stage::graphs,   Stage::features, Stage::cluster,
                                                 Stage::outliers, Stage::train,    Stage::hedge};

std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);

struct StageReport {
  Stage stage = Stage::graphs;
  double seconds = 0.0;
  std::string artifact_hash;
  std::map<std::string, double> stats;
};

struct CampaignConfig {
  int budget = 120;
  bool auto_analyst = true;
  double noise = 0.0;  // analyst flip probability
  int train_bots = 10;
  int train_humans = 30;
  int initial_review = 10;  // top initial suspects the analyst checks on day 0
  int human_sample = 30;    // lowest-scored initial users the analyst checks on day 0
  int review_per_day = 10;  // suspects reviewed per day until the train threshold
  int guesses_per_day = 10;
  int candidate_pool = 100;
  double hit_feedback = 1.0;
  double miss_feedback = -1.0;
  std::uint64_t seed = 2015;
};

struct SessionConfig {
  features::FeatureParams features;
  detect::PipelineConfig detect;
  detect::SuspectWeights weights;
  learn::LinearConfig linear;
  CampaignConfig campaign;
  std::optional<std::filesystem::path> session_dir;  // artifact store, when set
};

SessionConfig load_config(const std::filesystem::path& file);
SessionConfig config_from_json(const std::string& text);
std::string config_to_json(const SessionConfig& cfg);

struct InitialSuspect {
  UserId user_id = 0;
  double score = 0.0;
  std::vector<std::string> reasons;
};

struct ExplanationEntry {
  std::string feature;
  double raw = 0.0;
  double z = 0.0;
  double contribution = 0.0;
};

struct Explanation {
  UserId user_id = 0;
  std::vector<ExplanationEntry> entries;
  double suspicion = 0.0;
  bool model_based = false;
};

inline constexpr std::size_t kMaxExplanation = 10;

inline const std::vector<std::string> kDefaultArms = {"linear", "outlier", "cluster_bot_fraction",
                                                      "jaccard_to_known_bots", "low_entropy"};

struct CampaignReport {
  std::vector<oracle::GuessRecord> ledger;
  oracle::Scoreboard scoreboard;
  std::map<std::string, int> counts;  // per-step tallies
  std::vector<UserId> outlier_candidates;
  double candidate_recall = 0.0;  // over planted bots
  int days_used = 0;
  std::vector<std::string> log;
};

class Session {
 public:
  Session(Dataset ds, SessionConfig cfg = {}, std::optional<GroundTruth> truth = std::nullopt,
          SentimentLexicon lexicon = SentimentLexicon::builtin());
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const Dataset& dataset() const { return ds_; }
  const SessionConfig& config() const { return cfg_; }
  const std::optional<GroundTruth>& truth() const { return truth_; }

  StageReport run_stage(Stage stage);
  bool has(Stage stage) const;
  bool stale(Stage stage) const;
  std::string artifact_hash(Stage stage) const;

  const features::FeatureContext& context() const;
  const features::FeatureMatrix& matrix() const;
  const detect::PipelineResult& pipeline() const;
  const learn::LinearModel& model() const;
  const learn::HedgeState& hedge() const;
  bool has_model() const { return model_.has_value(); }

  LabelRecord set_label(UserId id, Label label, std::vector<std::string> flags, Provenance provenance);
  std::optional<LabelRecord> label_of(UserId id) const;
  const std::map<UserId, LabelRecord>& labels() const { return labels_; }
  std::set<UserId> known(Label label) const;

  std::vector<InitialSuspect> initial_suspects(std::size_t k) const;
  /// Step-1 heuristic score of every account, ascending id order.
  std::vector<InitialSuspect> heuristic_scores() const;
  std::vector<detect::Suspect> suspects(std::size_t limit) const;
  Explanation explain_user(UserId id, std::size_t k = 5) const;

  /// Per-arm scores in [0,1] for the given users.
  std::map<UserId, std::vector<double>> arm_scores(const std::vector<UserId>& users) const;

  void attach_oracle(oracle::ChallengeState state);
  bool has_oracle() const { return oracle_.has_value(); }
  oracle::ChallengeState& challenge();
  const oracle::ChallengeState& challenge() const;
  /// Oracle guess; the answer is recorded as an oracle-provenance label.
  oracle::GuessOutcome guess(UserId id);

  CampaignReport campaign_auto(const CampaignConfig& cfg);

 private:
  struct StageState {
    bool run = false;
    bool stale = false;
    std::string hash;
  };

  void require(Stage stage, Stage needed) const;
  void mark_stale(Stage stage);
  void persist(Stage stage, const std::string& content, const std::string& ext);
  std::uint64_t next_sequence() { return ++sequence_; }

  Dataset ds_;
  SessionConfig cfg_;
  SentimentLexicon lexicon_;
  std::optional<GroundTruth> truth_;
  std::map<Stage, StageState> stages_;

  std::unique_ptr<features::FeatureContext> context_;
  std::optional<features::FeatureMatrix> matrix_;
  std::optional<detect::PipelineResult> pipeline_;
  std::optional<learn::LinearModel> model_;
  std::optional<learn::HedgeState> hedge_;
  std::map<UserId, LabelRecord> labels_;
  std::optional<oracle::ChallengeState> oracle_;
  std::uint64_t sequence_ = 0;
};

std::string artifact_digest(const std::string& content);

// ---- HTTP API ---------------------------------------------------------------

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Transport-free router over a session. Mutations are refused with 409
/// while another mutation holds the session.
class Api {
 public:
  explicit Api(Session& session) : session_(session) {}
  ApiResponse handle(const ApiRequest& req);
  bool busy() const;

 private:
  ApiResponse dispatch(const ApiRequest& req, bool mutation);

  Session& session_;
  std::mutex mutex_;
  std::atomic<bool> busy_{false};
};

/// Blocks serving the API on host:port until stop() is called from another
/// thread. Throws WorkbenchError on bind failure.
class Server {
 public:
  explicit Server(Session& session);
  ~Server();
  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bothunt::workbench
