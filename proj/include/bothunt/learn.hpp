#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bothunt/corpus.hpp"
#include "bothunt/features.hpp"

namespace bothunt::learn {

class LearnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- linear classifier ----------------------------------------------------

struct LinearConfig {
  int epochs = 40;
  double lambda = 1e-3;     // L2 strength
  bool balance_classes = true;
  std::uint64_t seed = 17;

  bool operator==(const LinearConfig&) const = default;
};

struct LinearModel {
  std::vector<std::string> columns;
  Eigen::VectorXd weights;
  double bias = 0.0;
  LinearConfig config;

  double margin(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

/// Pegasos-style hinge-loss SGD (step 1/(lambda t)). The bias is shrunk
/// like a weight on a constant input; an unshrunk bias takes the huge first
/// steps and never recovers. y holds +1 for bots and -1 for humans.
LinearModel train_linear(const features::RowMatrix& x, const std::vector<int>& y,
                         std::vector<std::string> columns, const LinearConfig& cfg = {});

/// Logistic squashing of the margin.
double predict_prob(const LinearModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& x);

std::string model_to_text(const LinearModel& model);
LinearModel model_from_text(const std::string& text);
void save_model(const LinearModel& model, const std::filesystem::path& file);
LinearModel load_model(const std::filesystem::path& file);

// ---- hedge ----------------------------------------------------------------

struct HedgeRecord {
  UserId user_id = 0;
  double feedback = 0.0;   // x
  std::vector<double> f;   // per-arm scores of the guessed user

  bool operator==(const HedgeRecord&) const = default;
};

struct HedgeState {
  std::vector<std::string> arms;
  std::vector<double> weights;
  std::vector<HedgeRecord> history;
  // (history length at the time, divisor) for every renormalization
  std::vector<std::pair<std::size_t, double>> renormalizations;

  bool operator==(const HedgeState&) const = default;
};

inline constexpr double kRenormalizeAbove = 1e12;

HedgeState hedge_init(std::vector<std::string> arms);
double hedge_bot_score(const HedgeState& state, const std::vector<double>& f);
UserId hedge_select(const HedgeState& state, const std::vector<UserId>& candidates,
                    const std::map<UserId, std::vector<double>>& f_table);
void hedge_update(HedgeState& state, UserId user, double feedback, const std::vector<double>& f);

std::string hedge_to_json(const HedgeState& state);
HedgeState hedge_from_json(const std::string& text);
void save_hedge(const HedgeState& state, const std::filesystem::path& file);
HedgeState load_hedge(const std::filesystem::path& file);

}  // namespace bothunt::learn
