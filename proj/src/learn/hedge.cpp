#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "bothunt/learn.hpp"

namespace bothunt::learn {

namespace {
void check_scores(const HedgeState& state, const std::vector<double>& f) {
  if (f.size() != state.weights.size())
    throw LearnError("got " + std::to_string(f.size()) + " arm scores for " +
                     std::to_string(state.weights.size()) + " arms");
  for (double v : f)
    if (!(v >= 0.0 && v <= 1.0)) throw LearnError("arm score outside [0,1]: " + std::to_string(v));
}
}  // namespace

HedgeState hedge_init(std::vector<std::string> arms) {
  if (arms.empty()) throw LearnError("hedge needs at least one arm");
  HedgeState s;
  s.weights.assign(arms.size(), 1.0);
  s.arms = std::move(arms);
  return s;
}

double hedge_bot_score(const HedgeState& state, const std::vector<double>& f) {
  check_scores(state, f);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    num += state.weights[j] * f[j];
    den += state.weights[j];
  }
  return num / den;
}

UserId hedge_select(const HedgeState& state, const std::vector<UserId>& candidates,
                    const std::map<UserId, std::vector<double>>& f_table) {
  if (candidates.empty()) throw LearnError("hedge_select: no candidates");
  std::optional<UserId> best;
  double best_score = -1.0;
  for (auto id : candidates) {
    auto it = f_table.find(id);
    if (it == f_table.end()) throw LearnError("no arm scores for user " + std::to_string(id));
    const double s = hedge_bot_score(state, it->second);
    if (!best || s > best_score || (s == best_score && id < *best)) {
      best = id;
      best_score = s;
    }
  }
  return *best;
}

void hedge_update(HedgeState& state, UserId user, double feedback, const std::vector<double>& f) {
  check_scores(state, f);
  for (std::size_t j = 0; j < f.size(); ++j) state.weights[j] *= std::exp(feedback * f[j]);
  state.history.push_back({user, feedback, f});
  const double top = *std::max_element(state.weights.begin(), state.weights.end());
  if (top > kRenormalizeAbove) {
    double sum = 0.0;
    for (double w : state.weights) sum += w;
    const double divisor = sum / static_cast<double>(state.weights.size());
    for (double& w : state.weights) w /= divisor;
    state.renormalizations.emplace_back(state.history.size(), divisor);
  }
}

std::string hedge_to_json(const HedgeState& state) {
  nlohmann::ordered_json j;
  j["arms"] = state.arms;
  j["weights"] = state.weights;
  auto& hist = j["history"] = nlohmann::ordered_json::array();
  for (const auto& h : state.history)
    hist.push_back({{"user_id", h.user_id}, {"feedback", h.feedback}, {"f", h.f}});
  auto& ren = j["renormalizations"] = nlohmann::ordered_json::array();
  for (const auto& [at, d] : state.renormalizations) ren.push_back({{"after", at}, {"divisor", d}});
  return j.dump(2);
}

HedgeState hedge_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    HedgeState s;
    s.arms = j.at("arms").get<std::vector<std::string>>();
    s.weights = j.at("weights").get<std::vector<double>>();
    if (s.arms.empty() || s.arms.size() != s.weights.size())
      throw LearnError("hedge snapshot: arms and weights disagree");
    for (const auto& h : j.at("history"))
      s.history.push_back({h.at("user_id").get<UserId>(), h.at("feedback").get<double>(),
                           h.at("f").get<std::vector<double>>()});
    if (j.contains("renormalizations"))
      for (const auto& r : j["renormalizations"])
        s.renormalizations.emplace_back(r.at("after").get<std::size_t>(), r.at("divisor").get<double>());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw LearnError(std::string("hedge snapshot: ") + e.what());
  }
}

void save_hedge(const HedgeState& state, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw LearnError("cannot write " + file.string());
  out << hedge_to_json(state) << '\n';
}

HedgeState load_hedge(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LearnError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return hedge_from_json(ss.str());
}

}  // namespace bothunt::learn
