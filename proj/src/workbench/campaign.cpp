#include <algorithm>

#include "bothunt/random.hpp"
#include "bothunt/workbench.hpp"

namespace bothunt::workbench {

CampaignReport Session::campaign_auto(const CampaignConfig& cfg) {
  if (!oracle_) throw WorkbenchError("campaign needs an attached oracle");
  if (cfg.budget <= 0) throw WorkbenchError("campaign budget must be positive");
  if (!cfg.auto_analyst) throw WorkbenchError("campaign_auto runs with the simulated analyst only");
  if (!truth_) throw WorkbenchError("the simulated analyst needs ground truth");
  if (cfg.noise < 0.0 || cfg.noise > 1.0) throw WorkbenchError("analyst noise must lie in [0,1]");

  CampaignReport report;
  Rng rng(cfg.seed);
  auto& state = *oracle_;

  for (auto st : {Stage::graphs, Stage::features, Stage::cluster, Stage::outliers})
    if (!has(st)) run_stage(st);
  report.outlier_candidates = pipeline_->candidates;
  {
    std::size_t found = 0;
    for (auto id : report.outlier_candidates) found += truth_->is_bot(id) ? 1 : 0;
    report.candidate_recall =
        truth_->bot_ids.empty() ? 0.0 : static_cast<double>(found) / static_cast<double>(truth_->bot_ids.size());
  }

  int spent = 0;
  auto budget_left = [&] { return spent < cfg.budget; };
  auto finished = [&] { return state.all_found_day().has_value() || !budget_left() || state.over(); };
  auto submit = [&](UserId id) {
    const bool hit = guess(id).correct;
    ++spent;
    return hit;
  };
  // simulated analyst: ground truth with each answer flipped with probability noise
  auto review = [&](UserId id, const char* step) {
    if (labels_.contains(id) || state.guessed(id)) return;
    const bool says_bot = truth_->is_bot(id) != rng.chance(cfg.noise);
    set_label(id, says_bot ? Label::bot : Label::human, {}, Provenance::analyst);
    ++report.counts[std::string(step) + "_reviewed"];
    if (!says_bot) return;
    ++report.counts[std::string(step) + "_confirmed_bots"];
    if (budget_left() && !state.over()) {
      const bool hit = submit(id);
      ++report.counts["analyst_guesses"];
      if (hit) ++report.counts["analyst_hits"];
    }
  };
  auto threshold_met = [&] {
    return known(Label::bot).size() >= static_cast<std::size_t>(cfg.train_bots) &&
           known(Label::human).size() >= static_cast<std::size_t>(cfg.train_humans);
  };

  bool first_day = true;
  while (!finished()) {
    const int day = state.current_day();
    if (!threshold_met()) {
      if (first_day) {
        auto scored = heuristic_scores();
        std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
        const auto top = std::min<std::size_t>(static_cast<std::size_t>(cfg.initial_review), scored.size());
        for (std::size_t i = 0; i < top && !finished(); ++i) review(scored[i].user_id, "step1");
        const auto low = std::min<std::size_t>(static_cast<std::size_t>(cfg.human_sample), scored.size() - top);
        for (std::size_t i = 0; i < low && !finished(); ++i) review(scored[scored.size() - 1 - i].user_id, "step1");
      } else {
        for (const auto& s : suspects(static_cast<std::size_t>(cfg.review_per_day))) {
          if (finished()) break;
          review(s.user_id, "step2");
        }
      }
      report.log.push_back("day " + std::to_string(day) + ": " + std::to_string(known(Label::bot).size()) +
                           " bots and " + std::to_string(known(Label::human).size()) + " humans confirmed");
    }
    first_day = false;

    if (!finished() && threshold_met()) {
      run_stage(Stage::features);
      run_stage(Stage::train);
      run_stage(Stage::hedge);
      int hits = 0, tries = 0;
      for (int g = 0; g < cfg.guesses_per_day && !finished(); ++g) {
        std::vector<UserId> pool;
        for (const auto& s : suspects(static_cast<std::size_t>(cfg.candidate_pool))) pool.push_back(s.user_id);
        if (pool.empty()) break;
        const auto f = arm_scores(pool);
        const UserId pick = learn::hedge_select(*hedge_, pool, f);
        const bool hit = submit(pick);
        learn::hedge_update(*hedge_, pick, hit ? cfg.hit_feedback : cfg.miss_feedback, f.at(pick));
        ++tries;
        hits += hit ? 1 : 0;
      }
      report.counts["step3_guesses"] += tries;
      report.counts["step3_hits"] += hits;
      report.log.push_back("day " + std::to_string(day) + ": hedge guessed " + std::to_string(tries) + ", " +
                           std::to_string(hits) + " hits");
    }
    if (finished()) break;
    state.advance_day();
  }

  report.ledger = state.ledger();
  report.scoreboard = state.scoreboard();
  report.days_used = state.all_found_day() ? *state.all_found_day() + 1 : state.current_day();
  return report;
}

}  // namespace bothunt::workbench
