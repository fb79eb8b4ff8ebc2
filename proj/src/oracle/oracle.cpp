#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bothunt/oracle.hpp"

namespace bothunt::oracle {

Scoreboard score_from_counts(int hits, int misses, int speed) {
  Scoreboard s;
  s.hits = hits;
  s.misses = misses;
  s.guesses = hits + misses;
  // quarter points are exact in binary floating point
  s.accuracy = hits - 0.25 * misses;
  s.speed = speed;
  s.final_score = s.accuracy + speed;
  return s;
}

ChallengeState::ChallengeState(std::set<UserId> bots, int duration_days)
    : bots_(std::move(bots)), duration_days_(duration_days) {
  if (duration_days < 1) throw OracleError("duration_days must be at least 1");
  if (bots_.empty()) throw OracleError("ground truth holds no bots");
}

GuessOutcome ChallengeState::submit_guess(UserId id) {
  if (over()) throw ChallengeOverError();
  if (guessed_.contains(id)) throw RepeatGuessError(id);
  const bool correct = bots_.contains(id);
  guessed_.insert(id);
  ledger_.push_back({id, current_day_, correct});
  if (correct && ++found_ == bots_.size()) all_found_day_ = current_day_;
  return {correct};
}

void ChallengeState::advance_day() {
  if (over()) throw ChallengeOverError();
  ++current_day_;
}

Scoreboard ChallengeState::scoreboard() const {
  int hits = 0;
  for (const auto& g : ledger_) hits += g.correct ? 1 : 0;
  const int misses = static_cast<int>(ledger_.size()) - hits;
  return score_from_counts(hits, misses, all_found_day_ ? duration_days_ - *all_found_day_ : 0);
}

ChallengeState create_challenge(const GroundTruth& truth, int duration_days) {
  return ChallengeState(std::set<UserId>(truth.bot_ids.begin(), truth.bot_ids.end()), duration_days);
}

Scoreboard replay(const std::vector<GuessRecord>& ledger, std::size_t bot_count, int duration_days) {
  int hits = 0, misses = 0;
  std::optional<int> done;
  std::set<UserId> seen;
  for (const auto& g : ledger) {
    if (!seen.insert(g.user_id).second) throw OracleError("ledger repeats user " + std::to_string(g.user_id));
    if (g.correct) {
      if (static_cast<std::size_t>(++hits) == bot_count) done = g.day;
    } else {
      ++misses;
    }
  }
  return score_from_counts(hits, misses, done ? duration_days - *done : 0);
}

std::string ledger_to_json(const LedgerFile& ledger) {
  nlohmann::ordered_json j;
  j["duration_days"] = ledger.duration_days;
  j["bot_count"] = ledger.bot_count;
  auto& arr = j["guesses"] = nlohmann::ordered_json::array();
  for (const auto& g : ledger.guesses) arr.push_back({{"user_id", g.user_id}, {"day", g.day}, {"correct", g.correct}});
  return j.dump(2);
}

LedgerFile ledger_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.contains("ledger")) j = j["ledger"];
    LedgerFile f;
    f.duration_days = j.at("duration_days").get<int>();
    f.bot_count = j.at("bot_count").get<std::size_t>();
    for (const auto& g : j.at("guesses"))
      f.guesses.push_back({g.at("user_id").get<UserId>(), g.at("day").get<int>(), g.at("correct").get<bool>()});
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw OracleError(std::string("ledger: ") + e.what());
  }
}

LedgerFile load_ledger(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw OracleError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ledger_from_json(ss.str());
}

void save_ledger(const LedgerFile& ledger, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw OracleError("cannot write " + file.string());
  out << ledger_to_json(ledger) << '\n';
}

std::string scoreboard_to_json(const Scoreboard& s) {
  nlohmann::ordered_json j{{"hits", s.hits},         {"misses", s.misses}, {"guesses", s.guesses},
                           {"accuracy", s.accuracy}, {"speed", s.speed},   {"final_score", s.final_score}};
  return j.dump();
}

}  // namespace bothunt::oracle
