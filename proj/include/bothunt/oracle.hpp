#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bothunt/corpus.hpp"

namespace bothunt::oracle {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RepeatGuessError : public OracleError {
 public:
  explicit RepeatGuessError(UserId id)
      : OracleError("user " + std::to_string(id) + " was already guessed"), id_(id) {}
  UserId id() const { return id_; }

 private:
  UserId id_;
};

class ChallengeOverError : public OracleError {
 public:
  ChallengeOverError() : OracleError("challenge is over") {}
};

struct GuessRecord {
  UserId user_id = 0;
  int day = 0;
  bool correct = false;

  bool operator==(const GuessRecord&) const = default;
};

struct GuessOutcome {
  bool correct = false;
};

struct Scoreboard {
  int hits = 0;
  int misses = 0;
  int guesses = 0;
  double accuracy = 0.0;  // h - 0.25 m
  int speed = 0;          // days left when the last bot fell
  double final_score = 0.0;

  bool operator==(const Scoreboard&) const = default;
};

/// Accuracy and final score from a (hits, misses, speed) triple.
Scoreboard score_from_counts(int hits, int misses, int speed);

class ChallengeState {
 public:
  ChallengeState(std::set<UserId> bots, int duration_days);

  GuessOutcome submit_guess(UserId id);
  void advance_day();

  int duration_days() const { return duration_days_; }
  int current_day() const { return current_day_; }
  bool over() const { return current_day_ >= duration_days_; }
  const std::vector<GuessRecord>& ledger() const { return ledger_; }
  std::optional<int> all_found_day() const { return all_found_day_; }
  bool guessed(UserId id) const { return guessed_.contains(id); }
  std::size_t bot_count() const { return bots_.size(); }
  std::size_t bots_found() const { return found_; }
  Scoreboard scoreboard() const;

 private:
  std::set<UserId> bots_;
  int duration_days_;
  int current_day_ = 0;
  std::vector<GuessRecord> ledger_;
  std::set<UserId> guessed_;
  std::size_t found_ = 0;
  std::optional<int> all_found_day_;
};

ChallengeState create_challenge(const GroundTruth& truth, int duration_days);

/// Scoreboard recomputed from a ledger alone.
Scoreboard replay(const std::vector<GuessRecord>& ledger, std::size_t bot_count, int duration_days);

struct LedgerFile {
  int duration_days = 0;
  std::size_t bot_count = 0;
  std::vector<GuessRecord> guesses;
};

std::string ledger_to_json(const LedgerFile& ledger);
/// Accepts a bare ledger object or any object with a "ledger" member.
LedgerFile ledger_from_json(const std::string& text);
LedgerFile load_ledger(const std::filesystem::path& file);
void save_ledger(const LedgerFile& ledger, const std::filesystem::path& file);

std::string scoreboard_to_json(const Scoreboard& s);

}  // namespace bothunt::oracle
