#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "bothunt/corpus.hpp"

namespace bothunt::testing {

inline Tweet tweet(TweetId id, UserId user, Timestamp ts, std::string text) {
  Tweet t;
  t.tweet_id = id;
  t.user_id = user;
  t.timestamp = ts;
  t.text = std::move(text);
  return t;
}

inline UserAccount account(UserId id, std::string screen, std::string display = "") {
  UserAccount a;
  a.user_id = id;
  a.screen_name = std::move(screen);
  a.display_name = std::move(display);
  return a;
}

/// The default challenge (1000 users, 39 bots, seed 42), generated once.
inline const std::pair<Dataset, GroundTruth>& default_challenge() {
  static const auto challenge = [] {
    GeneratorConfig cfg;
    return generate_challenge(cfg, cfg.seed);
  }();
  return challenge;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("bothunt-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace bothunt::testing
