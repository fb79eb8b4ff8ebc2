#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bothunt/corpus.hpp"
#include "bothunt/text.hpp"

namespace bothunt {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using nlohmann::json;

namespace {

constexpr const char* kAccountsFile = "accounts.jsonl";
constexpr const char* kTweetsFile = "tweets.jsonl";
constexpr const char* kNetworkFile = "network.csv";
constexpr const char* kMetaFile = "meta.json";
constexpr const char* kNetworkHeader = "from_user,to_user,timestamp,weight";

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DatasetError("missing file: " + p.string());
  return in;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write: " + p.string());
  return out;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

UserAccount account_from_json(const json& j) {
  UserAccount a;
  a.user_id = j.at("user_id").get<UserId>();
  a.screen_name = get_or<std::string>(j, "screen_name", "");
  a.display_name = get_or<std::string>(j, "display_name", "");
  a.bio = get_or<std::string>(j, "bio", "");
  a.profile_image_ref = get_or<std::string>(j, "profile_image_ref", "");
  a.profile_url = get_or<std::string>(j, "profile_url", "");
  a.followers_count = get_or<std::int64_t>(j, "followers_count", 0);
  a.followings_count = get_or<std::int64_t>(j, "followings_count", 0);
  a.created_at = get_or<Timestamp>(j, "created_at", 0);
  a.sources = get_or<std::vector<std::string>>(j, "sources", {});
  a.active = get_or<bool>(j, "active", true);
  return a;
}

ojson account_to_json(const UserAccount& a) {
  ojson j;
  j["user_id"] = a.user_id;
  j["screen_name"] = a.screen_name;
  j["display_name"] = a.display_name;
  j["bio"] = a.bio;
  j["profile_image_ref"] = a.profile_image_ref;
  j["profile_url"] = a.profile_url;
  j["followers_count"] = a.followers_count;
  j["followings_count"] = a.followings_count;
  j["created_at"] = a.created_at;
  j["sources"] = a.sources;
  j["active"] = a.active;
  return j;
}

Tweet tweet_from_json(const json& j) {
  Tweet t;
  t.tweet_id = j.at("tweet_id").get<TweetId>();
  t.user_id = j.at("user_id").get<UserId>();
  t.timestamp = j.at("timestamp").get<Timestamp>();
  t.text = get_or<std::string>(j, "text", "");
  if (j.contains("hashtags") || j.contains("mentions") || j.contains("urls")) {
    t.hashtags = get_or<std::vector<std::string>>(j, "hashtags", {});
    t.mentions = get_or<std::vector<std::string>>(j, "mentions", {});
    t.urls = get_or<std::vector<std::string>>(j, "urls", {});
  } else {
    auto ent = text::extract_entities(t.text);
    t.hashtags = std::move(ent.hashtags);
    t.mentions = std::move(ent.mentions);
    t.urls = std::move(ent.urls);
  }
  t.is_retweet = get_or<bool>(j, "is_retweet", false);
  if (auto it = j.find("retweet_of"); it != j.end() && !it->is_null())
    t.retweet_of = it->get<UserId>();
  t.geo_enabled = get_or<bool>(j, "geo_enabled", false);
  t.language = get_or<std::string>(j, "language", "en");
  if (auto it = j.find("url_text"); it != j.end() && !it->is_null())
    t.url_text = it->get<std::string>();
  return t;
}

ojson tweet_to_json(const Tweet& t) {
  ojson j;
  j["tweet_id"] = t.tweet_id;
  j["user_id"] = t.user_id;
  j["timestamp"] = t.timestamp;
  j["text"] = t.text;
  j["hashtags"] = t.hashtags;
  j["mentions"] = t.mentions;
  j["urls"] = t.urls;
  j["is_retweet"] = t.is_retweet;
  j["retweet_of"] = t.retweet_of ? ojson(*t.retweet_of) : ojson(nullptr);
  j["geo_enabled"] = t.geo_enabled;
  j["language"] = t.language;
  j["url_text"] = t.url_text ? ojson(*t.url_text) : ojson(nullptr);
  return j;
}

template <typename T, typename Parse>
std::vector<T> read_jsonl(const fs::path& p, Parse parse, std::vector<LineIssue>& issues) {
  auto in = open_input(p);
  std::vector<T> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse(json::parse(line)));
    } catch (const std::exception& e) {
      issues.push_back({p.filename().string(), lineno, e.what()});
    }
  }
  return out;
}

bool parse_int(std::string_view s, std::int64_t& v) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<NetworkEvent> read_network(const fs::path& p, std::vector<LineIssue>& issues) {
  auto in = open_input(p);
  std::vector<NetworkEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != kNetworkHeader)
        issues.push_back({p.filename().string(), lineno, "expected header '" +
                                                            std::string(kNetworkHeader) + "'"});
      continue;
    }
    if (line.empty()) continue;
    std::int64_t fields[4];
    std::size_t n = 0;
    std::size_t start = 0;
    bool ok = true;
    while (ok && n < 4) {
      auto comma = line.find(',', start);
      auto piece = std::string_view(line).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      ok = parse_int(piece, fields[n++]);
      if (comma == std::string::npos) break;
      start = comma + 1;
      if (n == 4) ok = false;  // trailing extra column
    }
    if (!ok || n != 4) {
      issues.push_back({p.filename().string(), lineno, "expected 4 integer columns"});
      continue;
    }
    out.push_back({fields[0], fields[1], fields[2], static_cast<int>(fields[3])});
  }
  return out;
}

}  // namespace

Dataset load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw DatasetError("not a dataset directory: " + root.string());
  std::vector<LineIssue> issues;
  Dataset ds;
  ds.accounts = read_jsonl<UserAccount>(root / kAccountsFile, account_from_json, issues);
  ds.tweets = read_jsonl<Tweet>(root / kTweetsFile, tweet_from_json, issues);
  ds.network_events = read_network(root / kNetworkFile, issues);

  if (fs::exists(root / kMetaFile)) {
    try {
      std::ifstream in(root / kMetaFile);
      auto meta = json::parse(in);
      ds.duration_days = meta.at("duration_days").get<int>();
      ds.start_time = meta.at("start_time").get<Timestamp>();
      ds.topic_keywords = get_or<std::vector<std::string>>(meta, "topic_keywords", {});
    } catch (const std::exception& e) {
      issues.push_back({kMetaFile, 1, e.what()});
    }
  } else {
    // Without metadata the window is inferred from the tweets.
    Timestamp lo = 0, hi = 0;
    for (std::size_t i = 0; i < ds.tweets.size(); ++i) {
      lo = i == 0 ? ds.tweets[i].timestamp : std::min(lo, ds.tweets[i].timestamp);
      hi = i == 0 ? ds.tweets[i].timestamp : std::max(hi, ds.tweets[i].timestamp);
    }
    ds.start_time = lo - lo % kSecondsPerDay;
    ds.duration_days = static_cast<int>((hi - ds.start_time) / kSecondsPerDay) + 1;
  }

  if (!issues.empty()) throw ParseError(std::move(issues));
  ds.finalize();
  return ds;
}

void write_dataset(const Dataset& ds, const fs::path& root) {
  fs::create_directories(root);
  {
    auto out = open_output(root / kAccountsFile);
    for (const auto& a : ds.accounts) out << account_to_json(a).dump() << '\n';
  }
  {
    auto out = open_output(root / kTweetsFile);
    for (const auto& t : ds.tweets) out << tweet_to_json(t).dump() << '\n';
  }
  {
    auto out = open_output(root / kNetworkFile);
    out << kNetworkHeader << '\n';
    for (const auto& e : ds.network_events)
      out << e.from_user << ',' << e.to_user << ',' << e.timestamp << ',' << e.weight << '\n';
  }
  {
    ojson meta;
    meta["duration_days"] = ds.duration_days;
    meta["start_time"] = ds.start_time;
    meta["topic_keywords"] = ds.topic_keywords;
    auto out = open_output(root / kMetaFile);
    out << meta.dump(2) << '\n';
  }
}

namespace {

ojson config_to_json(const GeneratorConfig& c) {
  ojson j;
  j["n_users"] = c.n_users;
  j["n_bots"] = c.n_bots;
  j["family_mix"] = {{"amplifier", c.family_mix.amplifier},
                     {"infiltrator", c.family_mix.infiltrator},
                     {"ring", c.family_mix.ring}};
  j["duration_days"] = c.duration_days;
  j["human_rate_median"] = c.human_rate_median;
  j["human_rate_sigma"] = c.human_rate_sigma;
  j["human_gap_sigma"] = c.human_gap_sigma;
  j["flip_day"] = c.flip_day;
  j["start_time"] = c.start_time;
  j["network_only_fraction"] = c.network_only_fraction;
  j["seed"] = c.seed;
  return j;
}

GeneratorConfig config_from_json(const json& j) {
  GeneratorConfig c;
  c.n_users = get_or(j, "n_users", c.n_users);
  c.n_bots = get_or(j, "n_bots", c.n_bots);
  if (auto it = j.find("family_mix"); it != j.end()) {
    c.family_mix.amplifier = get_or(*it, "amplifier", c.family_mix.amplifier);
    c.family_mix.infiltrator = get_or(*it, "infiltrator", c.family_mix.infiltrator);
    c.family_mix.ring = get_or(*it, "ring", c.family_mix.ring);
  }
  c.duration_days = get_or(j, "duration_days", c.duration_days);
  c.human_rate_median = get_or(j, "human_rate_median", c.human_rate_median);
  c.human_rate_sigma = get_or(j, "human_rate_sigma", c.human_rate_sigma);
  c.human_gap_sigma = get_or(j, "human_gap_sigma", c.human_gap_sigma);
  c.flip_day = get_or(j, "flip_day", c.flip_day);
  c.start_time = get_or(j, "start_time", c.start_time);
  c.network_only_fraction = get_or(j, "network_only_fraction", c.network_only_fraction);
  c.seed = get_or(j, "seed", c.seed);
  return c;
}

}  // namespace

GeneratorConfig load_generator_config(const fs::path& file) {
  auto in = open_input(file);
  GeneratorConfig c;
  try {
    c = config_from_json(json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(file.string() + ": " + e.what());
  }
  c.validate();
  return c;
}

void write_ground_truth(const GroundTruth& gt, const fs::path& file) {
  ojson j;
  j["bot_ids"] = gt.bot_ids;
  ojson fam = ojson::object();
  for (const auto& [id, f] : gt.family_of) fam[std::to_string(id)] = to_string(f);
  j["family_of"] = fam;
  j["config"] = config_to_json(gt.config);
  j["seed"] = gt.seed;
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  auto out = open_output(file);
  out << j.dump(2) << '\n';
}

GroundTruth load_ground_truth(const fs::path& file) {
  auto in = open_input(file);
  GroundTruth gt;
  try {
    auto j = json::parse(in);
    gt.bot_ids = j.at("bot_ids").get<std::vector<UserId>>();
    std::sort(gt.bot_ids.begin(), gt.bot_ids.end());
    if (auto it = j.find("family_of"); it != j.end())
      for (const auto& [k, v] : it->items())
        gt.family_of[std::stoll(k)] = bot_family_from_string(v.get<std::string>());
    if (auto it = j.find("config"); it != j.end()) gt.config = config_from_json(*it);
    gt.seed = get_or<std::uint64_t>(j, "seed", 0);
  } catch (const std::exception& e) {
    throw DatasetError(file.string() + ": " + e.what());
  }
  return gt;
}

}  // namespace bothunt
