#include <algorithm>
#include <charconv>

#include <json.hpp>

#include "bothunt/workbench.hpp"

namespace bothunt::workbench {

namespace {

using json = nlohmann::ordered_json;

struct HttpError : std::runtime_error {
  HttpError(int status, const std::string& msg) : std::runtime_error(msg), status(status) {}
  int status;
};

ApiResponse reply(int status, const json& body) { return {status, body.dump()}; }
ApiResponse error(int status, const std::string& msg) { return reply(status, json{{"error", msg}}); }

std::optional<long long> parse_int(const std::string& s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

long long query_int(const ApiRequest& req, const std::string& key, long long fallback, long long lo, long long hi) {
  auto it = req.query.find(key);
  if (it == req.query.end()) return fallback;
  auto v = parse_int(it->second);
  if (!v || *v < lo || *v > hi)
    throw HttpError(400, "query parameter " + key + " must be an integer in [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
  return *v;
}

json parse_body(const ApiRequest& req) {
  try {
    auto j = json::parse(req.body.empty() ? "{}" : req.body);
    if (!j.is_object()) throw HttpError(400, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw HttpError(400, std::string("bad JSON body: ") + e.what());
  }
}

UserId body_user(const json& j) {
  if (!j.contains("user_id") || !j["user_id"].is_number_integer()) throw HttpError(400, "user_id (integer) required");
  return j["user_id"].get<UserId>();
}

json scoreboard_json(const oracle::Scoreboard& s) {
  return {{"hits", s.hits},         {"misses", s.misses}, {"guesses", s.guesses},
          {"accuracy", s.accuracy}, {"speed", s.speed},   {"final_score", s.final_score}};
}

json label_json(const LabelRecord& r) {
  return {{"user_id", r.user_id},   {"label", to_string(r.label)}, {"flags", r.flags},
          {"provenance", to_string(r.provenance)}, {"timestamp", r.timestamp}, {"sequence", r.sequence}};
}

json explanation_json(const Explanation& e) {
  json entries = json::array();
  for (const auto& x : e.entries)
    entries.push_back({{"feature", x.feature}, {"raw", x.raw}, {"z", x.z}, {"contribution", x.contribution}});
  return {{"user_id", e.user_id}, {"model_based", e.model_based}, {"suspicion", e.suspicion}, {"entries", entries}};
}

json report_json(const StageReport& r) {
  json stats = json::object();
  for (const auto& [k, v] : r.stats) stats[k] = v;
  return {{"stage", to_string(r.stage)}, {"seconds", r.seconds}, {"artifact_hash", r.artifact_hash}, {"stats", stats}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

// ---- handlers ---------------------------------------------------------------

ApiResponse get_session(const Session& s, bool busy) {
  json stages = json::object();
  for (auto st : kStages) {
    json entry{{"run", s.has(st)}, {"stale", s.stale(st)}};
    if (s.has(st)) entry["artifact_hash"] = s.artifact_hash(st);
    stages[to_string(st)] = entry;
  }
  json labels{{"bot", s.known(Label::bot).size()}, {"human", s.known(Label::human).size()}};
  json oracle_info{{"attached", s.has_oracle()}};
  if (s.has_oracle()) {
    const auto& c = s.challenge();
    oracle_info["day"] = c.current_day();
    oracle_info["duration_days"] = c.duration_days();
    oracle_info["over"] = c.over();
    oracle_info["scoreboard"] = scoreboard_json(c.scoreboard());
  }
  return reply(200, json{{"accounts", s.dataset().accounts.size()},
                         {"tweets", s.dataset().tweets.size()},
                         {"network_events", s.dataset().network_events.size()},
                         {"stages", stages},
                         {"labels", labels},
                         {"oracle", oracle_info},
                         {"busy", busy}});
}

ApiResponse list_users(const Session& s, const ApiRequest& req) {
  const auto& ds = s.dataset();
  const features::FeatureMatrix* m = s.has(Stage::features) ? &s.matrix() : nullptr;

  std::string sort = req.query.contains("sort") ? req.query.at("sort") : "user_id";
  std::string dir = req.query.contains("dir") ? req.query.at("dir") : "asc";
  if (dir != "asc" && dir != "desc") throw HttpError(400, "dir must be asc or desc");
  const auto page = query_int(req, "page", 0, 0, 1'000'000);
  const auto page_size = query_int(req, "page_size", 50, 1, 1000);
  std::optional<Label> label_filter;
  if (auto it = req.query.find("label"); it != req.query.end()) {
    try {
      label_filter = label_from_string(it->second);
    } catch (const WorkbenchError& e) {
      throw HttpError(400, e.what());
    }
  }
  const std::string flag_filter = req.query.contains("flag") ? req.query.at("flag") : "";

  std::vector<const UserAccount*> rows;
  for (const auto& a : ds.accounts) {
    const auto rec = s.label_of(a.user_id);
    if (label_filter && (rec ? rec->label : Label::unknown) != *label_filter) continue;
    if (!flag_filter.empty() &&
        (!rec || std::find(rec->flags.begin(), rec->flags.end(), flag_filter) == rec->flags.end()))
      continue;
    rows.push_back(&a);
  }

  auto label_name = [&](UserId id) {
    auto rec = s.label_of(id);
    return to_string(rec ? rec->label : Label::unknown);
  };
  auto feature_value = [&](std::size_t col, UserId id) {
    return m->raw(static_cast<Eigen::Index>(*m->row_of(id)), static_cast<Eigen::Index>(col));
  };
  const bool desc = dir == "desc";
  auto order = [&](auto key) {
    std::stable_sort(rows.begin(), rows.end(), [&](const UserAccount* a, const UserAccount* b) {
      const auto ka = key(*a);
      const auto kb = key(*b);
      if (ka == kb) return a->user_id < b->user_id;
      return desc ? kb < ka : ka < kb;
    });
  };
  if (sort == "user_id") {
    order([](const UserAccount& a) { return a.user_id; });
  } else if (sort == "screen_name") {
    order([](const UserAccount& a) { return a.screen_name; });
  } else if (sort == "display_name") {
    order([](const UserAccount& a) { return a.display_name; });
  } else if (sort == "followers_count") {
    order([](const UserAccount& a) { return a.followers_count; });
  } else if (sort == "active") {
    order([](const UserAccount& a) { return a.active ? 1 : 0; });
  } else if (sort == "label") {
    order([&](const UserAccount& a) { return label_name(a.user_id); });
  } else if (features::feature_index(sort)) {
    if (!m) throw HttpError(409, "sorting by a feature needs the features stage");
    const auto col = m->column(sort);
    order([&](const UserAccount& a) { return feature_value(col, a.user_id); });
  } else {
    throw HttpError(400, "unknown sort column '" + sort + "'");
  }

  json out_rows = json::array();
  const auto begin = static_cast<std::size_t>(page * page_size);
  for (std::size_t i = begin; i < rows.size() && i < begin + static_cast<std::size_t>(page_size); ++i) {
    const auto& a = *rows[i];
    const auto rec = s.label_of(a.user_id);
    json row{{"user_id", a.user_id},
             {"screen_name", a.screen_name},
             {"display_name", a.display_name},
             {"bio_excerpt", a.bio.substr(0, 80)},
             {"image", a.profile_image_ref},
             {"active", a.active},
             {"label", to_string(rec ? rec->label : Label::unknown)},
             {"flags", rec ? rec->flags : std::vector<std::string>{}}};
    if (m) {
      json feats = json::object();
      for (std::size_t j = 0; j < m->columns.size(); ++j) feats[m->columns[j]] = feature_value(j, a.user_id);
      row["profile_completeness"] = feats["profile_completeness"];
      row["follower_ratio"] = feats["follower_ratio"];
      row["features"] = feats;
    }
    out_rows.push_back(row);
  }
  return reply(200, json{{"total", rows.size()},
                         {"page", page},
                         {"page_size", page_size},
                         {"sort", sort},
                         {"dir", dir},
                         {"rows", out_rows}});
}

ApiResponse get_user(const Session& s, UserId id, const ApiRequest& req) {
  const auto& ds = s.dataset();
  const auto* a = ds.find_account(id);
  if (!a) throw HttpError(404, "unknown user " + std::to_string(id));
  json profile{{"user_id", a->user_id},
               {"screen_name", a->screen_name},
               {"display_name", a->display_name},
               {"bio", a->bio},
               {"profile_image_ref", a->profile_image_ref},
               {"profile_url", a->profile_url},
               {"followers_count", a->followers_count},
               {"followings_count", a->followings_count},
               {"created_at", a->created_at},
               {"sources", a->sources},
               {"active", a->active}};

  const auto rec = s.label_of(id);
  json out{{"profile", profile}, {"label", rec ? label_json(*rec) : json(nullptr)}};

  const auto [b, e] = ds.tweet_range(id);
  const auto limit = static_cast<std::size_t>(query_int(req, "tweets", 20, 0, 1000));
  json tweets = json::array();
  for (auto i = b; i < e && i - b < limit; ++i) {
    const auto& t = ds.tweets[i];
    tweets.push_back({{"tweet_id", t.tweet_id},
                      {"timestamp", t.timestamp},
                      {"text", t.text},
                      {"is_retweet", t.is_retweet},
                      {"language", t.language}});
  }
  out["tweet_count"] = e - b;
  out["tweets"] = tweets;

  json series = json::array();
  const int step = std::max(1, s.config().features.snapshot_interval_days);
  for (int day = 0; day <= ds.duration_days; day += step) {
    const auto g = network_snapshot(ds, day);
    const auto in = g.in_degrees();
    auto it_in = in.find(id);
    auto it_out = g.out.find(id);
    series.push_back({{"day", day},
                      {"followers", it_in == in.end() ? 0 : it_in->second},
                      {"followings", it_out == g.out.end() ? 0 : it_out->second.size()}});
  }
  out["network"] = series;

  if (s.has(Stage::features)) {
    const auto& m = s.matrix();
    const auto r = static_cast<Eigen::Index>(*m.row_of(id));
    json feats = json::array();
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      feats.push_back({{"name", m.columns[j]}, {"raw", m.raw(r, c)}, {"z", m.z(r, c)}, {"missing", m.missing(r, c)}});
    }
    out["features"] = feats;
    const auto k = static_cast<std::size_t>(query_int(req, "k", 5, 0, 1000));
    out["explanation"] = explanation_json(s.explain_user(id, k));
  } else {
    out["features"] = nullptr;
    out["explanation"] = nullptr;
  }
  return reply(200, out);
}

ApiResponse get_suspects(const Session& s, const ApiRequest& req) {
  if (!s.has(Stage::outliers)) throw HttpError(409, "suspects need the cluster and outliers stages");
  const auto limit = static_cast<std::size_t>(query_int(req, "limit", 30, 0, 100000));
  json items = json::array();
  for (const auto& x : s.suspects(limit)) {
    json reasons = json::array();
    for (const auto& e : s.explain_user(x.user_id, 3).entries) reasons.push_back(e.feature);
    const auto* a = s.dataset().find_account(x.user_id);
    items.push_back({{"user_id", x.user_id},
                     {"screen_name", a ? a->screen_name : ""},
                     {"score", x.score},
                     {"cluster_bot_fraction", x.cluster_bot_fraction},
                     {"outlier", x.outlier},
                     {"similarity", x.similarity},
                     {"reasons", reasons}});
  }
  return reply(200, json{{"limit", limit}, {"suspects", items}});
}

ApiResponse post_label(Session& s, const ApiRequest& req) {
  const auto j = parse_body(req);
  const UserId id = body_user(j);
  if (!j.contains("label") || !j["label"].is_string()) throw HttpError(400, "label (string) required");
  Label label;
  Provenance prov = Provenance::analyst;
  std::vector<std::string> flags;
  try {
    label = label_from_string(j["label"].get<std::string>());
    if (j.contains("provenance")) prov = provenance_from_string(j["provenance"].get<std::string>());
    if (j.contains("flags")) flags = j["flags"].get<std::vector<std::string>>();
  } catch (const WorkbenchError& e) {
    throw HttpError(400, e.what());
  } catch (const json::exception&) {
    throw HttpError(400, "flags must be a list of strings and provenance a string");
  }
  return reply(200, label_json(s.set_label(id, label, std::move(flags), prov)));
}

ApiResponse post_guess(Session& s, const ApiRequest& req) {
  const UserId id = body_user(parse_body(req));
  if (!s.has_oracle()) throw HttpError(409, "no oracle attached");
  const auto outcome = s.guess(id);
  return reply(200, json{{"user_id", id},
                         {"correct", outcome.correct},
                         {"day", s.challenge().current_day()},
                         {"scoreboard", scoreboard_json(s.challenge().scoreboard())}});
}

}  // namespace

bool Api::busy() const { return busy_.load(); }

ApiResponse Api::handle(const ApiRequest& req) {
  const bool mutation = req.method == "POST";
  // status polls answer at once while a mutation runs
  if (!mutation && busy_.load() && split_path(req.path) == std::vector<std::string>{"api", "session"})
    return reply(200, json{{"busy", true}});
  std::unique_lock lock(mutex_, std::defer_lock);
  if (mutation) {
    if (!lock.try_lock()) return error(409, "busy: another mutation is running");
  } else {
    lock.lock();
  }
  struct BusyFlag {
    std::atomic<bool>& flag;
    bool set;
    ~BusyFlag() {
      if (set) flag.store(false);
    }
  } guard{busy_, mutation};
  if (mutation) busy_.store(true);
  try {
    return dispatch(req, mutation);
  } catch (const HttpError& e) {
    return error(e.status, e.what());
  } catch (const UnknownUserError& e) {
    return error(404, e.what());
  } catch (const DependencyError& e) {
    return error(409, e.what());
  } catch (const oracle::RepeatGuessError& e) {
    return error(409, e.what());
  } catch (const oracle::ChallengeOverError& e) {
    return error(409, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

ApiResponse Api::dispatch(const ApiRequest& req, bool) {
  const auto parts = split_path(req.path);
  const auto& m = req.method;
  if (parts.empty() || parts[0] != "api") throw HttpError(404, "no route " + req.path);

  if (parts.size() == 2) {
    const auto& what = parts[1];
    if (m == "GET" && what == "session") return get_session(session_, false);
    if (m == "GET" && what == "users") return list_users(session_, req);
    if (m == "GET" && what == "suspects") return get_suspects(session_, req);
    if (m == "GET" && what == "scoreboard") {
      if (!session_.has_oracle()) throw HttpError(409, "no oracle attached");
      const auto& c = session_.challenge();
      auto body = scoreboard_json(c.scoreboard());
      body["day"] = c.current_day();
      body["duration_days"] = c.duration_days();
      return reply(200, body);
    }
    if (m == "POST" && what == "labels") return post_label(session_, req);
    if (m == "POST" && what == "guess") return post_guess(session_, req);
  }
  if (parts.size() == 3) {
    if (m == "GET" && parts[1] == "users") {
      const auto id = parse_int(parts[2]);
      if (!id) throw HttpError(404, "unknown user " + parts[2]);
      return get_user(session_, *id, req);
    }
    if (m == "POST" && parts[1] == "pipeline") {
      Stage st;
      try {
        st = stage_from_string(parts[2]);
      } catch (const WorkbenchError& e) {
        throw HttpError(404, e.what());
      }
      return reply(200, report_json(session_.run_stage(st)));
    }
    if (m == "POST" && parts[1] == "day" && parts[2] == "advance") {
      if (!session_.has_oracle()) throw HttpError(409, "no oracle attached");
      session_.challenge().advance_day();
      return reply(200, json{{"day", session_.challenge().current_day()}});
    }
  }
  throw HttpError(404, "no route " + m + " " + req.path);
}

}  // namespace bothunt::workbench
