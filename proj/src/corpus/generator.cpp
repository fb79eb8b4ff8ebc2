#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

#include "bothunt/corpus.hpp"
#include "bothunt/random.hpp"
#include "bothunt/text.hpp"

namespace bothunt {

namespace {

using Strings = std::vector<std::string>;

const Strings kFirstNames = {
    "jenny", "mike", "sarah", "david", "laura", "chris", "emma", "james", "olivia", "daniel",
    "sophia", "ryan", "grace", "kevin", "hannah", "brian", "chloe", "jason", "megan", "eric",
    "rachel", "adam", "nicole", "tyler", "amber", "scott", "kayla", "jacob", "lisa", "aaron",
    "maria", "luis", "anna", "peter", "julia", "mark", "ella", "tom", "zoe", "sam"};
const Strings kLastNames = {
    "smith", "johnson", "brown", "miller", "davis", "garcia", "wilson", "moore", "taylor",
    "anderson", "thomas", "jackson", "white", "harris", "martin", "thompson", "lopez", "lee",
    "walker", "hall", "allen", "young", "king", "wright", "scott", "green", "baker", "adams",
    "nelson", "hill", "campbell", "mitchell", "roberts", "carter", "phillips", "evans", "turner",
    "torres", "parker", "collins"};
const Strings kNicknames = {"coffeeaddict", "runnergirl", "bookworm", "techguy", "dadjokes",
                            "sunnydays", "pizzalover", "nightowl", "hikerlife", "gamerzone",
                            "catmom", "dogdad", "beachbum", "musicfan", "foodiequeen"};

const Strings kHumanOpeners = {
    "", "", "", "honestly", "so", "just read that", "my doctor says", "wow", "today i learned",
    "reminder:", "ok but", "i really think", "friendly reminder", "lol", "fun fact:", "ugh",
    "can we talk about how", "yes!", "not gonna lie", "real talk:", "my mom says", "apparently",
    "news flash:", "hot take:", "seriously though", "in case you missed it", "fyi"};
const Strings kTopicSubjects = {"vaccines", "the measles vaccine", "vaccination",
                                "the mmr vaccine", "getting vaccinated", "vaccines for kids",
                                "the new vaccine schedule", "flu vaccines"};
const Strings kProPredicates = {"are safe", "save lives", "protect our kids", "are effective",
                                "are not dangerous", "are proven by science", "work",
                                "protect everyone", "keep us healthy", "are a great win"};
const Strings kAntiPredicates = {"are dangerous", "are poison", "cause harm", "are not safe",
                                 "are a scam", "are toxic", "are risky", "are pushed by corrupt "
                                 "companies", "are full of lies"};
const Strings kNeutralPredicates = {"are in the news again", "debate continues at school",
                                    "came up at dinner", "policy changes this week",
                                    "hearing is on tuesday", "are trending today"};
const Strings kOffSubjects = {"the game tonight", "this coffee", "traffic", "my cat", "the weather",
                              "that new movie", "monday", "my garden", "the concert",
                              "this pizza", "work today", "the new album", "my commute",
                              "the sunset", "this book"};
const Strings kOffPredicates = {"was amazing", "is terrible", "made me happy", "is the worst",
                                "was so fun", "is beautiful", "made me sad", "was awful",
                                "is great", "was good", "has me tired", "is everything"};
const Strings kOffTags = {"nba", "foodie", "tbt", "weather", "monday", "music", "movies",
                          "coffee", "catsoftwitter"};
const Strings kSpanish = {"las vacunas salvan vidas", "que buen dia hoy", "me encanta este cafe",
                          "partido increible esta noche", "las vacunas son importantes"};
const Strings kUrlTextNews = {"study finds vaccines safe and effective",
                              "health officials say vaccines save lives",
                              "report warns of harm and risk"};
const Strings kUrlTextLifestyle = {"local news story about school schedules",
                                   "great recipe for a healthy dinner",
                                   "review of an amazing new album"};
const Strings kUrlTextPaybot = {"cheap supplement deals click now limited offer",
                                "win a free phone survey", "hot singles in your area",
                                "dangerous toxic scam exposed shocking truth"};
const Strings kEndings = {".", "!", "?", "!!"};
const Strings kHumanSources = {"Twitter for iPhone", "Twitter for Android", "Twitter Web Client",
                               "TweetDeck", "Twitter for iPad"};
const Strings kBioFragments = {"mom of two.",      "coffee lover.",  "nurse.",    "teacher.",
                               "runner.",          "dog person.",    "dad.",      "engineer.",
                               "proud texan.",     "foodie.",        "student.",  "writer.",
                               "views are my own.", "sports fan.",   "gardener.", "traveler."};

enum class Persona { provax, antivax, neutral, offtopic };

struct FamilyTemplate {
  Strings openers;
  Strings tags;
  Strings images;
  Strings urls;
  Strings bio_fragments;
  std::string source;
  Timestamp created_center;
};

std::string join_words(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string hex_id(Rng& rng, int digits) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  for (int i = 0; i < digits; ++i) s += kHex[rng.integer(0, 15)];
  return s;
}

struct Draft {
  UserId user;
  Timestamp ts;
  std::string text;
  std::optional<UserId> retweet_of;
  bool geo = false;
  std::string language = "en";
  std::optional<std::string> url_text;
};

struct HumanProfile {
  Persona persona;
  double rate;          // tweets per day
  double topic_prob;    // share of on-topic tweets
  double pro_prob;      // on-topic tweet is pro with this probability
  double geo_prob;
  double link_prob;
  bool bilingual;
};

class ChallengeBuilder {
 public:
  ChallengeBuilder(const GeneratorConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}

  std::pair<Dataset, GroundTruth> build(std::uint64_t seed) {
    ds_.duration_days = cfg_.duration_days;
    ds_.start_time = cfg_.start_time;
    ds_.topic_keywords = {"vaccine", "vaccines", "vaccination", "vaccinate",
                          "vaccinated", "#vaccines", "#vaccination"};

    assign_roles();
    make_profiles();
    make_follow_graph();
    make_tweets();
    finalize_counts();

    ds_.finalize();
    truth_.config = cfg_;
    truth_.seed = seed;
    std::sort(truth_.bot_ids.begin(), truth_.bot_ids.end());
    return {std::move(ds_), std::move(truth_)};
  }

 private:
  // ---- roles ------------------------------------------------------------

  void assign_roles() {
    const int n = cfg_.n_users;
    for (int i = 0; i < n; ++i) ids_.push_back(1000 + static_cast<UserId>(i) * 3 + rng_.integer(0, 2));

    std::vector<std::size_t> order(ids_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng_.shuffle(order);

    // Largest-remainder apportionment of the family mix.
    const std::array<double, 3> mix = {cfg_.family_mix.amplifier, cfg_.family_mix.infiltrator,
                                       cfg_.family_mix.ring};
    std::array<int, 3> counts{};
    std::array<double, 3> rem{};
    int assigned = 0;
    for (int f = 0; f < 3; ++f) {
      const double exact = mix[static_cast<std::size_t>(f)] * cfg_.n_bots;
      counts[static_cast<std::size_t>(f)] = static_cast<int>(std::floor(exact));
      rem[static_cast<std::size_t>(f)] = exact - std::floor(exact);
      assigned += counts[static_cast<std::size_t>(f)];
    }
    while (assigned < cfg_.n_bots) {
      std::size_t best = 0;
      for (std::size_t f = 1; f < 3; ++f)
        if (rem[f] > rem[best]) best = f;
      ++counts[best];
      rem[best] = -1.0;
      ++assigned;
    }

    std::size_t next = 0;
    const BotFamily families[] = {BotFamily::amplifier, BotFamily::infiltrator, BotFamily::ring};
    for (std::size_t f = 0; f < 3; ++f)
      for (int k = 0; k < counts[f]; ++k) {
        const UserId id = ids_[order[next++]];
        family_[id] = families[f];
        truth_.bot_ids.push_back(id);
        truth_.family_of[id] = families[f];
      }
    for (auto id : ids_) {
      if (family_.contains(id)) continue;
      const double u = rng_.uniform();
      Persona p = u < 0.30 ? Persona::provax
                  : u < 0.45 ? Persona::antivax
                  : u < 0.70 ? Persona::neutral
                             : Persona::offtopic;
      HumanProfile hp;
      hp.persona = p;
      hp.rate = std::clamp(rng_.lognormal(std::log(cfg_.human_rate_median), cfg_.human_rate_sigma),
                           0.08, 30.0);
      hp.topic_prob = p == Persona::offtopic ? 0.05 : p == Persona::neutral ? 0.3 : 0.5;
      hp.pro_prob = p == Persona::provax ? 0.85 : p == Persona::antivax ? 0.15 : 0.5;
      hp.geo_prob = rng_.chance(0.3) ? 0.7 : 0.0;
      hp.link_prob = rng_.uniform(0.05, 0.3);
      hp.bilingual = rng_.chance(0.08);
      humans_[id] = hp;
      human_ids_.push_back(id);
      by_persona_[static_cast<int>(p)].push_back(id);
    }
    for (auto& [id, f] : family_) members_[static_cast<int>(f)].push_back(id);
    for (auto& [_, v] : members_) std::sort(v.begin(), v.end());

    const int extra = static_cast<int>(std::round(cfg_.n_users * cfg_.network_only_fraction));
    const UserId base = ids_.empty() ? 1000 : ids_.back() + 1000;
    for (int i = 0; i < extra; ++i) network_only_.push_back(base + i);

    templates_[BotFamily::amplifier] = {
        {"did you know", "science says that", "fact check:"},
        {"vaxfacts", "vaccineswork"},
        {"stock_8812.jpg", "stock_8813.jpg"},
        {"http://vaxtruth-daily.info/", "http://vax-truth-daily.info/home"},
        {"health news.", "facts first.", "science matters.", "share the truth."},
        "dlvr.it",
        cfg_.start_time - 120 * kSecondsPerDay};
    templates_[BotFamily::infiltrator] = {
        {"wake up people", "they don't want you to know", "i used to think"},
        {"antivax", "vaxfacts"},
        {"stock_3301.jpg", "stock_3302.jpg"},
        {"http://parents-voice.net/", "http://parentsvoice.net/about"},
        {"concerned parent.", "mom of three.", "ask questions.", "family first."},
        "Twitter Web Client",
        cfg_.start_time - 90 * kSecondsPerDay};
    templates_[BotFamily::ring] = {
        {"everyone should know", "please share this", "important:"},
        {"provax", "vaccineswork"},
        {"stock_5150.jpg", "stock_5151.jpg"},
        {"http://vaccine-allies.org/", "http://www.vaccine-allies.org"},
        {"public health advocate.", "protect kids.", "science!", "rt = endorsement."},
        "twitterfeed",
        cfg_.start_time - 60 * kSecondsPerDay};
  }

  // ---- profiles ---------------------------------------------------------

  void make_profiles() {
    for (auto id : ids_) {
      UserAccount a;
      a.user_id = id;
      if (auto it = family_.find(id); it != family_.end())
        bot_profile(a, it->second);
      else
        human_profile(a);
      accounts_[id] = a;
    }
  }

  std::string unique_name(std::string base) {
    std::string name = base;
    int k = 2;
    while (!used_names_.insert(name).second) name = base + "_" + std::to_string(k++);
    return name;
  }

  void human_profile(UserAccount& a) {
    const auto& first = rng_.pick(kFirstNames);
    const auto& last = rng_.pick(kLastNames);
    const double u = rng_.uniform();
    std::string screen;
    if (u < 0.30) screen = first + last;
    else if (u < 0.55) screen = first + "_" + last;
    else if (u < 0.70) screen = first.substr(0, 1) + last;
    else if (u < 0.78) screen = first + std::to_string(rng_.integer(1960, 2001));
    else if (u < 0.93) screen = rng_.pick(kNicknames);
    else screen = last + first.substr(0, 1);
    a.screen_name = unique_name(screen);
    a.display_name = rng_.chance(0.95) ? capitalize(first) + " " + capitalize(last) : "";

    if (rng_.chance(0.8)) {
      const auto n = rng_.integer(1, 3);
      std::vector<std::string> frags;
      for (int i = 0; i < n; ++i) frags.push_back(rng_.pick(kBioFragments));
      a.bio = frags[0];
      for (std::size_t i = 1; i < frags.size(); ++i) a.bio += " " + frags[i];
    }
    const double img = rng_.uniform();
    if (img < 0.01) a.profile_image_ref = "default_avatar.png";
    else if (img < 0.93) a.profile_image_ref = "img_" + hex_id(rng_, 12) + ".jpg";
    const double url = rng_.uniform();
    if (url < 0.02) a.profile_url = "http://www.cdc.gov/vaccines/";
    else if (url < 0.30) a.profile_url = "http://" + first + last + std::to_string(rng_.integer(1, 999)) + ".com";

    if (rng_.chance(0.05)) {
      a.sources = {"null"};
    } else {
      std::set<std::string> src;
      const auto n = rng_.integer(1, 3);
      for (int i = 0; i < n; ++i) src.insert(rng_.pick(kHumanSources));
      a.sources.assign(src.begin(), src.end());
    }
    a.created_at = cfg_.start_time - rng_.integer(200, 2500) * kSecondsPerDay;
    a.active = rng_.chance(0.97);
  }

  void bot_profile(UserAccount& a, BotFamily f) {
    const auto& tpl = templates_[f];
    const auto& word = rng_.pick(kFirstNames);
    a.screen_name = unique_name(word + std::to_string(rng_.integer(1000, 99999)));
    const auto& first = rng_.chance(0.5) ? word : rng_.pick(kFirstNames);
    a.display_name = capitalize(first) + " " + capitalize(rng_.pick(kLastNames));
    a.bio = rng_.pick(tpl.bio_fragments) + " " + rng_.pick(tpl.bio_fragments);
    a.profile_image_ref = rng_.pick(tpl.images);
    if (rng_.chance(0.8)) a.profile_url = rng_.pick(tpl.urls);
    a.sources = {tpl.source};
    a.created_at = tpl.created_center + rng_.integer(-10, 10) * kSecondsPerDay;
    a.active = true;
  }

  // ---- follow network ---------------------------------------------------

  void follow(UserId from, UserId to, Timestamp ts, int weight = 1) {
    if (from == to) return;
    ds_.network_events.push_back({from, to, ts, weight});
  }

  Timestamp pre_window() { return cfg_.start_time - rng_.integer(1, 300) * kSecondsPerDay - rng_.integer(0, 86399); }
  Timestamp in_window(int day_lo = 0, int day_hi = -1) {
    if (day_hi < 0) day_hi = cfg_.duration_days;
    return cfg_.start_time + rng_.integer(day_lo * kSecondsPerDay, day_hi * kSecondsPerDay - 1);
  }

  UserId popular_human() {
    if (human_ids_.empty()) return 0;
    // Preferential attachment over the initial follower counts.
    if (!attachment_.empty() && rng_.chance(0.7)) return attachment_[static_cast<std::size_t>(rng_.integer(0, static_cast<std::int64_t>(attachment_.size()) - 1))];
    return rng_.pick(human_ids_);
  }

  void make_follow_graph() {
    if (human_ids_.empty()) {
      for (auto id : members_[static_cast<int>(BotFamily::ring)])
        for (auto other : members_[static_cast<int>(BotFamily::ring)]) follow(id, other, pre_window());
      return;
    }
    // Initial human graph, homophilous by persona.
    for (auto id : human_ids_) {
      const auto& hp = humans_[id];
      const auto k = static_cast<int>(std::clamp(rng_.lognormal(std::log(25.0), 0.7), 3.0, 300.0));
      std::set<UserId> targets;
      for (int i = 0; i < k * 3 && static_cast<int>(targets.size()) < k; ++i) {
        UserId t = rng_.chance(0.6) ? rng_.pick(by_persona_[static_cast<int>(hp.persona)]) : popular_human();
        if (t != id) targets.insert(t);
      }
      for (auto t : targets) {
        follow(id, t, pre_window());
        attachment_.push_back(t);
        following_[id].push_back(t);
      }
      // Churn during the challenge.
      const auto adds = rng_.poisson(2.0);
      for (int i = 0; i < adds; ++i) {
        const UserId t = popular_human();
        if (t != id && !targets.contains(t)) {
          follow(id, t, in_window());
          targets.insert(t);
        }
      }
      const auto drops = rng_.poisson(0.5);
      for (int i = 0; i < drops && !following_[id].empty(); ++i)
        follow(id, rng_.pick(following_[id]), in_window(), 0);
      // A few humans follow bots back.
      if (!truth_.bot_ids.empty() && rng_.chance(0.03))
        follow(id, rng_.pick(truth_.bot_ids), in_window());
    }

    for (auto id : network_only_) {
      const auto k = rng_.integer(5, 20);
      for (int i = 0; i < k; ++i) follow(id, popular_human(), pre_window());
    }

    const auto& amps = members_[static_cast<int>(BotFamily::amplifier)];
    const auto& infs = members_[static_cast<int>(BotFamily::infiltrator)];
    const auto& ring = members_[static_cast<int>(BotFamily::ring)];
    const auto& anti = by_persona_[static_cast<int>(Persona::antivax)];
    const auto& pro = by_persona_[static_cast<int>(Persona::provax)];

    for (auto id : amps) {
      std::set<UserId> targets;
      const auto k = rng_.integer(100, 200);
      for (int i = 0; i < k; ++i) targets.insert(popular_human());
      for (auto t : targets) follow(id, t, pre_window());
      // Follow-churn: follow a batch, then drop most of it.
      std::vector<UserId> churn;
      for (int i = 0; i < rng_.integer(40, 60); ++i) {
        const UserId t = rng_.pick(human_ids_);
        if (targets.contains(t)) continue;
        const Timestamp ts = in_window(0, cfg_.duration_days - 1);
        follow(id, t, ts);
        if (rng_.chance(0.8))
          follow(id, t, std::min(ts + rng_.integer(3600, 5 * kSecondsPerDay), ds_.end_time() - 1), 0);
      }
      for (int i = 0; i < rng_.integer(2, 8); ++i) follow(rng_.pick(human_ids_), id, pre_window());
    }

    for (auto id : infs) {
      std::vector<UserId> anti_targets;
      for (int i = 0; i < rng_.integer(40, 80) && !anti.empty(); ++i) anti_targets.push_back(rng_.pick(anti));
      std::sort(anti_targets.begin(), anti_targets.end());
      anti_targets.erase(std::unique(anti_targets.begin(), anti_targets.end()), anti_targets.end());
      for (auto t : anti_targets) {
        follow(id, t, pre_window());
        if (rng_.chance(0.75)) follow(id, t, in_window(cfg_.flip_day, cfg_.duration_days), 0);
      }
      for (int i = 0; i < rng_.integer(30, 50) && !pro.empty(); ++i)
        follow(id, rng_.pick(pro), in_window(cfg_.flip_day, cfg_.duration_days));
      for (int i = 0; i < rng_.integer(5, 15) && !anti.empty(); ++i) follow(rng_.pick(anti), id, pre_window());
    }

    for (auto id : ring) {
      for (auto other : ring) follow(id, other, pre_window());
      for (int i = 0; i < rng_.integer(20, 40); ++i) follow(id, popular_human(), pre_window());
      for (int i = 0; i < rng_.integer(2, 6); ++i) follow(rng_.pick(human_ids_), id, pre_window());
    }
  }

  // ---- tweets -----------------------------------------------------------

  static double activity(int hour) {
    static constexpr double kCurve[24] = {0.25, 0.12, 0.06, 0.04, 0.04, 0.08, 0.2,  0.45,
                                          0.6,  0.65, 0.65, 0.7,  0.75, 0.7,  0.65, 0.65,
                                          0.7,  0.8,  0.9,  1.0,  1.0,  0.95, 0.8,  0.5};
    return kCurve[hour];
  }

  int hour_of(Timestamp t) const {
    return static_cast<int>(((t - cfg_.start_time) % kSecondsPerDay + kSecondsPerDay) % kSecondsPerDay / 3600);
  }

  std::string topic_sentence(Rng& rng, double pro_prob, const Strings& openers) {
    const double u = rng.uniform();
    const auto& pred = u < pro_prob ? rng.pick(kProPredicates)
                       : u < pro_prob + (1.0 - pro_prob) * 0.8 ? rng.pick(kAntiPredicates)
                                                               : rng.pick(kNeutralPredicates);
    return join_words({rng.pick(openers), rng.pick(kTopicSubjects), pred});
  }

  void push(Draft d) { drafts_.push_back(std::move(d)); }

  void human_tweets(UserId id) {
    const auto& hp = humans_[id];
    const double mean_activity = 0.55;
    const double gap_median = kSecondsPerDay / (hp.rate / mean_activity);
    // mu chosen so the log-normal gap has the requested mean.
    const double mu = std::log(gap_median) - 0.5 * cfg_.human_gap_sigma * cfg_.human_gap_sigma;
    const Timestamp end = ds_.end_time();
    Timestamp t = cfg_.start_time + rng_.integer(0, kSecondsPerDay);
    const auto& follows = following_[id];
    while (true) {
      t += std::max<Timestamp>(1, static_cast<Timestamp>(rng_.lognormal(mu, cfg_.human_gap_sigma)));
      if (t >= end) break;
      if (!rng_.chance(activity(hour_of(t)))) continue;

      Draft d{id, t, {}, std::nullopt, rng_.chance(hp.geo_prob), "en", std::nullopt};
      if (hp.bilingual && rng_.chance(0.3)) {
        d.language = "es";
        d.text = rng_.pick(kSpanish);
        if (rng_.chance(0.3)) d.text += " #vacunas";
        push(std::move(d));
        continue;
      }
      if (!follows.empty() && rng_.chance(0.1)) {
        const UserId src = rng_.pick(follows);
        d.retweet_of = src;
        d.text = "RT @" + accounts_[src].screen_name + ": " +
                 (rng_.chance(humans_[src].topic_prob)
                      ? topic_sentence(rng_, humans_[src].pro_prob, kHumanOpeners)
                      : join_words({rng_.pick(kOffSubjects), rng_.pick(kOffPredicates)}));
        push(std::move(d));
        continue;
      }
      std::string body;
      bool on_topic = rng_.chance(hp.topic_prob);
      if (on_topic) {
        body = topic_sentence(rng_, hp.pro_prob, kHumanOpeners);
        if (rng_.chance(0.4)) {
          const double v = rng_.uniform();
          body += v < 0.5 ? " #vaccines" : v < 0.7 ? " #measles"
                  : hp.persona == Persona::antivax ? " #antivax" : " #vaccineswork";
        }
      } else {
        body = join_words({rng_.pick(kHumanOpeners), rng_.pick(kOffSubjects), rng_.pick(kOffPredicates)});
        if (rng_.chance(0.3)) body += " #" + rng_.pick(kOffTags);
      }
      if (!follows.empty() && rng_.chance(0.15)) body = "@" + accounts_[rng_.pick(follows)].screen_name + " " + body;
      const double ending = rng_.uniform();
      if (ending < 0.35) body += rng_.pick(kEndings);
      if (rng_.chance(hp.link_prob)) {
        body += " http://t.co/" + hex_id(rng_, 8);
        d.url_text = rng_.pick(on_topic ? kUrlTextNews : kUrlTextLifestyle);
      }
      d.text = body;
      push(std::move(d));
    }
  }

  // Regular cadence with small uniform jitter inside a daily active shift.
  // Callers keep period +- jitter inside one power-of-two band.
  std::vector<Timestamp> cadence(Timestamp period, Timestamp jitter, int shift_start_hour, int shift_hours) {
    std::vector<Timestamp> out;
    for (int day = 0; day < cfg_.duration_days; ++day) {
      const Timestamp begin = cfg_.start_time + day * kSecondsPerDay + shift_start_hour * 3600 + rng_.integer(0, 120);
      const Timestamp stop = std::min(begin + shift_hours * 3600, ds_.end_time() - 1);
      for (Timestamp t = begin; t < stop; t += period + rng_.integer(-jitter, jitter)) out.push_back(t);
    }
    return out;
  }

  void amplifier_tweets(UserId id, const FamilyTemplate& tpl) {
    const Timestamp period = rng_.integer(200, 250);  // gaps in [128, 256)
    const int shift_start = static_cast<int>(rng_.integer(7, 11));
    const int shift_hours = static_cast<int>(rng_.integer(3, 5));
    const Strings langs = {"en", "en", "en", "es", "pt"};
    for (auto t : cadence(period, 5, shift_start, shift_hours)) {
      Draft d{id, t, {}, std::nullopt, false, rng_.pick(langs), std::nullopt};
      std::string body = join_words({rng_.pick(tpl.openers), rng_.pick(kTopicSubjects),
                                     rng_.pick(kProPredicates)}) + "!";
      if (!human_ids_.empty() && rng_.chance(0.3))
        body = "@" + accounts_[popular_human()].screen_name + " " + body;
      body += " #" + rng_.pick(tpl.tags);
      if (rng_.chance(0.5)) body += " #vaccines";
      body += " http://vx.to/" + hex_id(rng_, 6);
      d.url_text = rng_.pick(kUrlTextPaybot);
      d.text = body;
      push(std::move(d));
    }
  }

  void infiltrator_tweets(UserId id, const FamilyTemplate& tpl) {
    const Timestamp period = rng_.integer(2700, 3900);  // gaps in [2048, 4096)
    const int shift_start = static_cast<int>(rng_.integer(6, 9));
    const Timestamp flip = cfg_.start_time + cfg_.flip_day * kSecondsPerDay;
    const auto& anti = by_persona_[static_cast<int>(Persona::antivax)];
    for (auto t : cadence(period, 60, shift_start, 14)) {
      Draft d{id, t, {}, std::nullopt, false, "en", std::nullopt};
      const bool before = t < flip;
      std::string body;
      if (rng_.chance(0.15)) {
        body = join_words({rng_.pick(tpl.openers), rng_.pick(kOffSubjects), rng_.pick(kOffPredicates)});
      } else {
        body = join_words({rng_.pick(tpl.openers), rng_.pick(kTopicSubjects),
                           before ? rng_.pick(kAntiPredicates) : rng_.pick(kProPredicates)});
        body += before ? " #antivax" : " #vaxfacts";
        if (rng_.chance(0.4)) body += " #vaccines";
      }
      if (!anti.empty() && rng_.chance(0.2)) body = "@" + accounts_[rng_.pick(anti)].screen_name + " " + body;
      d.text = body;
      push(std::move(d));
    }
  }

  void ring_tweets(UserId id, const FamilyTemplate& tpl) {
    const Timestamp period = rng_.integer(1100, 2000);  // gaps in [1024, 2048)
    const int shift_start = static_cast<int>(rng_.integer(8, 12));
    const auto& ring = members_[static_cast<int>(BotFamily::ring)];
    for (auto t : cadence(period, 30, shift_start, 12)) {
      Draft d{id, t, {}, std::nullopt, false, "en", std::nullopt};
      std::string body = join_words({rng_.pick(tpl.openers), rng_.pick(kTopicSubjects),
                                     rng_.pick(kProPredicates)}) + " #" + rng_.pick(tpl.tags);
      if (ring.size() > 1 && rng_.chance(0.6)) {
        UserId src = rng_.pick(ring);
        while (src == id) src = rng_.pick(ring);
        d.retweet_of = src;
        d.text = "RT @" + accounts_[src].screen_name + ": " + body;
      } else {
        if (ring.size() > 1 && rng_.chance(0.3)) {
          UserId other = rng_.pick(ring);
          if (other != id) body = "@" + accounts_[other].screen_name + " " + body;
        }
        if (rng_.chance(0.2)) {
          body += " http://allies.to/" + hex_id(rng_, 6);
          d.url_text = kUrlTextNews[0];
        }
        d.text = body;
      }
      push(std::move(d));
    }
  }

  void make_tweets() {
    for (auto id : ids_) {
      if (auto it = family_.find(id); it != family_.end()) {
        const auto& tpl = templates_[it->second];
        switch (it->second) {
          case BotFamily::amplifier: amplifier_tweets(id, tpl); break;
          case BotFamily::infiltrator: infiltrator_tweets(id, tpl); break;
          case BotFamily::ring: ring_tweets(id, tpl); break;
        }
      } else {
        human_tweets(id);
      }
    }
    std::stable_sort(drafts_.begin(), drafts_.end(), [](const Draft& a, const Draft& b) {
      return std::tie(a.ts, a.user) < std::tie(b.ts, b.user);
    });
    TweetId next_id = 500000000;
    ds_.tweets.reserve(drafts_.size());
    for (auto& d : drafts_) {
      Tweet t;
      t.tweet_id = next_id++;
      t.user_id = d.user;
      t.timestamp = d.ts;
      t.text = std::move(d.text);
      auto ent = text::extract_entities(t.text);
      t.hashtags = std::move(ent.hashtags);
      t.mentions = std::move(ent.mentions);
      t.urls = std::move(ent.urls);
      t.is_retweet = d.retweet_of.has_value();
      t.retweet_of = d.retweet_of;
      t.geo_enabled = d.geo;
      t.language = std::move(d.language);
      t.url_text = std::move(d.url_text);
      ds_.tweets.push_back(std::move(t));
    }
  }

  void finalize_counts() {
    // Profile counts include followers outside the sampled network.
    Dataset probe;
    probe.network_events = ds_.network_events;
    probe.start_time = ds_.start_time;
    probe.duration_days = ds_.duration_days;
    const auto g = network_snapshot(probe, ds_.duration_days);
    const auto in = g.in_degrees();
    for (auto id : ids_) {
      auto& a = accounts_[id];
      const auto it_in = in.find(id);
      const auto it_out = g.out.find(id);
      const std::int64_t indeg = it_in == in.end() ? 0 : static_cast<std::int64_t>(it_in->second);
      const std::int64_t outdeg = it_out == g.out.end() ? 0 : static_cast<std::int64_t>(it_out->second.size());
      if (family_.contains(id)) {
        a.followers_count = indeg + rng_.integer(0, 40);
        a.followings_count = outdeg + rng_.integer(300, 1500);
      } else {
        a.followers_count = indeg + static_cast<std::int64_t>(rng_.lognormal(std::log(150.0), 1.2));
        a.followings_count = outdeg + static_cast<std::int64_t>(rng_.lognormal(std::log(200.0), 1.0));
      }
      ds_.accounts.push_back(a);
    }
  }

  const GeneratorConfig& cfg_;
  Rng rng_;
  Dataset ds_;
  GroundTruth truth_;
  std::vector<UserId> ids_;
  std::vector<UserId> human_ids_;
  std::vector<UserId> network_only_;
  std::map<UserId, BotFamily> family_;
  std::map<int, std::vector<UserId>> members_;
  std::map<int, std::vector<UserId>> by_persona_;
  std::map<UserId, HumanProfile> humans_;
  std::map<BotFamily, FamilyTemplate> templates_;
  std::map<UserId, UserAccount> accounts_;
  std::map<UserId, std::vector<UserId>> following_;
  std::vector<UserId> attachment_;
  std::set<std::string> used_names_;
  std::vector<Draft> drafts_;
};

}  // namespace

std::pair<Dataset, GroundTruth> generate_challenge(const GeneratorConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ChallengeBuilder builder(cfg, seed);
  return builder.build(seed);
}

}  // namespace bothunt
