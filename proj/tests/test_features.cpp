#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <doctest.h>

#include "bothunt/features.hpp"
#include "bothunt/lexicon.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bothunt;
using namespace bothunt::features;

namespace {

SentimentLexicon lexicon_of(const std::string& text) {
  std::istringstream in(text);
  return SentimentLexicon::parse(in);
}

std::vector<Tweet> tweets_at(const std::vector<Timestamp>& times) {
  std::vector<Tweet> out;
  for (std::size_t i = 0; i < times.size(); ++i)
    out.push_back(testing::tweet(static_cast<TweetId>(i + 1), 1, times[i], "t"));
  return out;
}

struct SyntaxCount {
  double hashtags = 0, mentions = 0, links = 0, special = 0;
  int ending = 0;  // 0 none, 1 punct, 2 hashtag, 3 link
};

// Character-level recount of one tweet text.
SyntaxCount recount(const std::string& text) {
  SyntaxCount c;
  std::istringstream in(text);
  std::string tok, last;
  while (in >> tok) {
    last = tok;
    const bool link = tok.rfind("http://", 0) == 0 || tok.rfind("https://", 0) == 0;
    if (link) {
      c.links += 1;
      continue;
    }
    if (tok.size() > 1 && (tok[0] == '#' || tok[0] == '@') &&
        (std::isalnum(static_cast<unsigned char>(tok[1])) || tok[1] == '_'))
      (tok[0] == '#' ? c.hashtags : c.mentions) += 1;
    for (char ch : tok)
      if (std::ispunct(static_cast<unsigned char>(ch)) && ch != '#' && ch != '@') c.special += 1;
  }
  if (!last.empty()) {
    if (last.rfind("http://", 0) == 0 || last.rfind("https://", 0) == 0)
      c.ending = 3;
    else if (last.size() > 1 && last[0] == '#')
      c.ending = 2;
    else if (std::ispunct(static_cast<unsigned char>(last.back())))
      c.ending = 1;
  }
  return c;
}

const FeatureMatrix& default_matrix() {
  static const FeatureMatrix m = [] {
    const auto& ds = testing::default_challenge().first;
    FeatureContext ctx(ds, SentimentLexicon::builtin());
    return ctx.assemble({});
  }();
  return m;
}

}  // namespace

TEST_SUITE("features.sentiment") {
  TEST_CASE("mean of matched weights") {
    const auto lex = lexicon_of("save\t0.8\nlives\t0.6\n");
    CHECK(score_sentiment("vaccines save lives", lex) == doctest::Approx(0.7));
    CHECK(score_sentiment("", lex) == 0.0);
    CHECK(score_sentiment("nothing here", lex) == 0.0);
  }

  TEST_CASE("negation flips within two tokens") {
    const auto lex = lexicon_of("safe\t0.9\n[negation]\nnot\n");
    CHECK(score_sentiment("not safe", lex) == doctest::Approx(-0.9));
    CHECK(score_sentiment("not very safe", lex) == doctest::Approx(-0.9));
    CHECK(score_sentiment("not so very safe", lex) == doctest::Approx(0.9));
    CHECK(score_sentiment("Safe!", lex) == doctest::Approx(0.9));
  }

  TEST_CASE("lexicon format and range check") {
    const auto lex = lexicon_of("# comment\n\nGood\t0.5\nbad\t-0.5\n[negation]\nnever\nNOT\n");
    CHECK(lex.weights.size() == 2);
    CHECK(lex.weights.at("good") == 0.5);
    CHECK(lex.negations == std::set<std::string>{"never", "not"});
    CHECK_THROWS(lexicon_of("x\t1.5\n"));
    CHECK_THROWS(lexicon_of("no tab here\n"));
  }

  TEST_CASE("builtin lexicon weights lie in [-1,1]") {
    const auto& lex = SentimentLexicon::builtin();
    CHECK(lex.weights.size() > 20);
    CHECK_FALSE(lex.negations.empty());
    for (const auto& [_, w] : lex.weights) {
      CHECK(w >= -1.0);
      CHECK(w <= 1.0);
    }
  }
}

TEST_SUITE("features.syntax") {
  TEST_CASE("average hashtags over two tweets") {
    auto a = testing::tweet(1, 1, 0, "#x hi");
    a.hashtags = {"x"};
    auto b = testing::tweet(2, 1, 1, "#x #y #z");
    b.hashtags = {"x", "y", "z"};
    const std::vector<Tweet> ts = {a, b};
    CHECK(syntax_features(ts).get("avg_hashtags") == 2.0);
  }

  TEST_CASE("all retweets") {
    auto ts = tweets_at({1, 2, 3});
    for (auto& t : ts) {
      t.is_retweet = true;
      t.retweet_of = 9;
    }
    CHECK(syntax_features(ts).get("retweet_fraction") == 1.0);
  }

  TEST_CASE("empty history is all zeros and masked") {
    const auto v = syntax_features({});
    for (const auto& name : v.names()) {
      CHECK(v.get(name) == 0.0);
      CHECK(v.missing(name));
    }
  }

  TEST_CASE("special characters skip links and sigils") {
    CHECK(special_char_count("hi! #tag @you http://a.b/c?d=e ok?") == 2);
    CHECK(special_char_count("") == 0);
  }

  TEST_CASE("100 generated tweets match a tokenizer recount") {
    const auto& ds = testing::default_challenge().first;
    std::mt19937_64 rng(5);
    std::vector<Tweet> sample;
    for (int i = 0; i < 100; ++i) sample.push_back(ds.tweets[rng() % ds.tweets.size()]);
    double h = 0, m = 0, l = 0, s = 0, rt = 0, ep = 0, eh = 0, el = 0;
    for (const auto& t : sample) {
      const auto c = recount(t.text);
      h += c.hashtags;
      m += c.mentions;
      l += c.links;
      s += c.special;
      rt += t.is_retweet;
      ep += c.ending == 1;
      eh += c.ending == 2;
      el += c.ending == 3;
    }
    const auto v = syntax_features(sample);
    CHECK(v.get("avg_hashtags") == doctest::Approx(h / 100));
    CHECK(v.get("avg_mentions") == doctest::Approx(m / 100));
    CHECK(v.get("avg_links") == doctest::Approx(l / 100));
    CHECK(v.get("avg_special_chars") == doctest::Approx(s / 100));
    CHECK(v.get("retweet_fraction") == doctest::Approx(rt / 100));
    CHECK(v.get("end_punct_fraction") == doctest::Approx(ep / 100));
    CHECK(v.get("end_hashtag_fraction") == doctest::Approx(eh / 100));
    CHECK(v.get("end_link_fraction") == doctest::Approx(el / 100));
    CHECK(h > 0);
    CHECK(l > 0);
  }
}

TEST_SUITE("features.eliza") {
  TEST_CASE("ten tweets with one opening") {
    std::vector<Tweet> ts;
    for (int i = 0; i < 10; ++i) ts.push_back(testing::tweet(i, 1, i, "I think that " + std::to_string(i)));
    CHECK(eliza_score(ts).first == doctest::Approx(0.9));
    CHECK_FALSE(eliza_score(ts).second);
  }

  TEST_CASE("ten distinct openings") {
    std::vector<Tweet> ts;
    for (int i = 0; i < 10; ++i) ts.push_back(testing::tweet(i, 1, i, "word" + std::to_string(i) + " is here"));
    CHECK(eliza_score(ts).first == 0.0);
  }

  TEST_CASE("fewer than two tweets is masked") {
    CHECK(eliza_score({}).second);
    const std::vector<Tweet> one = {testing::tweet(1, 1, 1, "x")};
    CHECK(eliza_score(one).second);
  }

  TEST_CASE("generated users match a brute-force prefix-set count") {
    const auto& ds = testing::default_challenge().first;
    for (std::size_t k = 0; k < ds.accounts.size(); k += 37) {
      const auto ts = ds.tweets_of(ds.accounts[k].user_id);
      if (ts.size() < 2) continue;
      std::set<std::string> prefixes;
      for (const auto& t : ts) {
        std::istringstream in(t.text);
        std::string w, p;
        for (int i = 0; i < 3 && in >> w; ++i) {
          std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
          p += (i ? " " : "") + w;
        }
        prefixes.insert(p);
      }
      const double want = 1.0 - static_cast<double>(prefixes.size()) / static_cast<double>(ts.size());
      CHECK(eliza_score(ts).first == doctest::Approx(want));
    }
  }
}

TEST_SUITE("features.semantic") {
  const auto lex = lexicon_of("good\t0.8\nbad\t-0.4\n");
  const auto topic = TopicTerms::from_keywords({"#vaxfacts", "vaccine"});

  TEST_CASE("contradiction rank against the neighbour mean") {
    auto a = testing::tweet(1, 1, 1, "#vaxfacts good");
    a.hashtags = {"vaxfacts"};
    const std::vector<Tweet> ts = {a, testing::tweet(2, 1, 2, "vaccine good")};
    const auto v = semantic_features(ts, topic, lex, {{2, -0.2}, {3, 0.0}});
    CHECK(v.get("avg_topic_sentiment") == doctest::Approx(0.8));
    CHECK(v.get("contradiction_rank") == doctest::Approx(0.9));
    CHECK(v.get("topic_tweet_count") == 2.0);
  }

  TEST_CASE("no topic tweets masks the aggregates") {
    const std::vector<Tweet> ts = {testing::tweet(1, 1, 1, "good day")};
    const auto v = semantic_features(ts, topic, lex, {{2, 0.5}});
    CHECK(v.get("topic_tweet_count") == 0.0);
    CHECK(v.missing("avg_topic_sentiment"));
    CHECK(v.missing("contradiction_rank"));
  }

  TEST_CASE("languages are counted") {
    auto ts = tweets_at({1, 2, 3, 4});
    ts[0].language = "en";
    ts[1].language = "fr";
    ts[2].language = "de";
    ts[3].language = "fr";
    CHECK(semantic_features(ts, topic, lex, {}).get("language_count") == 3.0);
  }

  TEST_CASE("strengths and url inconsistency") {
    std::vector<Tweet> ts = {testing::tweet(1, 1, 1, "vaccine good"), testing::tweet(2, 1, 2, "vaccine bad"),
                             testing::tweet(3, 1, 3, "vaccine bad bad")};
    ts[0].url_text = "bad";
    const auto v = semantic_features(ts, topic, lex, {});
    CHECK(v.get("pos_strength") == doctest::Approx(0.8));
    CHECK(v.get("neg_strength") == doctest::Approx(-0.4));
    CHECK(v.get("sentiment_inconsistency") == doctest::Approx(1.2));
  }

  TEST_CASE("topic matching uses words and hashtags") {
    CHECK(topic.matches(testing::tweet(1, 1, 1, "the Vaccine works")));
    CHECK_FALSE(topic.matches(testing::tweet(1, 1, 1, "http://vaccine.org")));
    auto t = testing::tweet(1, 1, 1, "#VaxFacts");
    t.hashtags = {"vaxfacts"};
    CHECK(topic.matches(t));
  }
}

TEST_SUITE("features.temporal") {
  TEST_CASE("exact cadence has zero entropy") {
    std::vector<Timestamp> times;
    for (int i = 0; i < 50; ++i) times.push_back(1000 + 60 * i);
    CHECK(inter_tweet_entropy_bits(times) == 0.0);
  }

  TEST_CASE("alternating 2 s and 2000 s gaps give one bit") {
    std::vector<Timestamp> times = {0};
    for (int i = 0; i < 40; ++i) times.push_back(times.back() + (i % 2 ? 2000 : 2));
    CHECK(inter_tweet_entropy_bits(times) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("bins follow powers of two with an overflow bin") {
    CHECK(gap_bin(0) == 0);
    CHECK(gap_bin(1) == 1);
    CHECK(gap_bin(2) == 2);
    CHECK(gap_bin(3) == 2);
    CHECK(gap_bin(4) == 3);
    CHECK(gap_bin((1 << 20) - 1) == 20);
    CHECK(gap_bin(1 << 20) == 21);
    CHECK(gap_bin(Timestamp{1} << 40) == 21);
  }

  TEST_CASE("random gap sequences match the histogram oracle") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
      const auto times = testing::random_times(rng);
      CHECK(inter_tweet_entropy_bits(times) == testing::histogram_entropy(times));
    }
  }

  TEST_CASE("sessions break on long gaps") {
    const std::vector<Timestamp> times = {0, 200, 400, 1200, 1300, 1500, 1700, 1900};
    CHECK(longest_session_hours(times, 300) == doctest::Approx(700.0 / 3600));
    CHECK(longest_session_hours(times, 900) == doctest::Approx(1900.0 / 3600));
  }

  TEST_CASE("flip-flops count sign changes outside the dead zone") {
    const std::vector<double> s = {0.5, -0.5, 0.5};
    CHECK(flipflop_count(s, 0.1) == 2);
    const std::vector<double> quiet = {0.5, 0.05, -0.05, 0.6};
    CHECK(flipflop_count(quiet, 0.1) == 0);
  }

  TEST_CASE("network activity features") {
    UserNetworkActivity act;
    act.follows = 3;
    act.unfollows = 1;
    act.follower_series = {2, 2, 2, 2, 2};
    const auto topic = TopicTerms::from_keywords({"x"});
    const auto v = temporal_features(tweets_at({0, 60}), act, 28, topic, SentimentLexicon::builtin(), {});
    CHECK(v.get("dropped_follower_pct") == 0.25);
    CHECK(v.get("snr") == doctest::Approx(2.0 / 1e-9));
    CHECK(v.get("series_entropy") == 0.0);
    CHECK(v.get("tweets_per_day") == doctest::Approx(2.0 / 28));

    act.follower_series = {1, 3};
    const auto w = temporal_features(tweets_at({0}), act, 28, topic, SentimentLexicon::builtin(), {});
    CHECK(w.get("snr") == doctest::Approx(2.0));
    CHECK(w.get("series_entropy") == doctest::Approx(1.0));
    CHECK(w.missing("inter_tweet_entropy_bits"));
    CHECK(w.get("inter_tweet_entropy_bits") == 0.0);
    CHECK(w.get("longest_session_hours_5min") == 0.0);
  }
}

TEST_SUITE("features.profile") {
  TEST_CASE("jaccard definition and bounds") {
    const std::set<std::string> a = {"a", "b", "c"}, b = {"b", "c", "d"};
    CHECK(jaccard(a, a) == 1.0);
    CHECK(jaccard(a, b) == 0.5);
    CHECK(jaccard(a, b) == jaccard(b, a));
    CHECK(jaccard(a, {}) == 0.0);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
      std::set<std::string> x, y;
      for (int k = 0; k < 6; ++k) {
        if (rng() % 2) x.insert(std::to_string(rng() % 8));
        if (rng() % 2) y.insert(std::to_string(rng() % 8));
      }
      const double j = jaccard(x, y);
      CHECK(j >= 0.0);
      CHECK(j <= 1.0);
      CHECK(j == jaccard(y, x));
    }
  }

  TEST_CASE("word plus digits screen name looks generated") {
    CHECK(name_autogen_score("jenny84721", "Jenny") >= 0.5);
    CHECK(name_autogen_score("jenny84721", "Jenny") == doctest::Approx(2.0 / 3));
    CHECK(name_autogen_score("mary_smith", "Mary Smith") == 0.0);
    CHECK(name_autogen_score("xq7734", "Bob") == 1.0);
  }

  TEST_CASE("url normalization") {
    CHECK(normalize_url("HTTPS://www.Example.com/a/") == "example.com/a");
    CHECK(normalize_url("http://example.com") == "example.com");
  }

  TEST_CASE("clone flags need two accounts and ignore default avatars") {
    auto a = testing::account(1, "a", "A");
    auto b = testing::account(2, "b", "B");
    auto c = testing::account(3, "c", "C");
    a.profile_image_ref = b.profile_image_ref = "img_77";
    c.profile_image_ref = "img_78";
    a.profile_url = "https://www.site.org/";
    b.profile_url = "http://site.org";
    auto d = testing::account(4, "d", "D");
    auto e = testing::account(5, "e", "E");
    d.profile_image_ref = e.profile_image_ref = "default_egg";
    const std::vector<UserAccount> all = {a, b, c, d, e};
    const auto idx = CloneIndex::build(all);
    CHECK(profile_features(a, {}, idx, {}).get("image_clone_flag") == 1.0);
    CHECK(profile_features(a, {}, idx, {}).get("url_clone_flag") == 1.0);
    CHECK(profile_features(c, {}, idx, {}).get("image_clone_flag") == 0.0);
    CHECK(profile_features(d, {}, idx, {}).get("image_clone_flag") == 0.0);
  }

  TEST_CASE("completeness, ratio, sources and bot similarity") {
    auto a = testing::account(1, "ann", "Ann Lee");
    a.profile_image_ref = "img_1";
    a.bio = "nurse and mother";
    a.sources = {"web", "android"};
    a.followers_count = 10;
    a.followings_count = 4;
    auto geo = testing::tweet(1, 1, 1, "x");
    geo.geo_enabled = true;
    const std::vector<Tweet> ts = {geo};
    const auto idx = CloneIndex::build({a});
    const auto v = profile_features(a, ts, idx, {profile_tokens(a)});
    CHECK(v.get("profile_completeness") == doctest::Approx(5.0 / 6));
    CHECK(v.get("follower_ratio") == 2.0);
    CHECK(v.get("source_count") == 2.0);
    CHECK(v.get("jaccard_to_known_bots") == 1.0);
    CHECK(profile_features(a, ts, idx, {}).get("jaccard_to_known_bots") == 0.0);
  }
}

TEST_SUITE("features.network") {
  Dataset follow_fixture() {
    Dataset ds;
    ds.start_time = 0;
    ds.duration_days = 7;
    for (UserId id = 1; id <= 6; ++id) ds.accounts.push_back(testing::account(id, "u" + std::to_string(id)));
    for (UserId to : {2, 3, 4, 5}) ds.network_events.push_back({1, to, 10, 1});
    ds.network_events.push_back({1, 5, 20, 0});
    ds.finalize();
    return ds;
  }

  TEST_CASE("known bots followed") {
    const auto ds = follow_fixture();
    const auto k = NetworkKernels::build(ds);
    const auto v = network_features(1, k, {2, 3, 4, 5}, nullptr);
    CHECK(v.get("known_bots_followed") == 3.0);
  }

  TEST_CASE("isolated user has zero centralities and the pagerank floor") {
    const auto ds = follow_fixture();
    const auto k = NetworkKernels::build(ds);
    const auto v = network_features(6, k, {}, nullptr);
    CHECK(v.get("betweenness_retweet") == 0.0);
    CHECK(v.get("clustering_coeff_mention") == 0.0);
    CHECK(v.get("known_bots_followed") == 0.0);
    CHECK(v.get("pagerank_retweet") == doctest::Approx(1.0 / 6));
    CHECK(v.get("cluster_bot_fraction") == 0.0);
  }

  TEST_CASE("cluster bot fraction") {
    const auto ds = follow_fixture();
    const auto k = NetworkKernels::build(ds);
    ClusterMap clusters;
    for (UserId id = 100; id < 110; ++id) clusters[id] = 3;
    clusters[1] = 3;
    clusters.erase(100);
    clusters[6] = -1;
    const std::set<UserId> bots = {101, 102, 103, 104, 6};
    CHECK(network_features(1, k, bots, &clusters).get("cluster_bot_fraction") == doctest::Approx(0.4));
    CHECK(network_features(6, k, bots, &clusters).get("cluster_bot_fraction") == 0.0);
  }
}

TEST_SUITE("features.matrix") {
  TEST_CASE("z-scores, imputation and constant columns") {
    RowMatrix raw(4, 3);
    raw << 1, 5, 7,  //
        2, 5, 0,     //
        3, 5, 9,     //
        6, 5, 3;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> missing(4, 3);
    missing.setConstant(false);
    missing(1, 2) = true;
    const auto m = normalize({1, 2, 3, 4}, {"a", "b", "c"}, raw, missing);
    CHECK(m.raw(1, 2) == doctest::Approx((7.0 + 9 + 3) / 3));
    for (Eigen::Index j : {0, 2}) {
      CHECK(std::abs(m.z.col(j).mean()) < 1e-9);
      CHECK(std::sqrt(m.z.col(j).array().square().mean()) == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(m.z.col(1).isZero());
    CHECK(m.row_of(3) == std::optional<std::size_t>(2));
    CHECK_FALSE(m.row_of(5).has_value());
    CHECK_THROWS(normalize({1}, {"a", "b", "c"}, raw, missing));
  }

  TEST_CASE("csv round-trip keeps missing cells empty") {
    RowMatrix raw(2, 2);
    raw << 0.1, 1e-17, 3.0, -2.5;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> missing(2, 2);
    missing << false, true, false, false;
    const auto m = normalize({7, 9}, {"x", "y"}, raw, missing);
    const auto csv = to_csv(m);
    CHECK(csv.rfind("user_id,x,y\n7,0.10000000000000001,\n", 0) == 0);
    const auto back = from_csv(csv);
    CHECK(back.ids == m.ids);
    CHECK(back.columns == m.columns);
    CHECK(back.raw == m.raw);
    CHECK(back.missing == m.missing);
    CHECK(back.z == m.z);
  }

  TEST_CASE("default challenge gives 1000 x 40 with z-score invariants") {
    const auto& m = default_matrix();
    CHECK(m.ids.size() == 1000);
    CHECK(m.columns.size() == kFeatureCount);
    CHECK(std::is_sorted(m.ids.begin(), m.ids.end()));
    for (std::size_t j = 0; j < kFeatureCount; ++j) CHECK(m.columns[j] == kFeatureNames[j]);
    for (Eigen::Index j = 0; j < m.z.cols(); ++j) {
      if (m.z.col(j).isZero()) continue;
      CHECK(std::abs(m.z.col(j).mean()) < 1e-9);
      CHECK(std::sqrt(m.z.col(j).array().square().mean()) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("range invariants on the default challenge") {
    const auto& m = default_matrix();
    auto col = [&](const char* name) { return m.raw.col(static_cast<Eigen::Index>(m.column(name))); };
    for (const char* f : {"retweet_fraction", "end_punct_fraction", "end_hashtag_fraction", "end_link_fraction",
                          "eliza_score", "dropped_follower_pct", "profile_completeness", "name_autogen_score",
                          "url_clone_flag", "image_clone_flag", "jaccard_to_known_bots", "cluster_bot_fraction",
                          "clustering_coeff_retweet", "clustering_coeff_mention"}) {
      CHECK(col(f).minCoeff() >= 0.0);
      CHECK(col(f).maxCoeff() <= 1.0);
    }
    for (const char* f : {"avg_topic_sentiment", "pos_strength", "neg_strength"}) {
      CHECK(col(f).minCoeff() >= -1.0);
      CHECK(col(f).maxCoeff() <= 1.0);
    }
    CHECK(col("inter_tweet_entropy_bits").minCoeff() >= 0.0);
    CHECK(col("series_entropy").minCoeff() >= 0.0);
  }
}

TEST_SUITE("features.assemble") {
  TEST_CASE("each row equals the six family outputs for that user") {
    GeneratorConfig cfg;
    cfg.n_users = 20;
    cfg.n_bots = 4;
    const auto [ds, gt] = generate_challenge(cfg, 3);
    const auto& lex = SentimentLexicon::builtin();
    FeatureContext ctx(ds, lex);
    LabelInputs labels;
    labels.known_bots = {gt.bot_ids[0], gt.bot_ids[1]};
    ClusterMap clusters;
    for (std::size_t i = 0; i < ds.accounts.size(); ++i) clusters[ds.accounts[i].user_id] = static_cast<long>(i % 3);
    labels.clusters = clusters;
    const auto m = ctx.assemble(labels);
    REQUIRE(m.ids.size() == 20);

    const auto clones = CloneIndex::build(ds.accounts);
    for (std::size_t r = 0; r < m.ids.size(); ++r) {
      const UserId id = m.ids[r];
      const auto ts = ds.tweets_of(id);
      NamedValues want = syntax_features(ts);
      const auto [eliza, eliza_missing] = eliza_score(ts);
      want.set("eliza_score", eliza, eliza_missing);
      want.append(semantic_features(ts, ctx.topic(), lex, ctx.neighbor_topic_sentiments(id)));
      want.append(temporal_features(ts, ctx.activity(id), ds.duration_days, ctx.topic(), lex, {}));
      std::vector<std::set<std::string>> bot_profiles;
      for (auto b : labels.known_bots)
        if (b != id) bot_profiles.push_back(profile_tokens(*ds.find_account(b)));
      want.append(profile_features(*ds.find_account(id), ts, clones, bot_profiles));
      want.append(network_features(id, ctx.kernels(), labels.known_bots, &clusters));
      REQUIRE(want.size() == kFeatureCount);
      for (std::size_t j = 0; j < kFeatureCount; ++j) {
        const auto name = kFeatureNames[j];
        CHECK(m.missing(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) == want.missing(name));
        if (!want.missing(name)) CHECK(m.raw(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) == want.get(name));
      }
    }
  }

  TEST_CASE("extraction is pure") {
    const auto& ds = testing::default_challenge().first;
    FeatureContext ctx(ds, SentimentLexicon::builtin());
    const auto id = ds.accounts[17].user_id;
    const auto a = ctx.extract(id, {});
    const auto b = ctx.extract(id, {});
    CHECK(a.values() == b.values());
    CHECK(a.missing_mask() == b.missing_mask());
    CHECK(a.size() == kFeatureCount);
  }

  TEST_CASE("topic vocabulary expands from the seeds") {
    const auto& ds = testing::default_challenge().first;
    FeatureContext ctx(ds, SentimentLexicon::builtin());
    const std::set<std::string> want = {"antivax",  "vaccinate", "vaccinated",   "vaccination",
                                        "vaccine",  "vaccines",  "vaccineswork", "vaxfacts"};
    CHECK(ctx.topic().hashtags == want);
  }

  TEST_CASE("follower series spans the weekly snapshots") {
    const auto& ds = testing::default_challenge().first;
    FeatureContext ctx(ds, SentimentLexicon::builtin());
    const auto id = ds.accounts[3].user_id;
    const auto& series = ctx.activity(id).follower_series;
    REQUIRE(series.size() == 5);
    for (int w = 0; w < 5; ++w) {
      const auto deg = network_snapshot(ds, 7 * w).in_degrees();
      const auto it = deg.find(id);
      CHECK(series[static_cast<std::size_t>(w)] == (it == deg.end() ? 0.0 : static_cast<double>(it->second)));
    }
  }
}

TEST_SUITE("features.generated") {
  TEST_CASE("bots tweet with lower entropy than humans") {
    const auto& [ds, gt] = testing::default_challenge();
    const auto& m = default_matrix();
    const auto c = static_cast<Eigen::Index>(m.column("inter_tweet_entropy_bits"));
    double bot = 0, human = 0, nb = 0, nh = 0;
    for (std::size_t i = 0; i < m.ids.size(); ++i) {
      const double v = m.raw(static_cast<Eigen::Index>(i), c);
      if (gt.is_bot(m.ids[i])) {
        bot += v;
        nb += 1;
      } else {
        human += v;
        nh += 1;
      }
    }
    CHECK(bot / nb < human / nh);
  }

  TEST_CASE("every generated bot shows at least three cue classes") {
    const auto& [ds, gt] = testing::default_challenge();
    const auto& m = default_matrix();
    const auto final_follows = network_snapshot(ds, ds.duration_days);
    const std::set<UserId> bots(gt.bot_ids.begin(), gt.bot_ids.end());
    auto raw = [&](UserId id, const char* f) {
      return m.raw(static_cast<Eigen::Index>(*m.row_of(id)), static_cast<Eigen::Index>(m.column(f)));
    };
    for (auto id : gt.bot_ids) {
      int cues = 0;
      cues += raw(id, "name_autogen_score") >= 0.5;
      cues += raw(id, "image_clone_flag") > 0;
      cues += raw(id, "inter_tweet_entropy_bits") < 1.0;
      bool ring = false;
      if (auto it = final_follows.out.find(id); it != final_follows.out.end())
        for (auto t : it->second) ring |= bots.contains(t);
      cues += ring;
      CAPTURE(id);
      CHECK(cues >= 3);
    }
  }
}
