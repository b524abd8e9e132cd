#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <echodetect/analytics.hpp>
#include <echodetect/common.hpp>

using namespace echodetect;

namespace {

ScoredTweet scored(const char* id, TweetKind kind, double score) {
  ScoredTweet t;
  t.tweet_id = id;
  t.kind = kind;
  t.score = score;
  t.best_match_id = "m";
  t.window_size = 1;
  return t;
}

int total_count(const std::vector<HistogramBin>& bins) {
  int total = 0;
  for (const HistogramBin& b : bins) total += b.count;
  return total;
}

}  // namespace

TEST_CASE("the classifier includes the threshold itself") {
  CHECK(classify_high(0.384, 0.384));
  CHECK(classify_high(0.5, 0.384));
  CHECK_FALSE(classify_high(0.3839999, 0.384));
  CHECK(classify_high(0.0, 0.0));
}

TEST_CASE("histogram bins are half-open except the last") {
  const auto bins = score_histogram({0.0, 0.25, 0.5, 0.75, 1.0}, 4);
  REQUIRE(bins.size() == 4);
  CHECK(bins[0].low == 0.0);
  CHECK(bins[0].high == 0.25);
  CHECK(bins[3].high == 1.0);
  // Each interior boundary value lands in the upper bin; 1.0 lands in
  // the last bin rather than overflowing.
  CHECK(bins[0].count == 1);
  CHECK(bins[1].count == 1);
  CHECK(bins[2].count == 1);
  CHECK(bins[3].count == 2);

  SUBCASE("fifty bins put 1.0 into the fiftieth") {
    const auto fine = score_histogram({1.0, 0.999, 0.98}, 50);
    REQUIRE(fine.size() == 50);
    CHECK(fine[49].count == 3);
    CHECK(total_count(fine) == 3);
  }

  SUBCASE("bin count must be positive") {
    CHECK_THROWS_AS(score_histogram({0.5}, 0), Error);
  }
}

TEST_CASE("category statistics come in a fixed order with exact moments") {
  std::vector<ScoredTweet> tweets;
  tweets.push_back(scored("n1", TweetKind::Original, 0.25));
  tweets.push_back(scored("n2", TweetKind::Original, 0.5));
  tweets.push_back(scored("n3", TweetKind::Original, 0.75));
  tweets.push_back(scored("r1", TweetKind::Reply, 0.5));
  std::vector<const ScoredTweet*> refs;
  for (const ScoredTweet& t : tweets) refs.push_back(&t);

  const auto stats = category_statistics(refs, 0.384, 4);
  REQUIRE(stats.size() == 3);
  CHECK(stats[0].kind == TweetKind::Original);
  CHECK(stats[1].kind == TweetKind::Reply);
  CHECK(stats[2].kind == TweetKind::Retweet);

  // {0.25, 0.5, 0.75}: mean and median 0.5, sample deviation 0.25.
  CHECK(stats[0].count == 3);
  CHECK(stats[0].high_count == 2);
  CHECK(stats[0].mean == 0.5);
  CHECK(stats[0].median == 0.5);
  CHECK(stats[0].std_dev == 0.25);
  CHECK(total_count(stats[0].histogram) == 3);

  CHECK(stats[1].count == 1);
  CHECK(stats[1].high_count == 1);
  CHECK(stats[1].mean == 0.5);
  CHECK_FALSE(stats[1].std_dev.has_value());

  CHECK(stats[2].count == 0);
  CHECK_FALSE(stats[2].mean.has_value());
  CHECK_FALSE(stats[2].median.has_value());
  CHECK(total_count(stats[2].histogram) == 0);

  SUBCASE("an even count takes the midpoint of the middle pair") {
    std::vector<ScoredTweet> four;
    four.push_back(scored("a", TweetKind::Original, 0.1));
    four.push_back(scored("b", TweetKind::Original, 0.2));
    four.push_back(scored("c", TweetKind::Original, 0.6));
    four.push_back(scored("d", TweetKind::Original, 1.0));
    std::vector<const ScoredTweet*> r;
    for (const ScoredTweet& t : four) r.push_back(&t);
    const auto s = category_statistics(r, 0.384, 4);
    CHECK(s[0].median == doctest::Approx(0.4));
  }
}

TEST_CASE("profiles turn counts into percentages of authored tweets") {
  ScoredNetwork network;
  network.ego_user_id = "e1";
  network.ego_username = "ego";
  network.total_authored = 8;
  network.tagged_replies = 1;
  network.tagged_retweets = 1;
  network.tweets.push_back(scored("n1", TweetKind::Original, 0.9));
  network.tweets.push_back(scored("n2", TweetKind::Original, 0.1));
  network.tweets.push_back(scored("r1", TweetKind::Reply, 0.95));
  const UserResponseProfile profile = build_profile(network, 0.384);

  CHECK(profile.total_messages == 8);
  CHECK(profile.tagged_count == 2);
  // The high-scoring reply is tagged, so it does not count here.
  CHECK(profile.high_nontagged_count == 1);
  CHECK(profile.p_tagged == 25.0);
  CHECK(profile.p_nontagged == 12.5);
}

TEST_CASE("the percent grid splits one linear bin and twenty log bins") {
  GridSpec spec;
  const auto edges = spec.edges();
  REQUIRE(edges.size() == 22);
  CHECK(edges[0] == 0.0);
  CHECK(edges[1] == 1.0);
  CHECK(edges[2] == doctest::Approx(std::pow(10.0, 0.1)));
  CHECK(edges[21] == 100.0);

  CHECK(spec.bin_count() == 21);
  CHECK(spec.bin_index(0.0) == 0);
  CHECK(spec.bin_index(0.7) == 0);
  CHECK(spec.bin_index(1.0) == 0);
  CHECK(spec.bin_index(1.2) == 1);
  CHECK(spec.bin_index(2.0) == 4);
  CHECK(spec.bin_index(100.0) == 20);
  CHECK(spec.bin_index(250.0) == 20);
  CHECK(spec.bin_index(-3.0) == 0);

  // Every percent in [0, 100] falls into the bin whose edges bracket it.
  for (double percent = 0.0; percent <= 100.0; percent += 0.37) {
    const int idx = spec.bin_index(percent);
    REQUIRE(idx >= 0);
    REQUIRE(idx < spec.bin_count());
    CHECK(percent >= edges[idx] - 1e-12);
    CHECK(percent <= edges[idx + 1] + 1e-12);
  }

  SUBCASE("bin counts must be positive") {
    GridSpec bad;
    bad.log_bins = 0;
    CHECK_THROWS_AS(bad.edges(), Error);
  }
}

TEST_CASE("profile distributions count strict diagonal crossings") {
  auto profile = [](double p_tagged, double p_nontagged) {
    UserResponseProfile p;
    p.p_tagged = p_tagged;
    p.p_nontagged = p_nontagged;
    return p;
  };
  std::vector<UserResponseProfile> profiles = {
      profile(20.0, 0.0),   // below
      profile(10.0, 10.0),  // exactly on the diagonal: not above
      profile(5.0, 12.5),   // above
      profile(0.0, 0.0),    // on the diagonal at zero
  };
  GridSpec spec;
  const ProfileDistributions dist = profile_distributions(profiles, spec);

  CHECK(dist.above_diagonal_count == 1);
  CHECK(dist.fraction_pn_zero == 0.5);
  CHECK(dist.fraction_pn_ge_10 == 0.5);

  int grid_total = 0;
  for (const GridCell& cell : dist.cells) grid_total += cell.count;
  CHECK(grid_total == 4);

  REQUIRE(dist.pn_cdf.size() == 3);
  CHECK(dist.pn_cdf[0] == std::pair<double, double>{0.0, 0.5});
  CHECK(dist.pn_cdf[1] == std::pair<double, double>{10.0, 0.75});
  CHECK(dist.pn_cdf[2] == std::pair<double, double>{12.5, 1.0});

  SUBCASE("cells are ordered and deduplicated") {
    for (std::size_t i = 1; i < dist.cells.size(); ++i) {
      const GridCell& a = dist.cells[i - 1];
      const GridCell& b = dist.cells[i];
      CHECK((a.x < b.x || (a.x == b.x && a.y < b.y)));
    }
  }
}

namespace {

ScoredNetwork sample_network_a() {
  ScoredNetwork n;
  n.ego_user_id = "a";
  n.ego_username = "user_a";
  n.total_authored = 4;
  n.tagged_replies = 1;
  n.replies_total = 1;
  n.replies_in_window = 1;
  n.tweets.push_back(scored("a1", TweetKind::Original, 0.25));
  n.tweets.push_back(scored("a2", TweetKind::Original, 0.75));
  n.tweets.push_back(scored("a3", TweetKind::Reply, 0.5));
  n.unscored_ids.push_back("a4");
  n.window_lengths_hours = {2.0, 4.0, 6.0};
  return n;
}

ScoredNetwork sample_network_b() {
  ScoredNetwork n;
  n.ego_user_id = "b";
  n.ego_username = "user_b";
  n.total_authored = 2;
  n.tagged_retweets = 1;
  n.tweets.push_back(scored("b1", TweetKind::Original, 1.0));
  n.tweets.push_back(scored("b2", TweetKind::Retweet, 0.5));
  n.window_lengths_hours = {4.0, 8.0};
  return n;
}

}  // namespace

TEST_CASE("reports aggregate additively across networks") {
  const DatasetConfig config;
  const GridSpec grid;
  const std::vector<ScoredNetwork> both = {sample_network_a(),
                                           sample_network_b()};
  const Report merged = build_report(both, config, 50, grid);
  const Report only_a = build_report({sample_network_a()}, config, 50, grid);
  const Report only_b = build_report({sample_network_b()}, config, 50, grid);

  CHECK(merged.dataset.users == 2);
  CHECK(merged.dataset.total_tweets ==
        only_a.dataset.total_tweets + only_b.dataset.total_tweets);
  CHECK(merged.dataset.scored_tweets ==
        only_a.dataset.scored_tweets + only_b.dataset.scored_tweets);
  CHECK(merged.dataset.unscored_tweets == 1);
  CHECK(merged.dataset.tagged_replies == 1);
  CHECK(merged.dataset.tagged_retweets == 1);
  CHECK(merged.dataset.min_tweets_per_user == 2);
  CHECK(merged.dataset.max_tweets_per_user == 4);
  CHECK(merged.dataset.avg_tweets_per_user == 3.0);
  CHECK(merged.dataset.replies_in_window_fraction == 1.0);
  CHECK(merged.dataset.window_stats.window_count == 5);
  CHECK(merged.dataset.window_stats.mean_hours == doctest::Approx(4.8));

  REQUIRE(merged.categories.size() == 3);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(merged.categories[c].count ==
          only_a.categories[c].count + only_b.categories[c].count);
    CHECK(merged.categories[c].high_count ==
          only_a.categories[c].high_count + only_b.categories[c].high_count);
    for (std::size_t bin = 0; bin < merged.categories[c].histogram.size();
         ++bin) {
      CHECK(merged.categories[c].histogram[bin].count ==
            only_a.categories[c].histogram[bin].count +
                only_b.categories[c].histogram[bin].count);
    }
  }

  REQUIRE(merged.profiles.size() == 2);
  CHECK(merged.profiles[0].ego_user_id == "a");
  CHECK(merged.profiles[1].ego_user_id == "b");

  SUBCASE("reporting over nothing is refused") {
    CHECK_THROWS_AS(build_report({}, config, 50, grid), Error);
  }
}

TEST_CASE("the JSON report carries every section") {
  const DatasetConfig config;
  const GridSpec grid;
  const Report report =
      build_report({sample_network_a(), sample_network_b()}, config, 50, grid);
  const std::string text = report_to_json(report);

  for (const char* key :
       {"\"schema_version\"", "\"config\"", "\"dataset\"", "\"categories\"",
        "\"profiles\"", "\"distributions\"", "\"windows\"", "\"pn_cdf\"",
        "\"above_diagonal_count\"", "\"fraction_pn_zero\"",
        "\"fraction_pn_ge_10\"", "\"avg_tweets_per_user\"",
        "\"replies_in_window_fraction\""}) {
    CAPTURE(key);
    CHECK(text.find(key) != std::string::npos);
  }
  CHECK(report_to_json(report) == text);
}

TEST_CASE("report tables export as CSV by name") {
  const DatasetConfig config;
  const GridSpec grid;
  const Report report =
      build_report({sample_network_a(), sample_network_b()}, config, 50, grid);

  CHECK(report_table_names() ==
        std::vector<std::string>{"categories", "histograms", "profiles",
                                 "grid", "pn_cdf", "window_cdf"});

  const std::string categories = report_table_csv(report, "categories");
  CHECK(categories.find("category,count,high_count,mean,median,std_dev\n") ==
        0);
  // nontagged scores {0.25, 0.75, 1.0}: high 2, all moments exact.
  CHECK(categories.find("nontagged,3,2,") != std::string::npos);
  CHECK(categories.find("retweet,1,1,0.5,0.5,\n") != std::string::npos);

  const std::string histograms = report_table_csv(report, "histograms");
  CHECK(histograms.find("category,bin_low,bin_high,count\n") == 0);

  const std::string profiles = report_table_csv(report, "profiles");
  CHECK(profiles.find("a,user_a,4,1,1,25,25\n") != std::string::npos);
  CHECK(profiles.find("b,user_b,2,1,1,50,50\n") != std::string::npos);

  const std::string grid_csv = report_table_csv(report, "grid");
  CHECK(grid_csv.find("x_bin,y_bin,") == 0);

  const std::string window_cdf = report_table_csv(report, "window_cdf");
  CHECK(window_cdf.find("hours,cumulative_fraction\n") == 0);
  CHECK(window_cdf.find("8,1\n") != std::string::npos);

  CHECK_THROWS_AS(report_table_csv(report, "nope"), Error);
}
