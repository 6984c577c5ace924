#include "eventlens/analytics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "eventlens/util.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace eventlens;

TEST_CASE("kendall tau-b closed forms") {
  SUBCASE("identical tie-free rankings") {
    CHECK(kendall_tau_b({3, 2, 1}, {3, 2, 1}) == 1.0);
    CHECK(kendall_tau_b({1, 5, 2, 9}, {10, 50, 20, 90}) == 1.0);  // monotone transform
  }
  SUBCASE("exact reversal") {
    CHECK(kendall_tau_b({3, 2, 1}, {1, 2, 3}) == -1.0);
  }
  SUBCASE("one discordant pair of three") {
    // Pairs: (1,2) and (1,3) concordant, (2,3) discordant -> (2-1)/3.
    CHECK(kendall_tau_b({3, 2, 1}, {3, 1, 2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("degenerate all-tied side") {
    CHECK(std::isnan(kendall_tau_b({1, 1, 1}, {3, 2, 1})));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(kendall_tau_b(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    DataError);
    CHECK_THROWS_AS(kendall_tau_b(std::vector<double>{1, 2}, std::vector<double>{1}),
                    DataError);
  }
}

TEST_CASE("kendall tau-b equals exhaustive pair counting") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 120; ++trial) {
    const size_t n = 2 + rng() % 199;
    std::vector<double> x(n), y(n);
    // Heavy ties: draw from a small integer domain.
    const int domain = 1 + static_cast<int>(rng() % 12);
    for (size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % domain);
      y[i] = static_cast<double>(rng() % domain);
    }
    const double fast = kendall_tau_b(x, y);
    const double brute = oracle::kendall_tau(x, y);
    if (std::isnan(brute)) {
      CHECK(std::isnan(fast));
    } else {
      CHECK(fast == doctest::Approx(brute).epsilon(1e-12));
      CHECK(kendall_tau_b(y, x) == doctest::Approx(brute).epsilon(1e-12));  // symmetry
    }
  }
}

TEST_CASE("tau invariant under strictly monotone transforms") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 40; ++trial) {
    const size_t n = 5 + rng() % 50;
    std::vector<double> x(n), y(n), xt(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % 20);
      y[i] = static_cast<double>(rng() % 20);
      xt[i] = std::exp(x[i] / 3.0) + 7.0;  // strictly increasing
    }
    const double a = kendall_tau_b(x, y);
    const double b = kendall_tau_b(xt, y);
    if (std::isnan(a)) {
      CHECK(std::isnan(b));
    } else {
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("ranking-based tau checks universes") {
  PeriodRanking a{TimeWindow{0, 10}, {{"v1", 5}, {"v2", 3}}};
  PeriodRanking b{TimeWindow{10, 20}, {{"v1", 2}, {"v2", 9}}};
  CHECK(kendall_tau_b(a, b) == -1.0);
  PeriodRanking c{TimeWindow{10, 20}, {{"v1", 2}, {"vX", 9}}};
  CHECK_THROWS_AS(kendall_tau_b(a, c), DataError);
  PeriodRanking d{TimeWindow{10, 20}, {{"v1", 2}}};
  CHECK_THROWS_AS(kendall_tau_b(a, d), DataError);
}

namespace {

// A corpus where Food venue popularity is steady across periods except for a
// planted shuffle inside the event period, strongest near the hotspot.
Corpus planted_shuffle_corpus() {
  auto taxonomy = testutil::small_taxonomy();
  constexpr double kMPerDeg = 111194.92664455873;
  std::vector<Venue> venues{testutil::make_venue("hot", 51.50, -0.10, "Entertainment",
                                                 "General Entertainment", "Live Site 2012")};
  // Five near venues (~200 m) and five far (~5 km).
  for (int i = 0; i < 5; ++i) {
    venues.push_back(testutil::make_venue("near" + std::to_string(i),
                                          51.50 + (200.0 + i) / kMPerDeg, -0.10, "Food",
                                          "Coffee Shop"));
    venues.push_back(testutil::make_venue("far" + std::to_string(i),
                                          51.50 + (5000.0 + i) / kMPerDeg, -0.10, "Food",
                                          "Restaurant"));
  }
  // Periods of 10 days; period 3 is the "event".
  const UtcSeconds t0 = 1330000000;
  constexpr std::int64_t kPeriod = 10 * 86400;
  std::vector<CheckInRecord> checkins;
  for (int period = 0; period < 5; ++period) {
    for (int i = 0; i < 5; ++i) {
      // Base popularity: venue i receives 2*(i+1) check-ins per period.
      int near_count = 2 * (i + 1);
      int far_count = 2 * (i + 1);
      if (period == 3) near_count = 2 * (5 - i);  // reversed ranking near the hotspot
      for (int c = 0; c < near_count; ++c) {
        checkins.push_back({"u" + std::to_string(c % 7), "near" + std::to_string(i),
                            t0 + period * kPeriod + c * 3600 + i});
      }
      for (int c = 0; c < far_count; ++c) {
        checkins.push_back({"u" + std::to_string(c % 7), "far" + std::to_string(i),
                            t0 + period * kPeriod + c * 3600 + 1800 + i});
      }
    }
  }
  // Sentinel so the final period is fully covered by the corpus span.
  checkins.push_back({"u0", "far0", t0 + 5 * kPeriod - 1});
  return build_corpus(taxonomy, venues, checkins, {});
}

}  // namespace

TEST_CASE("period rank correlation") {
  const Corpus corpus = planted_shuffle_corpus();
  const UtcSeconds t0 = 1330000000;
  constexpr std::int64_t kPeriod = 10 * 86400;
  const TimeWindow anchor{t0 + 3 * kPeriod, t0 + 4 * kPeriod};

  SUBCASE("stable rankings give tau 1 outside the event") {
    const auto series = period_rank_correlation(corpus, "Food", kPeriod, anchor);
    REQUIRE(series.size() == 4);
    CHECK(series[0].tau == doctest::Approx(1.0));   // periods 0-1
    CHECK(series[1].tau == doctest::Approx(1.0));   // periods 1-2
    CHECK(series[2].tau < 0.7);                      // into the shuffled event period
    CHECK(series[3].tau < 0.7);                      // out of it
    // The minimum is at an event-adjacent pair.
    double min_tau = 2.0;
    size_t min_at = 0;
    for (size_t i = 0; i < series.size(); ++i) {
      if (series[i].tau < min_tau) {
        min_tau = series[i].tau;
        min_at = i;
      }
    }
    CHECK((series[min_at].second.start == anchor.start ||
           series[min_at].first.start == anchor.start));
  }
  SUBCASE("insufficient span is an error") {
    CHECK_THROWS_AS(period_rank_correlation(corpus, "Food", 400 * 86400, anchor),
                    DataError);
  }
  SUBCASE("venues of other categories are ignored") {
    const auto series = period_rank_correlation(corpus, "Travel", kPeriod, anchor);
    for (const auto& p : series) CHECK(std::isnan(p.tau));  // no Travel venues active
  }
}

TEST_CASE("distance binned correlation") {
  const Corpus corpus = planted_shuffle_corpus();
  const UtcSeconds t0 = 1330000000;
  constexpr std::int64_t kPeriod = 10 * 86400;
  const TimeWindow anchor{t0 + 3 * kPeriod, t0 + 4 * kPeriod};

  SUBCASE("a single all-covering bin reproduces the unbinned series") {
    const auto unbinned = period_rank_correlation(corpus, "Food", kPeriod, anchor);
    const auto binned = distance_binned_correlation(corpus, "Food", kPeriod, anchor,
                                                    {1.0e9}, {"hot"});
    REQUIRE(binned.size() == 1);
    REQUIRE(binned[0].series.size() == unbinned.size());
    for (size_t i = 0; i < unbinned.size(); ++i) {
      if (std::isnan(unbinned[i].tau)) {
        CHECK(std::isnan(binned[0].series[i].tau));
      } else {
        CHECK(binned[0].series[i].tau == doctest::Approx(unbinned[i].tau).epsilon(1e-12));
      }
      CHECK(binned[0].series[i].n_items == unbinned[i].n_items);
    }
  }
  SUBCASE("planted near-hotspot shuffle dips only the near bin") {
    const auto binned = distance_binned_correlation(corpus, "Food", kPeriod, anchor,
                                                    {1000.0, 1.0e9}, {"hot"});
    REQUIRE(binned.size() == 2);
    // Event-adjacent pair: second period starts at the anchor.
    size_t event_pair = 0;
    for (size_t i = 0; i < binned[0].series.size(); ++i) {
      if (binned[0].series[i].second.start == anchor.start) event_pair = i;
    }
    CHECK(binned[0].series[event_pair].tau < binned[1].series[event_pair].tau);
    CHECK(binned[1].series[event_pair].tau == doctest::Approx(1.0));
  }
  SUBCASE("empty bins are flagged, not fatal") {
    const auto binned = distance_binned_correlation(corpus, "Food", kPeriod, anchor,
                                                    {10.0, 1.0e9}, {"hot"});
    for (const auto& p : binned[0].series) {
      CHECK(std::isnan(p.tau));
      CHECK(p.n_items == 0);
    }
  }
  SUBCASE("edges must ascend") {
    CHECK_THROWS_AS(
        distance_binned_correlation(corpus, "Food", kPeriod, anchor, {500.0, 100.0}, {"hot"}),
        DataError);
  }
}

TEST_CASE("detect_hotspots") {
  const Corpus corpus = planted_shuffle_corpus();
  SUBCASE("exact phrase matches case-insensitively") {
    CHECK(detect_hotspots(corpus, {"live site 2012"}) == std::vector<std::string>{"hot"});
    CHECK(detect_hotspots(corpus, {"Olympic Broadcast Compound", "Live Site 2012"}) ==
          std::vector<std::string>{"hot"});
  }
  SUBCASE("no matches yields an empty set") {
    CHECK(detect_hotspots(corpus, {"zzz"}).empty());
  }
  SUBCASE("empty pattern list is an error") {
    CHECK_THROWS_AS(detect_hotspots(corpus, {}), DataError);
  }
  SUBCASE("equals a linear scan on random corpora") {
    std::mt19937_64 rng(113);
    for (int trial = 0; trial < 20; ++trial) {
      const Corpus city = testutil::random_corpus(rng);
      const std::vector<std::string> patterns{"shop", "Park"};
      std::vector<std::string> expected;
      for (const auto& v : city.venues()) {
        const std::string lower = to_lower(v.name);
        if (lower.find("shop") != std::string::npos ||
            lower.find("park") != std::string::npos) {
          expected.push_back(v.id);
        }
      }
      CHECK(detect_hotspots(city, patterns) == expected);
    }
  }
}
