#include "eventlens/geo.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"

using namespace eventlens;

TEST_CASE("haversine basics") {
  CHECK(haversine_m(51.5, -0.1, 51.5, -0.1) == 0.0);

  // Stratford to Hyde Park corner, checked against an independent
  // great-circle route (spherical law of cosines agrees to ~3e-8 m).
  const double d = haversine_m(51.5386, -0.0164, 51.5073, -0.1657);
  CHECK(d == doctest::Approx(10899.994221171).epsilon(1e-9));
  CHECK(haversine_m(51.5073, -0.1657, 51.5386, -0.0164) == d);
  CHECK(std::fabs(d - oracle::distance_m(51.5386, -0.0164, 51.5073, -0.1657)) < 1e-6);

  // Antipodal points sit half the circumference apart.
  CHECK(haversine_m(51.5, -0.1, -51.5, 179.9) ==
        doctest::Approx(3.14159265358979323846 * 6371000.0).epsilon(1e-7));
}

TEST_CASE("haversine symmetry and triangle inequality on random points") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> lat(-80.0, 80.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int i = 0; i < 500; ++i) {
    const double a1 = lat(rng), o1 = lon(rng);
    const double a2 = lat(rng), o2 = lon(rng);
    const double a3 = lat(rng), o3 = lon(rng);
    CHECK(haversine_m(a1, o1, a2, o2) == haversine_m(a2, o2, a1, o1));
    const double ab = haversine_m(a1, o1, a2, o2);
    const double bc = haversine_m(a2, o2, a3, o3);
    const double ac = haversine_m(a1, o1, a3, o3);
    CHECK(ac <= (ab + bc) * (1.0 + 1e-6) + 1e-6);
  }
}

TEST_CASE("neighborhood membership") {
  auto taxonomy = testutil::small_taxonomy();
  // ~199 m and ~201 m of pure latitude offset from the center.
  const double deg199 = 199.0 / 111194.92664455873;
  const double deg201 = 201.0 / 111194.92664455873;
  std::vector<Venue> venues{
      testutil::make_venue("center", 51.5, -0.1, "Food", "Coffee Shop"),
      testutil::make_venue("near", 51.5 + deg199, -0.1, "Outdoors", "Park"),
      testutil::make_venue("far", 51.5 - deg201, -0.1, "Outdoors", "Park"),
      testutil::make_venue("isolated", 51.6, -0.1, "Food", "Bakery"),
  };
  const Corpus corpus = build_corpus(taxonomy, venues, {}, {});
  const SpatialIndex index(corpus.venues(), 200.0);

  SUBCASE("center always includes itself") {
    const auto n = neighborhood(corpus, index, std::string("isolated"), 200.0);
    CHECK(n.members == std::vector<int>{corpus.venue_index("isolated")});
  }
  SUBCASE("inclusive boundary at the radius") {
    const auto n = neighborhood(corpus, index, std::string("center"), 200.0);
    std::vector<int> expected{corpus.venue_index("center"), corpus.venue_index("near")};
    std::sort(expected.begin(), expected.end());
    CHECK(n.members == expected);
  }
  SUBCASE("count_by_type counts the center's own type") {
    const auto counts = count_by_type(corpus, index, std::string("center"), 200.0);
    CHECK(counts.at("Coffee Shop") == 1);
    CHECK(counts.at("Park") == 1);
  }
}

TEST_CASE("index equals brute force on random cities") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> radius(30.0, 900.0);
  for (int trial = 0; trial < 100; ++trial) {
    testutil::RandomCorpusOptions opt;
    opt.n_venues = 20 + static_cast<int>(rng() % 31);
    const Corpus corpus = testutil::random_corpus(rng, opt);
    const double r = radius(rng);
    const SpatialIndex index(corpus.venues(), r);
    for (size_t v = 0; v < corpus.venues().size(); ++v) {
      const auto fast = neighborhood(corpus, index, static_cast<int>(v), r).members;
      const auto brute = oracle::neighborhood(corpus, static_cast<int>(v), r);
      CHECK(fast == brute);
      CHECK(count_by_type(corpus, index, static_cast<int>(v), r) ==
            oracle::count_by_type(corpus, static_cast<int>(v), r));
    }
  }
}

TEST_CASE("index answers radii other than its cell size") {
  std::mt19937_64 rng(31);
  const Corpus corpus = testutil::random_corpus(rng);
  const SpatialIndex index(corpus.venues(), 200.0);
  for (const double r : {50.0, 200.0, 450.0, 1200.0}) {
    for (size_t v = 0; v < corpus.venues().size(); ++v) {
      CHECK(neighborhood(corpus, index, static_cast<int>(v), r).members ==
            oracle::neighborhood(corpus, static_cast<int>(v), r));
    }
  }
}

TEST_CASE("nearest_of") {
  auto taxonomy = testutil::small_taxonomy();
  std::vector<Venue> venues{
      testutil::make_venue("a", 51.5, -0.1, "Food", "Coffee Shop"),
      // Two candidates at identical coordinates, so exactly equidistant.
      testutil::make_venue("tie_b", 51.51, -0.1, "Outdoors", "Park"),
      testutil::make_venue("tie_a", 51.51, -0.1, "Outdoors", "Park"),
      testutil::make_venue("far", 51.55, -0.1, "Outdoors", "Park"),
  };
  const Corpus corpus = build_corpus(taxonomy, venues, {}, {});

  SUBCASE("self in candidate set wins with distance zero") {
    const auto [id, dist] = nearest_of(corpus, std::string("a"),
                                       std::vector<std::string>{"a", "far"});
    CHECK(id == "a");
    CHECK(dist == 0.0);
  }
  SUBCASE("ties break to the lexicographically smaller id") {
    const auto [id, dist] = nearest_of(corpus, std::string("a"),
                                       std::vector<std::string>{"tie_b", "tie_a"});
    CHECK(id == "tie_a");
  }
  SUBCASE("empty candidate set is an error") {
    CHECK_THROWS_AS(nearest_of(corpus, std::string("a"), std::vector<std::string>{}),
                    DataError);
  }
  SUBCASE("matches a linear argmin oracle on random instances") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
      const Corpus city = testutil::random_corpus(rng);
      std::vector<int> candidates;
      for (size_t v = 0; v < city.venues().size(); ++v) {
        if (rng() % 3 == 0) candidates.push_back(static_cast<int>(v));
      }
      if (candidates.empty()) candidates.push_back(0);
      const auto fast = nearest_of(city, 0, candidates);
      const auto brute = oracle::nearest_of(city, 0, candidates);
      CHECK(fast.first == brute.first);
      // The oracle uses the spherical law of cosines, which is only accurate
      // to about a millimeter at these distances.
      CHECK(std::fabs(fast.second - brute.second) < 1e-3);
    }
  }
}
