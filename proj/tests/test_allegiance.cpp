#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "revo/allegiance.hpp"
#include "revo/rng.hpp"

using namespace revo;

namespace {

constexpr double kFloor = 1e-12;

// census fabricated straight from (n, r) vectors; ids are 0..N-1
Census make_census(const std::vector<double>& n, const std::vector<double>& r,
                   const std::vector<int>& counts = {},
                   const std::vector<double>& fitness = {}) {
  Census census;
  census.population = 100;
  census.rate_floor = kFloor;
  for (std::size_t i = 0; i < n.size(); ++i) {
    CensusEntry entry;
    entry.id = static_cast<BeliefId>(i);
    entry.count = counts.empty() ? static_cast<int>(n[i] * 100) : counts[i];
    entry.proportion = n[i];
    entry.rate = r[i];
    entry.situational_fitness = fitness.empty() ? 0.0 : fitness[i];
    census.entries.push_back(entry);
  }
  census.hegemon = determine_hegemon(census);
  return census;
}

Individual follower_of(BeliefId id) {
  Individual j;
  j.allegiance = id;
  return j;
}

// independent transcription of the affinity formula plus joint normalization
std::vector<double> oracle_distribution(const std::vector<double>& n,
                                        const std::vector<double>& r,
                                        std::size_t own_system, double spawn) {
  double N = static_cast<double>(n.size());
  std::vector<double> w(n.size() + 1);
  for (std::size_t i = 0; i < n.size(); ++i)
    w[i] = n[i] * r[i] / (N * r[own_system]);
  w[n.size()] = spawn;
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace

TEST_CASE("raw score: single system scores exactly 1") {
  Census census = make_census({1.0}, {0.7});
  CHECK(raw_score(census, 0, follower_of(0)) == doctest::Approx(1.0));
}

TEST_CASE("raw score: symmetric two-system case") {
  Census census = make_census({0.5, 0.5}, {2.0, 2.0});
  CHECK(raw_score(census, 0, follower_of(0)) == doctest::Approx(0.25));
  CHECK(raw_score(census, 1, follower_of(0)) == doctest::Approx(0.25));
}

TEST_CASE("raw score: hand-evaluated asymmetric case") {
  Census census = make_census({0.75, 0.25}, {1.0, 4.0});
  Individual j = follower_of(0);
  CHECK(raw_score(census, 0, j) == doctest::Approx(0.375));
  CHECK(raw_score(census, 1, j) == doctest::Approx(0.5));
}

TEST_CASE("distribution: normalization of the asymmetric case") {
  Census census = make_census({0.75, 0.25}, {1.0, 4.0});
  auto dist = allegiance_distribution(census, follower_of(0), 0.0);
  CHECK(dist.probabilities[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
  CHECK(dist.probabilities[1] == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  CHECK(dist.found_new_probability == 0.0);
}

TEST_CASE("distribution: single system takes all the mass") {
  Census census = make_census({1.0}, {3.0});
  auto dist = allegiance_distribution(census, follower_of(0), 0.0);
  CHECK(dist.probabilities[0] == doctest::Approx(1.0));
}

TEST_CASE("distribution: spawn weight joins the normalization") {
  Census census = make_census({0.5, 0.5}, {2.0, 2.0});
  auto dist = allegiance_distribution(census, follower_of(0), 0.5);
  CHECK(dist.probabilities[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(dist.probabilities[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(dist.found_new_probability == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("distribution: all-zero weights keep the individual home") {
  Census census = make_census({0.0, 0.0}, {kFloor, kFloor});
  auto dist = allegiance_distribution(census, follower_of(1), 0.0);
  CHECK(dist.probabilities[0] == 0.0);
  CHECK(dist.probabilities[1] == 1.0);
  CHECK(dist.found_new_probability == 0.0);
}

TEST_CASE("oracle equivalence over 1000 random censuses") {
  RandomStream stream(42, "affinity-oracle");
  for (int trial = 0; trial < 1000; ++trial) {
    int n_systems = 1 + static_cast<int>(stream.next_below(10));
    std::vector<double> n(n_systems), r(n_systems);
    double total = 0.0;
    for (auto& v : n) {
      v = stream.next_double() + 1e-3;
      total += v;
    }
    for (auto& v : n) v /= total;
    for (auto& v : r) v = kFloor + stream.next_double() * 10.0;
    auto own = static_cast<std::size_t>(stream.next_below(n_systems));
    double spawn = stream.next_double();

    Census census = make_census(n, r);
    auto dist = allegiance_distribution(census, follower_of(own), spawn);
    auto expected = oracle_distribution(n, r, own, spawn);

    double sum = dist.found_new_probability;
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
      REQUIRE(dist.probabilities[i] ==
              doctest::Approx(expected[i]).epsilon(1e-12));
      sum += dist.probabilities[i];
    }
    REQUIRE(dist.found_new_probability ==
            doctest::Approx(expected.back()).epsilon(1e-12));
    REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("scaling every rate by a power of two changes nothing, bit for bit") {
  Census census = make_census({0.3, 0.2, 0.5}, {1.25, 0.5, 2.0});
  Census scaled = census;
  for (auto& entry : scaled.entries) entry.rate *= 4.0;
  Individual j = follower_of(2);
  auto a = allegiance_distribution(census, j, 0.125);
  auto b = allegiance_distribution(scaled, j, 0.125);
  for (std::size_t i = 0; i < a.probabilities.size(); ++i)
    CHECK(a.probabilities[i] == b.probabilities[i]);
  CHECK(a.found_new_probability == b.found_new_probability);
}

TEST_CASE("scaling every rate by an arbitrary constant is invariant to 1e-12") {
  RandomStream stream(43, "scale-invariance");
  for (int trial = 0; trial < 200; ++trial) {
    int n_systems = 2 + static_cast<int>(stream.next_below(6));
    std::vector<double> n(n_systems), r(n_systems);
    double total = 0.0;
    for (auto& v : n) {
      v = stream.next_double() + 1e-3;
      total += v;
    }
    for (auto& v : n) v /= total;
    for (auto& v : r) v = kFloor + stream.next_double() * 5.0;
    double c = 0.1 + stream.next_double() * 7.3;

    Census census = make_census(n, r);
    std::vector<double> scaled_r = r;
    for (auto& v : scaled_r) v *= c;
    Census scaled = make_census(n, scaled_r);
    Individual j = follower_of(stream.next_below(n_systems));
    auto a = allegiance_distribution(census, j, 0.0);
    auto b = allegiance_distribution(scaled, j, 0.0);
    for (std::size_t i = 0; i < a.probabilities.size(); ++i)
      REQUIRE(a.probabilities[i] == doctest::Approx(b.probabilities[i]).epsilon(1e-12));
  }
}

TEST_CASE("raising a system's rate strictly raises its probability") {
  RandomStream stream(44, "attraction-monotone");
  for (int trial = 0; trial < 200; ++trial) {
    int n_systems = 2 + static_cast<int>(stream.next_below(6));
    std::vector<double> n(n_systems), r(n_systems);
    double total = 0.0;
    for (auto& v : n) {
      v = stream.next_double() + 1e-3;
      total += v;
    }
    for (auto& v : n) v /= total;
    for (auto& v : r) v = 0.1 + stream.next_double() * 5.0;

    auto target = static_cast<std::size_t>(stream.next_below(n_systems));
    Individual j = follower_of(stream.next_below(n_systems));

    Census census = make_census(n, r);
    auto before = allegiance_distribution(census, j, 0.2);
    std::vector<double> boosted = r;
    boosted[target] *= 2.0;
    Census boosted_census = make_census(n, boosted);
    auto after = allegiance_distribution(boosted_census, j, 0.2);
    REQUIRE(after.probabilities[target] > before.probabilities[target]);
  }
}

TEST_CASE("sampling: a sure thing is always drawn") {
  Census census = make_census({1.0}, {1.0});
  auto dist = allegiance_distribution(census, follower_of(0), 0.0);
  RandomStream stream(45, "sample-sure");
  for (int i = 0; i < 100; ++i) {
    auto pick = sample_allegiance(dist, stream);
    REQUIRE(pick.has_value());
    REQUIRE(*pick == 0);
  }
}

TEST_CASE("sampling: found-new with weight 1 always defects") {
  AllegianceDistribution dist;
  dist.found_new_probability = 1.0;
  RandomStream stream(46, "sample-defect");
  for (int i = 0; i < 100; ++i) CHECK_FALSE(sample_allegiance(dist, stream));
}

TEST_CASE("sampling: empirical frequencies track a fair coin") {
  Census census = make_census({0.5, 0.5}, {1.0, 1.0});
  auto dist = allegiance_distribution(census, follower_of(0), 0.0);
  RandomStream stream(47, "sample-frequency");
  int first = 0;
  const int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    auto pick = sample_allegiance(dist, stream);
    if (*pick == 0) ++first;
  }
  CHECK(std::abs(first / static_cast<double>(kDraws) - 0.5) < 0.01);
}

TEST_CASE("sampling is deterministic given the stream") {
  Census census = make_census({0.25, 0.25, 0.5}, {1.0, 2.0, 0.5});
  auto dist = allegiance_distribution(census, follower_of(1), 0.3);
  std::vector<std::optional<BeliefId>> a, b;
  RandomStream s1(48, "det"), s2(48, "det");
  for (int i = 0; i < 200; ++i) {
    a.push_back(sample_allegiance(dist, s1));
    b.push_back(sample_allegiance(dist, s2));
  }
  CHECK(a == b);
}

TEST_CASE("hegemon: strict maximum wins") {
  Census census = make_census({0.2, 0.6, 0.2}, {1, 1, 1}, {10, 30, 10});
  CHECK(determine_hegemon(census) == 1);
}

TEST_CASE("hegemon: count ties break toward better situational fitness") {
  Census census = make_census({0.5, 0.5}, {1, 1}, {20, 20}, {3.0, 1.0});
  CHECK(determine_hegemon(census) == 1);
}

TEST_CASE("hegemon: full ties break toward the lower id") {
  Census census = make_census({0.5, 0.5}, {1, 1}, {20, 20}, {2.0, 2.0});
  CHECK(determine_hegemon(census) == 0);
}

TEST_CASE("build_census computes proportions and rejects dangling allegiances") {
  Bounds box{Interval{0, 1}};
  std::map<BeliefId, BeliefSystem> systems;
  systems.emplace(0, make_empty_system(0, box, 4, 0));
  systems.emplace(5, make_empty_system(5, box, 4, 0));
  std::vector<Individual> pop(4);
  pop[0].allegiance = 0;
  pop[1].allegiance = 5;
  pop[2].allegiance = 5;
  pop[3].allegiance = 5;
  for (auto& [id, belief] : systems) belief.history.push(1.0);

  Census census = build_census(pop, systems, 3, kFloor);
  CHECK(census.system_count() == 2);
  CHECK(census.entries[0].id == 0);
  CHECK(census.entries[0].count == 1);
  CHECK(census.entries[0].proportion == doctest::Approx(0.25));
  CHECK(census.entries[1].count == 3);
  CHECK(census.hegemon == 5);

  pop[0].allegiance = 9;  // no such system
  CHECK_THROWS_AS(build_census(pop, systems, 3, kFloor), ContractViolation);
}
