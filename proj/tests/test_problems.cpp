#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "revo/problem.hpp"
#include "revo/rng.hpp"

using namespace revo;

TEST_CASE("moving sphere: hand-evaluated squared norm") {
  MovingSphere sphere(2, 1.0, 50, 1);
  CHECK(sphere.center(0) == Genome{0.0, 0.0});
  Genome x{3.0, 4.0};
  CHECK(sphere.evaluate(x, 0) == doctest::Approx(25.0));
}

TEST_CASE("moving sphere: zero at the current center") {
  MovingSphere sphere(5, 2.0, 10, 3);
  for (long t : {0L, 10L, 25L, 90L}) {
    CHECK(sphere.evaluate(sphere.center(t), t) == doctest::Approx(0.0));
  }
}

TEST_CASE("severity 0 keeps the landscape static") {
  MovingSphere sphere(3, 0.0, 5, 1);
  Genome x{1.0, -2.0, 3.5};
  double v0 = sphere.evaluate(x, 0);
  for (long t : {1L, 7L, 500L}) CHECK(sphere.evaluate(x, t) == v0);
}

TEST_CASE("evaluation is pure") {
  MovingPeaks peaks(4, 5, Interval{30, 70}, Interval{1, 12}, 5.0, 10, 11);
  RandomStream stream(9, "purity");
  for (int i = 0; i < 50; ++i) {
    Genome x(4);
    for (auto& v : x) v = stream.next_in(0.0, 100.0);
    long t = static_cast<long>(stream.next_below(100));
    CHECK(peaks.evaluate(x, t) == peaks.evaluate(x, t));
  }
}

TEST_CASE("shift steps have norm = severity until clamping bites") {
  MovingSphere sphere(5, 2.0, 10, 7);
  for (long epoch = 1; epoch <= 5; ++epoch) {
    const Genome& a = sphere.center((epoch - 1) * 10);
    const Genome& b = sphere.center(epoch * 10);
    double norm = 0.0;
    for (int d = 0; d < 5; ++d) norm += (b[d] - a[d]) * (b[d] - a[d]);
    CHECK(std::sqrt(norm) == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("huge shifts stay clamped inside the declared bounds") {
  MovingSphere sphere(3, 1000.0, 5, 19);
  MovingPeaks peaks(3, 4, Interval{30, 70}, Interval{1, 12}, 500.0, 5, 19);
  for (long t : {5L, 10L, 50L, 100L}) {
    for (double v : sphere.center(t)) {
      REQUIRE(v >= -50.0);
      REQUIRE(v <= 50.0);
    }
    for (int p = 0; p < peaks.peak_count(); ++p) {
      for (double v : peaks.peak_location(p, t)) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 100.0);
      }
    }
  }
}

TEST_CASE("single peak apex evaluates to minus its height") {
  MovingPeaks peaks(3, {{Genome{50, 50, 50}, 42.0, 3.0}}, 0.0, 10, 1);
  CHECK(peaks.evaluate(Genome{50, 50, 50}, 0) == doctest::Approx(-42.0));
  CHECK(peaks.known_optimum(0) == doctest::Approx(-42.0));
}

TEST_CASE("well-separated peaks: each apex hits its own height") {
  // far enough apart that every cone dominates at its own apex
  std::vector<MovingPeaks::PeakSpec> specs = {
      {Genome{10, 10}, 40.0, 5.0}, {Genome{90, 10}, 55.0, 5.0},
      {Genome{10, 90}, 35.0, 5.0}, {Genome{90, 90}, 61.0, 5.0},
      {Genome{50, 50}, 48.0, 5.0},
  };
  MovingPeaks peaks(2, specs, 0.0, 10, 1);
  double minimum = 0.0;
  for (const auto& spec : specs) {
    double v = peaks.evaluate(spec.location, 0);
    CHECK(v == doctest::Approx(-spec.height));
    minimum = std::min(minimum, v);
  }
  CHECK(minimum == doctest::Approx(-61.0));
  CHECK(peaks.known_optimum(0) == doctest::Approx(-61.0));
}

TEST_CASE("peaks match an independent cone-maximum transcription") {
  MovingPeaks peaks(3, 5, Interval{30, 70}, Interval{1, 12}, 4.0, 7, 21);
  RandomStream stream(5, "peaks-oracle");
  for (int i = 0; i < 200; ++i) {
    Genome x(3);
    for (auto& v : x) v = stream.next_in(0.0, 100.0);
    long t = static_cast<long>(stream.next_below(40));
    double best = -1e300;
    for (int p = 0; p < peaks.peak_count(); ++p) {
      const Genome& loc = peaks.peak_location(p, t);
      double dist = 0.0;
      for (int d = 0; d < 3; ++d) dist += (x[d] - loc[d]) * (x[d] - loc[d]);
      best = std::max(best, peaks.peak_height(p) -
                                peaks.peak_width(p) * std::sqrt(dist));
    }
    CHECK(peaks.evaluate(x, t) == doctest::Approx(-best).epsilon(1e-12));
  }
}

TEST_CASE("known optimum is a true lower bound") {
  MovingPeaks peaks(5, 5, Interval{30, 70}, Interval{1, 12}, 6.0, 10, 2);
  MovingSphere sphere(5, 3.0, 10, 2);
  ShiftingRastrigin rastrigin(5, 0.5, 10, 2);
  RandomStream stream(4, "lower-bound");
  for (int i = 0; i < 10000; ++i) {
    long t = static_cast<long>(stream.next_below(200));
    Genome x(5);
    for (auto& v : x) v = stream.next_in(0.0, 100.0);
    REQUIRE(peaks.evaluate(x, t) >= *peaks.known_optimum(t) - 1e-12);
    for (auto& v : x) v = stream.next_in(-50.0, 50.0);
    REQUIRE(sphere.evaluate(x, t) >= *sphere.known_optimum(t) - 1e-12);
    for (auto& v : x) v = stream.next_in(-5.12, 5.12);
    REQUIRE(rastrigin.evaluate(x, t) >= *rastrigin.known_optimum(t) - 1e-12);
  }
}

TEST_CASE("rastrigin: zero at the shifted optimum, one at a unit offset") {
  ShiftingRastrigin rastrigin(4, 0.5, 10, 13);
  for (long t : {0L, 10L, 35L}) {
    CHECK(rastrigin.evaluate(rastrigin.optimum_location(t), t) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
  // unit offset in one coordinate: 1 − 10·cos(2π) + 10 = 1
  Genome x = rastrigin.optimum_location(0);
  x[0] += 1.0;
  CHECK(rastrigin.evaluate(x, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rastrigin matches a direct formula transcription") {
  ShiftingRastrigin rastrigin(3, 0.4, 5, 17);
  RandomStream stream(6, "rastrigin-oracle");
  for (int i = 0; i < 200; ++i) {
    Genome x(3);
    for (auto& v : x) v = stream.next_in(-5.12, 5.12);
    long t = static_cast<long>(stream.next_below(30));
    const Genome& o = rastrigin.optimum_location(t);
    double expected = 0.0;
    for (int d = 0; d < 3; ++d) {
      double z = x[d] - o[d];
      expected += z * z - 10.0 * std::cos(2.0 * std::numbers::pi * z) + 10.0;
    }
    CHECK(rastrigin.evaluate(x, t) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("static rastrigin reproduces the unshifted values") {
  ShiftingRastrigin moving(3, 0.0, 5, 1);
  RandomStream stream(8, "static-rastrigin");
  for (int i = 0; i < 50; ++i) {
    Genome x(3);
    for (auto& v : x) v = stream.next_in(-5.12, 5.12);
    CHECK(moving.evaluate(x, 123) == moving.evaluate(x, 0));
  }
}

namespace {

// value jumps by 100 below `threshold` in dimension 0 from t ≥ 1 on
struct PartialShift : DynamicProblem {
  double threshold;
  Bounds box{1, Interval{0.0, 1.0}};
  explicit PartialShift(double th) : threshold(th) {}
  const char* name() const override { return "partial-shift"; }
  int dimension() const override { return 1; }
  const Bounds& bounds() const override { return box; }
  double evaluate(std::span<const double> x, long t) const override {
    double base = x[0];
    if (t >= 1 && x[0] < threshold) base += 100.0;
    return base;
  }
  std::optional<double> known_optimum(long) const override { return std::nullopt; }
};

}  // namespace

TEST_CASE("detect_change counts exactly the moved sentinels") {
  PartialShift staticish(0.0);  // nothing below 0 ⇒ static
  RandomStream stream(10, "sentinels");
  SentinelSet sentinels = init_sentinels(staticish, 10, stream, 0);

  SUBCASE("static landscape: dp = 0") {
    CHECK(detect_change(staticish, sentinels, 1, 1e-9) == 0.0);
  }

  SUBCASE("constructed 3-of-10 change") {
    // pick the threshold just above the 3rd smallest sentinel coordinate
    std::vector<double> coords;
    for (const auto& p : sentinels.points) coords.push_back(p[0]);
    std::sort(coords.begin(), coords.end());
    PartialShift partial(0.5 * (coords[2] + coords[3]));
    SentinelSet probes = sentinels;
    for (std::size_t i = 0; i < probes.points.size(); ++i)
      probes.last_values[i] = partial.evaluate(probes.points[i], 0);
    CHECK(detect_change(partial, probes, 1, 1e-9) == doctest::Approx(0.3));
  }

  SUBCASE("every sentinel moves: dp = 1") {
    PartialShift total(2.0);  // the whole unit interval is below 2
    SentinelSet probes = sentinels;
    for (std::size_t i = 0; i < probes.points.size(); ++i)
      probes.last_values[i] = total.evaluate(probes.points[i], 0);
    CHECK(detect_change(total, probes, 1, 1e-9) == doctest::Approx(1.0));
  }
}

TEST_CASE("dp never decreases as the changed region grows") {
  RandomStream stream(11, "dp-monotone");
  PartialShift probe(0.0);
  SentinelSet sentinels = init_sentinels(probe, 25, stream, 0);
  double last_dp = 0.0;
  for (double threshold = 0.0; threshold <= 1.01; threshold += 0.05) {
    PartialShift partial(threshold);
    SentinelSet probes = sentinels;
    for (std::size_t i = 0; i < probes.points.size(); ++i)
      probes.last_values[i] = partial.evaluate(probes.points[i], 0);
    double dp = detect_change(partial, probes, 1, 1e-9);
    CHECK(dp >= last_dp);
    last_dp = dp;
  }
}

TEST_CASE("sentinels keep their genomes and refresh their values") {
  MovingSphere sphere(3, 5.0, 10, 5);
  RandomStream stream(12, "sentinel-fix");
  SentinelSet sentinels = init_sentinels(sphere, 5, stream, 0);
  auto points_before = sentinels.points;
  double dp = detect_change(sphere, sentinels, 10, 1e-9);
  CHECK(dp == doctest::Approx(1.0));  // a center shift moves every value
  CHECK(sentinels.points == points_before);
  for (std::size_t i = 0; i < sentinels.points.size(); ++i)
    CHECK(sentinels.last_values[i] ==
          doctest::Approx(sphere.evaluate(sentinels.points[i], 10)));
}
