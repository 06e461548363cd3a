#include "revo/problem.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace revo {

ShiftSchedule::ShiftSchedule(std::uint64_t seed, std::string label, Genome origin,
                             double severity, long period, Bounds limits)
    : seed_(seed),
      label_(std::move(label)),
      severity_(severity),
      period_(period),
      limits_(std::move(limits)),
      cache_(std::make_unique<Cache>()) {
  cache_->anchors.push_back(std::move(origin));
}

const Genome& ShiftSchedule::at_epoch(long epoch) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto& anchors = cache_->anchors;
  while (static_cast<long>(anchors.size()) <= epoch) {
    long k = static_cast<long>(anchors.size());
    RandomStream stream =
        derive_stream(seed_, label_ + "/epoch/" + std::to_string(k));
    // random direction from the unit cube, scaled to norm = severity
    Genome step(limits_.size());
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : step) {
        v = stream.next_in(-1.0, 1.0);
        norm += v * v;
      }
      norm = std::sqrt(norm);
    } while (norm < 1e-12);
    Genome next = anchors.back();
    for (std::size_t d = 0; d < next.size(); ++d) {
      next[d] = limits_[d].clamp(next[d] + step[d] * (severity_ / norm));
    }
    anchors.push_back(std::move(next));
  }
  return anchors[static_cast<std::size_t>(epoch)];
}

MovingSphere::MovingSphere(int dim, double severity, long period, std::uint64_t seed)
    : dim_(dim),
      bounds_(dim, Interval{-50.0, 50.0}),
      schedule_(seed, "problem/sphere/center", Genome(dim, 0.0), severity,
                period, bounds_) {}

double MovingSphere::evaluate(std::span<const double> x, long t) const {
  const Genome& c = schedule_.at_time(t);
  double sum = 0.0;
  for (int d = 0; d < dim_; ++d) {
    double z = x[d] - c[d];
    sum += z * z;
  }
  return sum;
}

MovingPeaks::MovingPeaks(int dim, int peak_count, Interval height_range,
                         Interval width_range, double severity, long period,
                         std::uint64_t seed)
    : dim_(dim), bounds_(dim, Interval{0.0, 100.0}) {
  RandomStream stream = derive_stream(seed, "problem/peaks/init");
  peaks_.reserve(peak_count);
  for (int i = 0; i < peak_count; ++i) {
    double height = stream.next_in(height_range.lo, height_range.hi);
    double width = stream.next_in(width_range.lo, width_range.hi);
    Genome location(dim);
    for (auto& v : location) v = stream.next_in(0.0, 100.0);
    peaks_.push_back(Peak{height, width,
                          ShiftSchedule(seed, "problem/peaks/peak/" + std::to_string(i),
                                        std::move(location), severity, period,
                                        bounds_)});
  }
}

MovingPeaks::MovingPeaks(int dim, std::vector<PeakSpec> specs, double severity,
                         long period, std::uint64_t seed)
    : dim_(dim), bounds_(dim, Interval{0.0, 100.0}) {
  peaks_.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    peaks_.push_back(Peak{specs[i].height, specs[i].width,
                          ShiftSchedule(seed, "problem/peaks/peak/" + std::to_string(i),
                                        std::move(specs[i].location), severity,
                                        period, bounds_)});
  }
}

double MovingPeaks::evaluate(std::span<const double> x, long t) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& peak : peaks_) {
    const Genome& p = peak.schedule.at_time(t);
    double dist2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
      double z = x[d] - p[d];
      dist2 += z * z;
    }
    double cone = peak.height - peak.width * std::sqrt(dist2);
    if (cone > best) best = cone;
  }
  return -best;
}

std::optional<double> MovingPeaks::known_optimum(long) const {
  double max_height = 0.0;
  for (const auto& peak : peaks_)
    if (peak.height > max_height) max_height = peak.height;
  return -max_height;
}

ShiftingRastrigin::ShiftingRastrigin(int dim, double severity, long period,
                                     std::uint64_t seed)
    : dim_(dim),
      bounds_(dim, Interval{-5.12, 5.12}),
      schedule_(seed, "problem/rastrigin/optimum", Genome(dim, 0.0), severity,
                period, bounds_) {}

double ShiftingRastrigin::evaluate(std::span<const double> x, long t) const {
  const Genome& o = schedule_.at_time(t);
  double sum = 0.0;
  for (int d = 0; d < dim_; ++d) {
    double z = x[d] - o[d];
    sum += z * z - 10.0 * std::cos(2.0 * std::numbers::pi * z) + 10.0;
  }
  return sum;
}

std::unique_ptr<DynamicProblem> make_moving_sphere(int dim, double severity,
                                                   long period, std::uint64_t seed) {
  return std::make_unique<MovingSphere>(dim, severity, period, seed);
}

std::unique_ptr<DynamicProblem> make_moving_peaks(int dim, int peak_count,
                                                  Interval height_range,
                                                  Interval width_range,
                                                  double severity, long period,
                                                  std::uint64_t seed) {
  return std::make_unique<MovingPeaks>(dim, peak_count, height_range, width_range,
                                       severity, period, seed);
}

std::unique_ptr<DynamicProblem> make_shifting_rastrigin(int dim, double severity,
                                                        long period,
                                                        std::uint64_t seed) {
  return std::make_unique<ShiftingRastrigin>(dim, severity, period, seed);
}

std::unique_ptr<DynamicProblem> make_problem(const RunConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::Sphere:
      return make_moving_sphere(cfg.dimension, cfg.severity, cfg.period, cfg.seed);
    case ProblemKind::Peaks:
      return make_moving_peaks(cfg.dimension, cfg.peak_count,
                               Interval{cfg.peak_height_min, cfg.peak_height_max},
                               Interval{cfg.peak_width_min, cfg.peak_width_max},
                               cfg.severity, cfg.period, cfg.seed);
    case ProblemKind::Rastrigin:
      return make_shifting_rastrigin(cfg.dimension, cfg.severity, cfg.period,
                                     cfg.seed);
  }
  throw ConfigError({"unhandled problem kind"});
}

SentinelSet init_sentinels(const DynamicProblem& problem, int count,
                           RandomStream& stream, long t) {
  const Bounds& bounds = problem.bounds();
  SentinelSet set;
  set.points.reserve(count);
  set.last_values.reserve(count);
  for (int i = 0; i < count; ++i) {
    Genome g(problem.dimension());
    for (int d = 0; d < problem.dimension(); ++d)
      g[d] = stream.next_in(bounds[d].lo, bounds[d].hi);
    set.last_values.push_back(problem.evaluate(g, t));
    set.points.push_back(std::move(g));
  }
  return set;
}

double detect_change(const DynamicProblem& problem, SentinelSet& sentinels,
                     long t, double tolerance) {
  if (sentinels.points.empty()) return 0.0;
  int changed = 0;
  for (std::size_t i = 0; i < sentinels.points.size(); ++i) {
    double value = problem.evaluate(sentinels.points[i], t);
    if (std::abs(value - sentinels.last_values[i]) > tolerance) ++changed;
    sentinels.last_values[i] = value;
  }
  return static_cast<double>(changed) / static_cast<double>(sentinels.points.size());
}

}  // namespace revo
