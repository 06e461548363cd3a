#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "revo/config.hpp"
#include "revo/rng.hpp"
#include "revo/types.hpp"

namespace revo {

// Time-indexed objective. evaluate() must be a pure function of (x, t) and
// safe to call from any number of threads at once.
class DynamicProblem {
 public:
  virtual ~DynamicProblem() = default;
  virtual const char* name() const = 0;
  virtual int dimension() const = 0;
  virtual const Bounds& bounds() const = 0;
  virtual double evaluate(std::span<const double> x, long t) const = 0;
  // Minimal attainable value at time t, when known.
  virtual std::optional<double> known_optimum(long t) const = 0;
};

// Piecewise-constant drift for an anchor point: every `period` time steps the
// anchor moves by a random vector of norm `severity`, clamped into bounds.
// Epoch positions are derived lazily and memoized; lookups are thread-safe
// and independent of call order.
class ShiftSchedule {
 public:
  ShiftSchedule(std::uint64_t seed, std::string label, Genome origin,
                double severity, long period, Bounds limits);

  long epoch_of(long t) const { return severity_ == 0.0 ? 0 : t / period_; }
  const Genome& at_epoch(long epoch) const;
  const Genome& at_time(long t) const { return at_epoch(epoch_of(t)); }

 private:
  struct Cache {
    std::mutex mu;
    std::deque<Genome> anchors;  // anchors[k] = position in epoch k
  };

  std::uint64_t seed_;
  std::string label_;
  double severity_;
  long period_;
  Bounds limits_;
  std::unique_ptr<Cache> cache_;
};

class MovingSphere final : public DynamicProblem {
 public:
  MovingSphere(int dim, double severity, long period, std::uint64_t seed);
  const char* name() const override { return "sphere"; }
  int dimension() const override { return dim_; }
  const Bounds& bounds() const override { return bounds_; }
  double evaluate(std::span<const double> x, long t) const override;
  std::optional<double> known_optimum(long) const override { return 0.0; }
  const Genome& center(long t) const { return schedule_.at_time(t); }

 private:
  int dim_;
  Bounds bounds_;
  ShiftSchedule schedule_;
};

// Max-of-cones landscape, negated for minimization. Peak heights and widths
// are drawn once per run; locations drift on the shift schedule.
class MovingPeaks final : public DynamicProblem {
 public:
  struct PeakSpec {
    Genome location;
    double height;
    double width;
  };

  MovingPeaks(int dim, int peak_count, Interval height_range,
              Interval width_range, double severity, long period,
              std::uint64_t seed);
  // explicit layout, mostly for constructed scenarios
  MovingPeaks(int dim, std::vector<PeakSpec> specs, double severity, long period,
              std::uint64_t seed);
  const char* name() const override { return "peaks"; }
  int dimension() const override { return dim_; }
  const Bounds& bounds() const override { return bounds_; }
  double evaluate(std::span<const double> x, long t) const override;
  std::optional<double> known_optimum(long) const override;
  int peak_count() const { return static_cast<int>(peaks_.size()); }
  const Genome& peak_location(int i, long t) const { return peaks_[i].schedule.at_time(t); }
  double peak_height(int i) const { return peaks_[i].height; }
  double peak_width(int i) const { return peaks_[i].width; }

 private:
  struct Peak {
    double height;
    double width;
    ShiftSchedule schedule;
  };
  int dim_;
  Bounds bounds_;
  std::vector<Peak> peaks_;
};

class ShiftingRastrigin final : public DynamicProblem {
 public:
  ShiftingRastrigin(int dim, double severity, long period, std::uint64_t seed);
  const char* name() const override { return "rastrigin"; }
  int dimension() const override { return dim_; }
  const Bounds& bounds() const override { return bounds_; }
  double evaluate(std::span<const double> x, long t) const override;
  std::optional<double> known_optimum(long) const override { return 0.0; }
  const Genome& optimum_location(long t) const { return schedule_.at_time(t); }

 private:
  int dim_;
  Bounds bounds_;
  ShiftSchedule schedule_;
};

std::unique_ptr<DynamicProblem> make_moving_sphere(int dim, double severity,
                                                   long period, std::uint64_t seed);
std::unique_ptr<DynamicProblem> make_moving_peaks(int dim, int peak_count,
                                                  Interval height_range,
                                                  Interval width_range,
                                                  double severity, long period,
                                                  std::uint64_t seed);
std::unique_ptr<DynamicProblem> make_shifting_rastrigin(int dim, double severity,
                                                        long period,
                                                        std::uint64_t seed);
std::unique_ptr<DynamicProblem> make_problem(const RunConfig& cfg);

// Fixed probe genomes re-evaluated every generation to detect landscape
// change. Points never move after initialization.
struct SentinelSet {
  std::vector<Genome> points;
  std::vector<double> last_values;
};

SentinelSet init_sentinels(const DynamicProblem& problem, int count,
                           RandomStream& stream, long t);

// Re-evaluates every sentinel at time t. Returns dp, the fraction whose
// value moved by more than `tolerance` since the previous evaluation, and
// stores the new values.
double detect_change(const DynamicProblem& problem, SentinelSet& sentinels,
                     long t, double tolerance);

}  // namespace revo
