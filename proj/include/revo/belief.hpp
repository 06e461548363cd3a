#pragma once

#include <deque>
#include <limits>
#include <span>

#include "revo/rng.hpp"
#include "revo/types.hpp"

namespace revo {

// Best-follower fitness per generation, most recent last. Fixed capacity;
// old entries fall off the front.
class FitnessHistory {
 public:
  explicit FitnessHistory(std::size_t capacity) : capacity_(capacity) {}

  void push(double v) {
    if (values_.size() == capacity_) values_.pop_front();
    values_.push_back(v);
  }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double back() const { return values_.back(); }

 private:
  std::deque<double> values_;
  std::size_t capacity_;
};

// A belief system: the knowledge store shared by one subculture.
// Situational knowledge is the best exemplar its followers ever produced;
// normative knowledge is a per-dimension interval around the current elite.
struct BeliefSystem {
  BeliefId id = 0;
  Genome situational_genome;
  double situational_fitness = std::numeric_limits<double>::infinity();
  Bounds normative;
  FitnessHistory history;
  long founded_at = 0;
};

// System with nothing observed yet; normative spans the full bounds and the
// exemplar slot stays empty until the first update().
BeliefSystem make_empty_system(BeliefId id, const Bounds& bounds,
                               std::size_t history_capacity, long generation);

// System founded by a single dissident. Knowledge starts from the founder:
// situational is the founder itself, normative intervals are centered on its
// genome with half-width = widen × bound width (clamped to bounds), and the
// history is seeded with the founder's fitness.
BeliefSystem found(BeliefId id, const Individual& founder, double widen,
                   const Bounds& bounds, std::size_t history_capacity,
                   long generation);

// Lets the top ⌈elite_fraction × count⌉ followers rewrite the belief system:
// the exemplar is replaced when beaten, normative intervals snap to the
// elites' coordinate ranges, and the history receives the elite best fitness.
// Calling this with no followers is a caller bug (the system should have
// been culled) and throws ContractViolation.
void update(BeliefSystem& belief, const std::vector<Individual>& population,
            std::span<const int> followers, double elite_fraction);

// Mutation biased by the normative intervals: each gene fires independently
// with probability mutation_rate. A gene outside its interval is redrawn
// uniformly inside it; a gene inside is perturbed by a uniform zero-mean
// step of scale scale_factor × interval width (0.1 × bound width when the
// interval is degenerate). Result is clamped to bounds.
Genome influence(const BeliefSystem& belief, std::span<const double> parent,
                 RandomStream& stream, double mutation_rate, double scale_factor,
                 const Bounds& bounds);

// Average fitness decrease per generation over the last `window` steps of
// the history, floored at rate_floor (> 0 so it can sit in a denominator).
double rate_of_improvement(const BeliefSystem& belief, int window,
                           double rate_floor);

}  // namespace revo
