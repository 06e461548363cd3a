#include "revo/belief.hpp"

#include <algorithm>
#include <cmath>

namespace revo {

BeliefSystem make_empty_system(BeliefId id, const Bounds& bounds,
                               std::size_t history_capacity, long generation) {
  BeliefSystem belief{id, {}, std::numeric_limits<double>::infinity(), bounds,
                      FitnessHistory(history_capacity), generation};
  return belief;
}

BeliefSystem found(BeliefId id, const Individual& founder, double widen,
                   const Bounds& bounds, std::size_t history_capacity,
                   long generation) {
  BeliefSystem belief{id, founder.genome, founder.fitness, Bounds(),
                      FitnessHistory(history_capacity), generation};
  belief.normative.reserve(bounds.size());
  for (std::size_t d = 0; d < bounds.size(); ++d) {
    double half = widen * bounds[d].width();
    belief.normative.push_back(Interval{bounds[d].clamp(founder.genome[d] - half),
                                        bounds[d].clamp(founder.genome[d] + half)});
  }
  belief.history.push(founder.fitness);
  return belief;
}

void update(BeliefSystem& belief, const std::vector<Individual>& population,
            std::span<const int> followers, double elite_fraction) {
  if (followers.empty())
    throw ContractViolation("update() on belief system " +
                            std::to_string(belief.id) + " with no followers");

  std::vector<int> order(followers.begin(), followers.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (population[a].fitness != population[b].fitness)
      return population[a].fitness < population[b].fitness;
    return a < b;
  });
  auto elite_count = static_cast<std::size_t>(
      std::ceil(elite_fraction * static_cast<double>(order.size())));
  elite_count = std::clamp<std::size_t>(elite_count, 1, order.size());

  const Individual& best = population[order.front()];
  if (best.fitness < belief.situational_fitness) {
    belief.situational_genome = best.genome;
    belief.situational_fitness = best.fitness;
  }

  for (std::size_t d = 0; d < belief.normative.size(); ++d) {
    double lo = population[order[0]].genome[d];
    double hi = lo;
    for (std::size_t e = 1; e < elite_count; ++e) {
      double v = population[order[e]].genome[d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    belief.normative[d] = Interval{lo, hi};
  }

  belief.history.push(best.fitness);
}

Genome influence(const BeliefSystem& belief, std::span<const double> parent,
                 RandomStream& stream, double mutation_rate, double scale_factor,
                 const Bounds& bounds) {
  Genome child(parent.begin(), parent.end());
  for (std::size_t d = 0; d < child.size(); ++d) {
    if (stream.next_double() >= mutation_rate) continue;
    const Interval& norm = belief.normative[d];
    if (!norm.contains(child[d])) {
      // pull the stray gene into the accepted region
      child[d] = norm.lo + stream.next_double() * norm.width();
    } else {
      double scale = norm.width() > 0.0 ? scale_factor * norm.width()
                                        : 0.1 * bounds[d].width();
      child[d] += stream.next_in(-1.0, 1.0) * scale;
    }
    child[d] = bounds[d].clamp(child[d]);
  }
  return child;
}

double rate_of_improvement(const BeliefSystem& belief, int window,
                           double rate_floor) {
  const FitnessHistory& h = belief.history;
  if (h.size() == 0) return rate_floor;
  auto n = std::min<std::size_t>(static_cast<std::size_t>(window), h.size() - 1);
  if (n == 0) return rate_floor;
  double drop = h[h.size() - 1 - n] - h.back();
  return std::max(rate_floor, drop / static_cast<double>(n));
}

}  // namespace revo
