#include "revo/dissent.hpp"

#include <algorithm>
#include <cmath>

namespace revo {

std::vector<Genome> representative_genomes(
    const std::map<BeliefId, BeliefSystem>& systems) {
  std::vector<Genome> reps;
  reps.reserve(systems.size());
  for (const auto& [id, belief] : systems) reps.push_back(belief.situational_genome);
  return reps;
}

double diversity(const std::vector<Genome>& representatives) {
  std::size_t n = representatives.size();
  if (n < 2) return 1.0;
  double max_dist = 0.0;
  double sum_unordered = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = m + 1; k < n; ++k) {
      double d2 = 0.0;
      for (std::size_t dim = 0; dim < representatives[m].size(); ++dim) {
        double z = representatives[m][dim] - representatives[k][dim];
        d2 += z * z;
      }
      double d = std::sqrt(d2);
      max_dist = std::max(max_dist, d);
      sum_unordered += d;
    }
  }
  if (max_dist == 0.0) return 1.0;  // coincident representatives
  return max_dist / sum_unordered;  // 0.5 · (ordered sum) = unordered sum
}

double spawn_probability(double dp, double div) {
  return std::clamp(dp * div, 0.0, 1.0);
}

double spawn_weight_for(const Individual& j, double p_spawn, const Census& census,
                        double stagnation_boost) {
  double weight = p_spawn;
  if (stagnation_boost > 0.0 && j.allegiance == census.hegemon) {
    const CensusEntry* hegemon = census.find(census.hegemon);
    double stagnation = std::clamp(census.rate_floor / hegemon->rate, 0.0, 1.0);
    weight += stagnation_boost * stagnation;
  }
  return weight;
}

CullOutcome cull(std::map<BeliefId, BeliefSystem>& systems,
                 const std::map<BeliefId, int>& follower_counts) {
  CullOutcome outcome;
  if (systems.empty()) throw ContractViolation("cull() with no systems");
  auto count_of = [&](BeliefId id) {
    auto it = follower_counts.find(id);
    return it == follower_counts.end() ? 0 : it->second;
  };

  bool all_empty = true;
  for (const auto& [id, belief] : systems) {
    if (count_of(id) > 0) {
      all_empty = false;
      break;
    }
  }

  BeliefId keep = 0;
  if (all_empty) {
    // keep the largest pre-cull system (lowest id on a full tie)
    keep = systems.begin()->first;
    int best = -1;
    for (const auto& [id, belief] : systems) {
      if (count_of(id) > best) {
        best = count_of(id);
        keep = id;
      }
    }
    outcome.guard_kept_largest = true;
  }

  for (auto it = systems.begin(); it != systems.end();) {
    if (count_of(it->first) == 0 && !(all_empty && it->first == keep)) {
      outcome.removed.push_back(it->first);
      it = systems.erase(it);
    } else {
      ++it;
    }
  }
  return outcome;
}

}  // namespace revo
