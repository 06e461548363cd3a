#pragma once

#include <map>
#include <optional>

#include "revo/belief.hpp"
#include "revo/rng.hpp"
#include "revo/types.hpp"

namespace revo {

struct CensusEntry {
  BeliefId id = 0;
  int count = 0;
  double proportion = 0.0;  // n_i = count / population
  double rate = 0.0;        // r_i, floored at rate_floor
  double situational_fitness = 0.0;
};

// Snapshot of all live belief systems: follower counts, proportions, success
// rates and the current hegemon. Entries are kept in ascending id order.
struct Census {
  std::vector<CensusEntry> entries;
  int population = 0;
  double rate_floor = 0.0;
  BeliefId hegemon = 0;

  int system_count() const { return static_cast<int>(entries.size()); }  // N
  const CensusEntry* find(BeliefId id) const;
};

Census build_census(const std::vector<Individual>& individuals,
                    const std::map<BeliefId, BeliefSystem>& systems, int window,
                    double rate_floor);

// The id with the most followers; ties go to the better (lower) situational
// fitness, then to the lower id.
BeliefId determine_hegemon(const Census& census);

// Unnormalized affinity of individual j for system i:
//   n_i · r_i / (N · r_j)
// where r_j is the rate of the system j currently follows.
double raw_score(const Census& census, BeliefId i, const Individual& j);

// Categorical distribution over {live systems} ∪ {found-new}, aligned with
// census entry order; the found-new option carries the spawn weight. When
// every weight is zero the individual stays put with probability 1.
struct AllegianceDistribution {
  std::vector<BeliefId> ids;
  std::vector<double> probabilities;
  double found_new_probability = 0.0;
};

AllegianceDistribution allegiance_distribution(const Census& census,
                                               const Individual& j,
                                               double spawn_weight);

// One categorical draw; nullopt means found-new.
std::optional<BeliefId> sample_allegiance(const AllegianceDistribution& dist,
                                          RandomStream& stream);

}  // namespace revo
