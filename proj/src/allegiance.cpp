#include "revo/allegiance.hpp"

#include <algorithm>

namespace revo {

const CensusEntry* Census::find(BeliefId id) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), id,
      [](const CensusEntry& e, BeliefId key) { return e.id < key; });
  if (it == entries.end() || it->id != id) return nullptr;
  return &*it;
}

Census build_census(const std::vector<Individual>& individuals,
                    const std::map<BeliefId, BeliefSystem>& systems, int window,
                    double rate_floor) {
  Census census;
  census.population = static_cast<int>(individuals.size());
  census.rate_floor = rate_floor;
  census.entries.reserve(systems.size());
  std::map<BeliefId, int> counts;
  for (const auto& ind : individuals) ++counts[ind.allegiance];
  for (const auto& [id, belief] : systems) {
    CensusEntry entry;
    entry.id = id;
    entry.count = counts.count(id) ? counts[id] : 0;
    entry.proportion =
        static_cast<double>(entry.count) / static_cast<double>(census.population);
    entry.rate = rate_of_improvement(belief, window, rate_floor);
    entry.situational_fitness = belief.situational_fitness;
    census.entries.push_back(entry);
  }
  for (const auto& [id, n] : counts) {
    if (!systems.count(id))
      throw ContractViolation("individual allegiant to dead system " +
                              std::to_string(id));
  }
  census.hegemon = determine_hegemon(census);
  return census;
}

BeliefId determine_hegemon(const Census& census) {
  if (census.entries.empty())
    throw ContractViolation("determine_hegemon() on an empty census");
  const CensusEntry* best = &census.entries.front();
  for (const auto& entry : census.entries) {
    if (entry.count > best->count ||
        (entry.count == best->count &&
         entry.situational_fitness < best->situational_fitness)) {
      best = &entry;  // ascending id order settles exact ties
    }
  }
  return best->id;
}

double raw_score(const Census& census, BeliefId i, const Individual& j) {
  const CensusEntry* target = census.find(i);
  const CensusEntry* own = census.find(j.allegiance);
  if (!target || !own)
    throw ContractViolation("raw_score() with a dead belief system");
  double n = static_cast<double>(census.system_count());
  return target->proportion * target->rate / (n * own->rate);
}

AllegianceDistribution allegiance_distribution(const Census& census,
                                               const Individual& j,
                                               double spawn_weight) {
  AllegianceDistribution dist;
  dist.ids.reserve(census.entries.size());
  dist.probabilities.reserve(census.entries.size());
  double total = spawn_weight;
  for (const auto& entry : census.entries) {
    double w = raw_score(census, entry.id, j);
    dist.ids.push_back(entry.id);
    dist.probabilities.push_back(w);
    total += w;
  }
  if (total <= 0.0) {
    // nothing attracts: stay with the current system
    for (std::size_t k = 0; k < dist.ids.size(); ++k)
      dist.probabilities[k] = dist.ids[k] == j.allegiance ? 1.0 : 0.0;
    dist.found_new_probability = 0.0;
    return dist;
  }
  for (auto& p : dist.probabilities) p /= total;
  dist.found_new_probability = spawn_weight / total;
  return dist;
}

std::optional<BeliefId> sample_allegiance(const AllegianceDistribution& dist,
                                          RandomStream& stream) {
  double u = stream.next_double();
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.ids.size(); ++k) {
    acc += dist.probabilities[k];
    if (u < acc) return dist.ids[k];
  }
  if (dist.found_new_probability > 0.0) return std::nullopt;
  // rounding slack: fall back to the last category with any mass
  for (std::size_t k = dist.ids.size(); k-- > 0;) {
    if (dist.probabilities[k] > 0.0) return dist.ids[k];
  }
  throw ContractViolation("sample_allegiance() on an all-zero distribution");
}

}  // namespace revo
