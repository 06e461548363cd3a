#pragma once

#include <map>

#include "revo/allegiance.hpp"
#include "revo/belief.hpp"
#include "revo/types.hpp"

namespace revo {

// One representative genome per live system (its situational exemplar), in
// ascending id order.
std::vector<Genome> representative_genomes(
    const std::map<BeliefId, BeliefSystem>& systems);

// Diversity of the subculture representatives:
//   div = max(d_mn) / (0.5 · Σ_{m≠n} d_mn)
// over the euclidean distance matrix d. Degenerate sets (fewer than two
// representatives, or all coincident) count as 1.0.
double diversity(const std::vector<Genome>& representatives);

// P(S) = dp × div, clamped to [0,1].
double spawn_probability(double dp, double div);

// Found-new weight for one individual: p_spawn for everyone, plus a
// stagnation term for hegemon followers that approaches stagnation_boost as
// the hegemon's rate decays to the floor.
double spawn_weight_for(const Individual& j, double p_spawn, const Census& census,
                        double stagnation_boost);

struct CullOutcome {
  std::vector<BeliefId> removed;
  bool guard_kept_largest = false;  // pathological all-zero case
};

// Deletes every system with zero followers. If that would leave none, the
// largest pre-cull system is retained so at least one system always exists.
CullOutcome cull(std::map<BeliefId, BeliefSystem>& systems,
                 const std::map<BeliefId, int>& follower_counts);

}  // namespace revo
