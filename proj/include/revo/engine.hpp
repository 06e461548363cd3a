#pragma once

#include <functional>
#include <map>
#include <string_view>

#include "revo/allegiance.hpp"
#include "revo/belief.hpp"
#include "revo/config.hpp"
#include "revo/dissent.hpp"
#include "revo/problem.hpp"
#include "revo/record.hpp"
#include "revo/rng.hpp"

namespace revo {

struct WorldState {
  std::vector<Individual> individuals;
  std::map<BeliefId, BeliefSystem> systems;
  Census census;
  SentinelSet sentinels;
  long generation = 0;
  long time_step = 0;
  BeliefId next_id = 0;
};

// The generation loop. One engine drives all four algorithm kinds; the kind
// selects the mutation policy (normative-interval influence vs plain
// fixed-scale steps), whether allegiances are re-sampled, whether a detected
// change restarts the population, and whether islands migrate.
//
// Determinism contract: for a fixed validated config the emitted record is
// identical for any worker count. Reproduction uses one random stream per
// (generation, belief system); allegiance sampling draws exactly one uniform
// per individual from a generation-labeled stream in the sequential phase.
class Engine {
 public:
  Engine(ValidatedConfig cfg, const DynamicProblem& problem);

  void initialize();
  void step();
  RunRecord run();

  const WorldState& world() const { return world_; }
  const RunRecord& record() const { return record_; }

  // test hook: receives phase names in execution order
  std::function<void(std::string_view)> phase_hook;

 private:
  struct SubcultureResult {
    BeliefId id;
    std::vector<Individual> members;
  };

  void note_phase(std::string_view name) {
    if (phase_hook) phase_hook(name);
  }
  void evaluate_all(long t);
  void restart_population(long t);
  void reproduce_subcultures();
  void migrate_islands();
  std::map<BeliefId, std::vector<int>> followers_by_system() const;
  Genome plain_mutate(std::span<const double> parent, RandomStream& stream) const;
  void emit_row(double dp, double div, int foundings, int deletions);
  void check_conservation(const char* where) const;

  ValidatedConfig cfg_;
  const DynamicProblem& problem_;
  WorldState world_;
  RunRecord record_;
  double gap_sum_ = 0.0;  // running Σ (best − optimum)
  bool optimum_known_ = true;
  BeliefId last_hegemon_ = 0;
  bool initialized_ = false;
};

RunRecord run(const ValidatedConfig& cfg, const DynamicProblem& problem);

}  // namespace revo
