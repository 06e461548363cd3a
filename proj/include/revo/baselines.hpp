#pragma once

#include "revo/config.hpp"
#include "revo/engine.hpp"
#include "revo/problem.hpp"
#include "revo/record.hpp"

namespace revo {

// Runs one of the comparison algorithms on the shared engine so every kind
// emits a schema-identical record under the same seed and evaluation budget:
//  - StaticCultural: single belief system, spawning disabled
//  - RestartGa: plain GA that re-initializes the population whenever a
//    change is detected
//  - IslandGa: fixed subpopulations, plain mutation, ring migration of the
//    best individual every migration_interval generations
RunRecord run_baseline(AlgoKind kind, RunConfig cfg, const DynamicProblem& problem);

}  // namespace revo
