#include "revo/baselines.hpp"

namespace revo {

RunRecord run_baseline(AlgoKind kind, RunConfig cfg, const DynamicProblem& problem) {
  cfg.algo = kind;
  return run(validate_config(cfg), problem);
}

}  // namespace revo
