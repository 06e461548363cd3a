#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace revo {

enum class AlgoKind { Revolutionary, StaticCultural, RestartGa, IslandGa };
enum class ProblemKind { Sphere, Peaks, Rastrigin };

const char* to_string(AlgoKind kind);
const char* to_string(ProblemKind kind);
AlgoKind algo_from_string(const std::string& name);        // throws ConfigError
ProblemKind problem_from_string(const std::string& name);  // throws ConfigError

// Full run configuration. Every field is reachable through the string
// key/value surface below, which backs the config file, CLI overrides, the
// C API and the run-record echo.
struct RunConfig {
  // population and loop
  int population_size = 100;
  int initial_belief_count = 4;
  int dimension = 5;
  int generations = 200;
  std::uint64_t seed = 1;

  // success-rate measurement
  int improvement_window = 20;
  double rate_floor = 1e-12;

  // belief update / influence
  double elite_fraction = 0.2;
  double widen = 0.25;
  double influence_scale = 0.5;

  // variation operators
  double crossover_rate = 0.9;
  double mutation_rate = 0.2;

  // change detection
  int sentinel_count = 10;
  double change_tolerance = 1e-9;

  // dissident spawning
  bool spawning = true;
  double stagnation_boost = 0.05;
  double max_foundings_fraction = 0.1;

  // algorithm / problem selection
  AlgoKind algo = AlgoKind::Revolutionary;
  ProblemKind problem = ProblemKind::Sphere;
  double severity = 1.0;
  int period = 50;
  int peak_count = 5;
  double peak_height_min = 30.0;
  double peak_height_max = 70.0;
  double peak_width_min = 1.0;
  double peak_width_max = 12.0;
  int migration_interval = 10;

  // execution only; must not affect results
  int workers = 1;
};

struct ConfigError : std::runtime_error {
  std::vector<std::string> violations;
  explicit ConfigError(std::vector<std::string> v);
};

// Checked configuration plus derived quantities. Baseline kinds are
// normalized here (ca/restart force a single belief system and no spawning,
// island disables spawning) so the echoed configuration always equals the
// effective one.
struct ValidatedConfig {
  RunConfig values;
  // initial follower count per belief system; remainder goes to the lowest
  // indices
  std::vector<int> initial_subculture_sizes;
};

ValidatedConfig validate_config(RunConfig cfg);

// string key/value surface
std::vector<std::string> config_keys();
void config_set(RunConfig& cfg, const std::string& key,
                const std::string& value);  // throws ConfigError
std::string config_get(const RunConfig& cfg, const std::string& key);
std::map<std::string, std::string> config_echo(const RunConfig& cfg);
RunConfig config_from_entries(const std::map<std::string, std::string>& kv);

// `key = value` lines, blank lines and '#' comments allowed
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace revo
