#include "revo/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "revo/record.hpp"

namespace revo {

const char* to_string(AlgoKind kind) {
  switch (kind) {
    case AlgoKind::Revolutionary: return "ra";
    case AlgoKind::StaticCultural: return "ca";
    case AlgoKind::RestartGa: return "restart";
    case AlgoKind::IslandGa: return "island";
  }
  return "?";
}

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Sphere: return "sphere";
    case ProblemKind::Peaks: return "peaks";
    case ProblemKind::Rastrigin: return "rastrigin";
  }
  return "?";
}

AlgoKind algo_from_string(const std::string& name) {
  if (name == "ra") return AlgoKind::Revolutionary;
  if (name == "ca") return AlgoKind::StaticCultural;
  if (name == "restart") return AlgoKind::RestartGa;
  if (name == "island") return AlgoKind::IslandGa;
  throw ConfigError({"unknown algo '" + name + "' (expected ra|ca|restart|island)"});
}

ProblemKind problem_from_string(const std::string& name) {
  if (name == "sphere") return ProblemKind::Sphere;
  if (name == "peaks") return ProblemKind::Peaks;
  if (name == "rastrigin") return ProblemKind::Rastrigin;
  throw ConfigError({"unknown problem '" + name + "' (expected sphere|peaks|rastrigin)"});
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> v)
    : std::runtime_error(join(v)), violations(std::move(v)) {}

namespace {

struct Key {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

long long parse_int(const char* key, const std::string& value) {
  long long out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError({std::string(key) + ": not an integer: '" + value + "'"});
  return out;
}

std::uint64_t parse_u64(const char* key, const std::string& value) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError({std::string(key) + ": not an unsigned integer: '" + value + "'"});
  return out;
}

double parse_real(const char* key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double out = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError({std::string(key) + ": not a number: '" + value + "'"});
  }
}

bool parse_bool(const char* key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError({std::string(key) + ": not a boolean: '" + value + "'"});
}

#define INT_KEY(name, field)                                                  \
  Key{name, [](RunConfig& c, const std::string& v) {                         \
        c.field = static_cast<int>(parse_int(name, v));                      \
      },                                                                      \
      [](const RunConfig& c) { return std::to_string(c.field); }}

#define REAL_KEY(name, field)                                        \
  Key{name,                                                          \
      [](RunConfig& c, const std::string& v) { c.field = parse_real(name, v); }, \
      [](const RunConfig& c) { return format_double(c.field); }}

const std::vector<Key>& key_table() {
  static const std::vector<Key> table = {
      INT_KEY("population_size", population_size),
      INT_KEY("initial_belief_count", initial_belief_count),
      INT_KEY("dimension", dimension),
      INT_KEY("generations", generations),
      Key{"seed",
          [](RunConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); },
          [](const RunConfig& c) { return std::to_string(c.seed); }},
      INT_KEY("improvement_window", improvement_window),
      REAL_KEY("rate_floor", rate_floor),
      REAL_KEY("elite_fraction", elite_fraction),
      REAL_KEY("widen", widen),
      REAL_KEY("influence_scale", influence_scale),
      REAL_KEY("crossover_rate", crossover_rate),
      REAL_KEY("mutation_rate", mutation_rate),
      INT_KEY("sentinel_count", sentinel_count),
      REAL_KEY("change_tolerance", change_tolerance),
      Key{"spawning",
          [](RunConfig& c, const std::string& v) { c.spawning = parse_bool("spawning", v); },
          [](const RunConfig& c) { return c.spawning ? "true" : "false"; }},
      REAL_KEY("stagnation_boost", stagnation_boost),
      REAL_KEY("max_foundings_fraction", max_foundings_fraction),
      Key{"algo",
          [](RunConfig& c, const std::string& v) { c.algo = algo_from_string(v); },
          [](const RunConfig& c) { return to_string(c.algo); }},
      Key{"problem",
          [](RunConfig& c, const std::string& v) { c.problem = problem_from_string(v); },
          [](const RunConfig& c) { return to_string(c.problem); }},
      REAL_KEY("severity", severity),
      INT_KEY("period", period),
      INT_KEY("peak_count", peak_count),
      REAL_KEY("peak_height_min", peak_height_min),
      REAL_KEY("peak_height_max", peak_height_max),
      REAL_KEY("peak_width_min", peak_width_min),
      REAL_KEY("peak_width_max", peak_width_max),
      INT_KEY("migration_interval", migration_interval),
      INT_KEY("workers", workers),
  };
  return table;
}

#undef INT_KEY
#undef REAL_KEY

const Key* find_key(const std::string& name) {
  for (const auto& k : key_table())
    if (name == k.name) return &k;
  return nullptr;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> names;
  for (const auto& k : key_table()) names.emplace_back(k.name);
  return names;
}

void config_set(RunConfig& cfg, const std::string& key, const std::string& value) {
  const Key* k = find_key(key);
  if (!k) throw ConfigError({"unknown config key '" + key + "'"});
  k->set(cfg, value);
}

std::string config_get(const RunConfig& cfg, const std::string& key) {
  const Key* k = find_key(key);
  if (!k) throw ConfigError({"unknown config key '" + key + "'"});
  return k->get(cfg);
}

std::map<std::string, std::string> config_echo(const RunConfig& cfg) {
  std::map<std::string, std::string> kv;
  for (const auto& k : key_table()) kv[k.name] = k.get(cfg);
  return kv;
}

RunConfig config_from_entries(const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  for (const auto& [key, value] : kv) config_set(cfg, key, value);
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    auto e = s.find_last_not_of(ws);
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError({"config line " + std::to_string(lineno) + ": expected 'key = value'"});
    config_set(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ValidatedConfig validate_config(RunConfig cfg) {
  // per-kind normalization: ca and restart are single-population, no
  // spawning; islands are fixed, no spawning
  if (cfg.algo == AlgoKind::StaticCultural || cfg.algo == AlgoKind::RestartGa) {
    cfg.initial_belief_count = 1;
    cfg.spawning = false;
  } else if (cfg.algo == AlgoKind::IslandGa) {
    cfg.spawning = false;
  }

  std::vector<std::string> violations;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) violations.push_back(msg);
  };

  require(cfg.population_size >= 1, "population_size must be ≥ 1");
  require(cfg.initial_belief_count >= 1, "initial_belief_count must be ≥ 1");
  require(cfg.initial_belief_count <= cfg.population_size,
          "initial_belief_count must be ≤ population_size");
  require(cfg.dimension >= 1, "dimension must be ≥ 1");
  require(cfg.generations >= 0, "generations must be ≥ 0");
  require(cfg.improvement_window >= 1, "improvement_window must be ≥ 1");
  require(cfg.rate_floor > 0.0, "rate_floor must be > 0");
  require(cfg.elite_fraction > 0.0 && cfg.elite_fraction <= 1.0,
          "elite_fraction must be in (0,1]");
  require(cfg.widen >= 0.0 && cfg.widen <= 1.0, "widen must be in [0,1]");
  require(cfg.influence_scale > 0.0, "influence_scale must be > 0");
  require(cfg.crossover_rate >= 0.0 && cfg.crossover_rate <= 1.0,
          "crossover_rate must be in [0,1]");
  require(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0,
          "mutation_rate must be in [0,1]");
  require(cfg.sentinel_count >= 1, "sentinel_count must be ≥ 1");
  require(cfg.change_tolerance > 0.0, "change_tolerance must be > 0");
  require(cfg.stagnation_boost >= 0.0, "stagnation_boost must be ≥ 0");
  require(cfg.max_foundings_fraction >= 0.0 && cfg.max_foundings_fraction <= 1.0,
          "max_foundings_fraction must be in [0,1]");
  require(cfg.severity >= 0.0, "severity must be ≥ 0");
  require(cfg.period >= 1, "period must be ≥ 1");
  require(cfg.peak_count >= 1, "peak_count must be ≥ 1");
  require(cfg.peak_height_min > 0.0 && cfg.peak_height_max >= cfg.peak_height_min,
          "peak height range must satisfy 0 < min ≤ max");
  require(cfg.peak_width_min > 0.0 && cfg.peak_width_max >= cfg.peak_width_min,
          "peak width range must satisfy 0 < min ≤ max");
  require(cfg.migration_interval >= 1, "migration_interval must be ≥ 1");
  require(cfg.workers >= 1, "workers must be ≥ 1");

  if (!violations.empty()) throw ConfigError(std::move(violations));

  ValidatedConfig out;
  out.values = cfg;
  int base = cfg.population_size / cfg.initial_belief_count;
  int remainder = cfg.population_size % cfg.initial_belief_count;
  out.initial_subculture_sizes.assign(cfg.initial_belief_count, base);
  for (int i = 0; i < remainder; ++i) ++out.initial_subculture_sizes[i];
  return out;
}

}  // namespace revo
