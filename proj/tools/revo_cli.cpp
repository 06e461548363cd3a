// Command-line front end for the revo shared library. Talks to the core
// exclusively through the C API in revo.h.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "revo.h"

namespace fs = std::filesystem;

namespace {

struct ConfigHandle {
  revo_config* ptr = revo_config_new();
  ~ConfigHandle() { revo_config_free(ptr); }
};

struct RecordHandle {
  revo_record* ptr = nullptr;
  ~RecordHandle() { revo_record_free(ptr); }
};

[[noreturn]] void fail(const std::string& message) {
  throw std::runtime_error(message);
}

void check(revo_status status, const std::string& context) {
  if (status != REVO_OK) fail(context + ": " + revo_last_error());
}

// Tracks artifacts so a failing command leaves nothing half-written.
class ArtifactSet {
 public:
  void add(const std::string& path) { paths_.push_back(path); }
  void keep() { paths_.clear(); }
  ~ArtifactSet() {
    for (const auto& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

 private:
  std::vector<std::string> paths_;
};

struct KeyFlag {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr KeyFlag kFlags[] = {
    {"--pop", "population_size", "total individuals across all subcultures"},
    {"--beliefs", "initial_belief_count", "initial belief systems (islands for algo=island)"},
    {"--dim", "dimension", "genome dimension"},
    {"--generations", "generations", "generation budget"},
    {"--seed", "seed", "run seed"},
    {"--window", "improvement_window", "rate-of-improvement window (generations)"},
    {"--elite", "elite_fraction", "fraction of followers that may update the belief system"},
    {"--widen", "widen", "normative half-width factor for newly founded systems"},
    {"--influence-scale", "influence_scale", "step scale inside normative intervals"},
    {"--crossover", "crossover_rate", "uniform crossover probability"},
    {"--mutation", "mutation_rate", "per-gene mutation probability"},
    {"--sentinels", "sentinel_count", "fixed probe points for change detection"},
    {"--change-tolerance", "change_tolerance", "sentinel value change threshold"},
    {"--spawning", "spawning", "allow dissident founding (true|false)"},
    {"--stagnation-boost", "stagnation_boost", "extra defection weight for stagnant hegemons"},
    {"--max-foundings", "max_foundings_fraction", "per-generation founding cap as a population fraction"},
    {"--algo", "algo", "ra|ca|restart|island"},
    {"--problem", "problem", "sphere|peaks|rastrigin"},
    {"--severity", "severity", "landscape shift magnitude"},
    {"--period", "period", "generations between landscape shifts"},
    {"--peaks", "peak_count", "number of peaks (problem=peaks)"},
    {"--migration-interval", "migration_interval", "generations between island migrations"},
    {"--workers", "workers", "worker threads inside one run (results are identical for any count)"},
};

// Accumulated key=value assignments in the order given on the command line.
using Assignments = std::vector<std::pair<std::string, std::string>>;

void add_config_flags(CLI::App* cmd, Assignments& assignments,
                      std::string& config_path) {
  cmd->add_option("--config", config_path,
                  "config file with `key = value` lines (flags override)");
  for (const auto& kf : kFlags) {
    std::string key = kf.key;
    cmd->add_option(kf.flag, kf.help)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->each([&assignments, key](const std::string& value) {
          assignments.emplace_back(key, value);
        });
  }
  cmd->add_option("--set",
                  "set any config key directly (repeatable), e.g. --set rate_floor=1e-12")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->each([&assignments](const std::string& pair) {
        auto eq = pair.find('=');
        if (eq == std::string::npos)
          throw CLI::ValidationError("--set", "expected key=value, got '" + pair + "'");
        assignments.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
      });
}

void apply_config(ConfigHandle& cfg, const std::string& config_path,
                  const Assignments& assignments) {
  if (!config_path.empty())
    check(revo_config_load_file(cfg.ptr, config_path.c_str()),
          "loading '" + config_path + "'");
  for (const auto& [key, value] : assignments) {
    if (revo_config_set(cfg.ptr, key.c_str(), value.c_str()) != REVO_OK)
      fail("invalid value for " + key + ": " + revo_last_error());
  }
  check(revo_config_validate(cfg.ptr), "invalid configuration");
}

std::vector<unsigned long long> parse_seeds(const std::string& spec) {
  std::vector<unsigned long long> seeds;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    auto dots = token.find("..");
    try {
      if (dots == std::string::npos) {
        seeds.push_back(std::stoull(token));
      } else {
        unsigned long long lo = std::stoull(token.substr(0, dots));
        unsigned long long hi = std::stoull(token.substr(dots + 2));
        if (hi < lo) fail("seed range '" + token + "' is descending");
        for (unsigned long long s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::invalid_argument&) {
      fail("bad seed token '" + token + "' (expected N or A..B)");
    } catch (const std::out_of_range&) {
      fail("seed token '" + token + "' out of range");
    }
  }
  if (seeds.empty()) fail("no seeds given");
  return seeds;
}

std::vector<std::string> split_list(const std::string& spec) {
  std::vector<std::string> out;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Median and Tukey-hinge quartiles (median of lower/upper half).
struct Quartiles {
  double q1 = std::nan("");
  double median = std::nan("");
  double q3 = std::nan("");
};

Quartiles quartiles(std::vector<double> values) {
  Quartiles q;
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  auto median_of = [&](size_t begin, size_t end) {  // half-open
    size_t n = end - begin;
    size_t mid = begin + n / 2;
    return n % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  };
  size_t n = values.size();
  q.median = median_of(0, n);
  if (n >= 2) {
    q.q1 = median_of(0, n / 2);
    q.q3 = median_of(n - n / 2, n);
  } else {
    q.q1 = q.q3 = q.median;
  }
  return q;
}

int cmd_run(const std::string& config_path, const Assignments& assignments,
            const std::string& out_prefix) {
  ConfigHandle cfg;
  apply_config(cfg, config_path, assignments);

  RecordHandle record;
  check(revo_run(cfg.ptr, &record.ptr), "run failed");

  ArtifactSet artifacts;
  std::string json_path = out_prefix + ".json";
  std::string csv_path = out_prefix + ".csv";
  artifacts.add(json_path);
  artifacts.add(csv_path);
  check(revo_record_write_json(record.ptr, json_path.c_str()), "writing " + json_path);
  check(revo_record_write_csv(record.ptr, csv_path.c_str()), "writing " + csv_path);
  artifacts.keep();

  long rows = revo_record_row_count(record.ptr);
  std::cout << "rows: " << rows << "\n"
            << "final best fitness: " << fmt(revo_record_final_best_fitness(record.ptr))
            << "\n"
            << "offline error: " << fmt(revo_record_offline_error(record.ptr)) << "\n"
            << "wrote " << json_path << " and " << csv_path << "\n";
  return 0;
}

int cmd_compare(const std::string& config_path, const Assignments& assignments,
                const std::string& seeds_spec, const std::string& algos_spec,
                const std::string& out_dir, int jobs) {
  auto seeds = parse_seeds(seeds_spec);
  auto algos = split_list(algos_spec);
  if (algos.empty()) fail("no algorithms given");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail("cannot create output directory '" + out_dir + "'");

  struct Cell {
    std::string algo;
    unsigned long long seed;
    double offline_error = std::nan("");
    std::string error;
  };
  std::vector<Cell> cells;
  for (const auto& algo : algos) {
    for (auto seed : seeds) {
      Cell cell;
      cell.algo = algo;
      cell.seed = seed;
      cells.push_back(std::move(cell));
    }
  }

  ArtifactSet artifacts;
  std::mutex artifacts_mu;

  auto run_cell = [&](Cell& cell) {
    ConfigHandle cfg;
    apply_config(cfg, config_path, assignments);
    check(revo_config_set(cfg.ptr, "algo", cell.algo.c_str()),
          "invalid value for algo");
    check(revo_config_set(cfg.ptr, "seed", std::to_string(cell.seed).c_str()),
          "invalid seed");
    RecordHandle record;
    check(revo_run(cfg.ptr, &record.ptr),
          cell.algo + " seed " + std::to_string(cell.seed));
    cell.offline_error = revo_record_offline_error(record.ptr);
    std::string base = out_dir + "/" + cell.algo + "-seed" +
                       std::to_string(cell.seed) + ".json";
    {
      std::lock_guard<std::mutex> lock(artifacts_mu);
      artifacts.add(base);
    }
    check(revo_record_write_json(record.ptr, base.c_str()), "writing " + base);
  };

  if (jobs <= 1) {
    for (auto& cell : cells) run_cell(cell);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    size_t workers = std::min<size_t>(jobs, cells.size());
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          try {
            run_cell(cells[i]);
          } catch (const std::exception& e) {
            cells[i].error = e.what();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& cell : cells)
      if (!cell.error.empty()) fail(cell.error);
  }

  std::string summary_path = out_dir + "/summary.csv";
  artifacts.add(summary_path);
  std::ofstream summary(summary_path);
  if (!summary) fail("cannot write '" + summary_path + "'");
  summary << "algo,runs,median_offline_error,q1,q3\n";

  std::printf("%-10s %5s %22s %12s %12s\n", "algo", "runs", "median_offline_error",
              "q1", "q3");
  for (const auto& algo : algos) {
    std::vector<double> errors;
    for (const auto& cell : cells)
      if (cell.algo == algo) errors.push_back(cell.offline_error);
    Quartiles q = quartiles(errors);
    std::printf("%-10s %5zu %22s %12s %12s\n", algo.c_str(), errors.size(),
                fmt(q.median).c_str(), fmt(q.q1).c_str(), fmt(q.q3).c_str());
    summary << algo << ',' << errors.size() << ',' << fmt(q.median) << ','
            << fmt(q.q1) << ',' << fmt(q.q3) << '\n';
  }
  if (!summary) fail("failed writing '" + summary_path + "'");
  summary.close();
  artifacts.keep();
  std::cout << "wrote " << cells.size() << " records and " << summary_path << "\n";
  return 0;
}

int cmd_stages(const std::string& record_path, double theta) {
  RecordHandle record;
  check(revo_record_load_json(record_path.c_str(), &record.ptr),
        "loading '" + record_path + "'");
  revo_stage_report report{};
  check(revo_record_stages(record.ptr, theta, &report), "stage scan");

  auto show = [](const char* label, int has, long generation) {
    if (has)
      std::cout << label << generation << "\n";
    else
      std::cout << label << "absent\n";
  };
  show("hegemon formation:  ", report.has_formation, report.formation);
  show("dissident era onset: ", report.has_dissidence, report.dissidence);
  show("hegemon turnover:   ", report.has_turnover, report.turnover);
  std::cout << "hegemon changes:    " << report.hegemon_change_count;
  if (report.hegemon_change_count > 0) {
    std::cout << " (at";
    for (long i = 0; i < report.hegemon_change_count; ++i) {
      long g = 0;
      check(revo_record_hegemon_change(record.ptr, theta, i, &g), "stage scan");
      std::cout << ' ' << g;
    }
    std::cout << ')';
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revolutionary-algorithm optimizer for dynamic problems"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "execute one seeded run, write JSON + CSV");
  Assignments run_assignments;
  std::string run_config, run_out = "run";
  add_config_flags(run_cmd, run_assignments, run_config);
  run_cmd->add_option("--out", run_out, "output path prefix (default: run)");

  // compare
  auto* cmp_cmd = app.add_subcommand(
      "compare", "run a seeds × algorithms grid and summarize offline error");
  Assignments cmp_assignments;
  std::string cmp_config, cmp_seeds = "1..5", cmp_algos = "ra,ca,restart,island";
  std::string cmp_out = "compare-out";
  int cmp_jobs = 1;
  add_config_flags(cmp_cmd, cmp_assignments, cmp_config);
  cmp_cmd->add_option("--seeds", cmp_seeds, "seed list, e.g. 1..20 or 1,5,9");
  cmp_cmd->add_option("--algos", cmp_algos, "comma list of ra|ca|restart|island");
  cmp_cmd->add_option("--out", cmp_out, "output directory");
  cmp_cmd->add_option("--jobs", cmp_jobs, "grid cells to run concurrently");

  // stages
  auto* stg_cmd = app.add_subcommand("stages", "scan a stored record for lifecycle stages");
  std::string stg_record;
  double stg_theta = 0.9;
  stg_cmd->add_option("--record", stg_record, "record JSON produced by `run`")
      ->required();
  stg_cmd->add_option("--theta", stg_theta, "hegemon share threshold (default 0.9)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_config, run_assignments, run_out);
    if (cmp_cmd->parsed())
      return cmd_compare(cmp_config, cmp_assignments, cmp_seeds, cmp_algos, cmp_out,
                         cmp_jobs);
    if (stg_cmd->parsed()) return cmd_stages(stg_record, stg_theta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
