#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revo/types.hpp"

namespace revo {

// One generation's worth of observable run state. `known_optimum` and the
// census appear in the JSON document only; the CSV carries the fixed column
// set below.
struct GenerationRow {
  long generation = 0;
  long time_step = 0;
  double best_fitness = 0.0;
  double offline_error = 0.0;  // running mean of best-vs-optimum gap; NaN when the optimum is unknown
  double known_optimum = 0.0;  // NaN when unknown
  int n_systems = 0;
  BeliefId hegemon_id = 0;
  double hegemon_share = 0.0;
  double dp = 0.0;
  double div = 0.0;
  int foundings = 0;
  int deletions = 0;
  std::vector<std::pair<BeliefId, int>> census;  // (id, follower count), ascending id
};

struct RunEvent {
  long generation = 0;
  std::string type;    // change | restart | migration | hegemon | cull-guard
  std::string detail;
};

struct RunRecord {
  std::map<std::string, std::string> config;  // full key/value echo
  std::vector<GenerationRow> rows;
  std::vector<RunEvent> events;
  Genome best_genome;
  double best_fitness = 0.0;
};

inline constexpr const char* kCsvHeader =
    "generation,time_step,best_fitness,offline_error,n_systems,hegemon_id,"
    "hegemon_share,dp,div,foundings,deletions";

// Shortest round-trip decimal representation ("nan" for NaN).
std::string format_double(double v);

std::string to_csv(const RunRecord& record);
std::string to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& text);

void write_csv(const RunRecord& record, const std::string& path);
void write_json(const RunRecord& record, const std::string& path);
RunRecord load_record(const std::string& path);

// Mean over rows of (best_fitness − known_optimum). Absent when any row has
// no known optimum, or the record has no rows.
std::optional<double> offline_error(const RunRecord& record);

// Lifecycle landmarks scanned from the per-generation rows:
//  - formation: first generation whose hegemon share reaches θ_h
//  - dissidence: first later generation where the live-system count rises
//    above 1
//  - turnover: first hegemon-id change after dissidence (after formation if
//    dissidence never happens; first change at all if neither happens)
// `hegemon_changes` lists every generation whose hegemon differs from the
// previous row, regardless of stage.
struct StageReport {
  std::optional<long> formation;
  std::optional<long> dissidence;
  std::optional<long> turnover;
  std::vector<long> hegemon_changes;
};

StageReport detect_stages(const RunRecord& record, double theta);

}  // namespace revo
