#include "revo/record.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace revo {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

std::string to_csv(const RunRecord& record) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : record.rows) {
    out += std::to_string(row.generation);
    out += ',';
    out += std::to_string(row.time_step);
    out += ',';
    out += format_double(row.best_fitness);
    out += ',';
    out += format_double(row.offline_error);
    out += ',';
    out += std::to_string(row.n_systems);
    out += ',';
    out += std::to_string(row.hegemon_id);
    out += ',';
    out += format_double(row.hegemon_share);
    out += ',';
    out += format_double(row.dp);
    out += ',';
    out += format_double(row.div);
    out += ',';
    out += std::to_string(row.foundings);
    out += ',';
    out += std::to_string(row.deletions);
    out += '\n';
  }
  return out;
}

namespace {

using json = nlohmann::json;

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double number_or_nan(const json& j) {
  if (j.is_null()) return std::nan("");
  return j.get<double>();
}

json row_to_json(const GenerationRow& row) {
  json census = json::object();
  for (const auto& [id, count] : row.census) census[std::to_string(id)] = count;
  return json{{"generation", row.generation},
              {"time_step", row.time_step},
              {"best_fitness", row.best_fitness},
              {"offline_error", number_or_null(row.offline_error)},
              {"known_optimum", number_or_null(row.known_optimum)},
              {"n_systems", row.n_systems},
              {"hegemon_id", row.hegemon_id},
              {"hegemon_share", row.hegemon_share},
              {"dp", row.dp},
              {"div", row.div},
              {"foundings", row.foundings},
              {"deletions", row.deletions},
              {"census", census}};
}

GenerationRow row_from_json(const json& j) {
  GenerationRow row;
  row.generation = j.at("generation").get<long>();
  row.time_step = j.at("time_step").get<long>();
  row.best_fitness = j.at("best_fitness").get<double>();
  row.offline_error = number_or_nan(j.at("offline_error"));
  row.known_optimum = number_or_nan(j.at("known_optimum"));
  row.n_systems = j.at("n_systems").get<int>();
  row.hegemon_id = j.at("hegemon_id").get<BeliefId>();
  row.hegemon_share = j.at("hegemon_share").get<double>();
  row.dp = j.at("dp").get<double>();
  row.div = j.at("div").get<double>();
  row.foundings = j.at("foundings").get<int>();
  row.deletions = j.at("deletions").get<int>();
  for (const auto& [key, value] : j.at("census").items())
    row.census.emplace_back(std::stoull(key), value.get<int>());
  std::sort(row.census.begin(), row.census.end());
  return row;
}

}  // namespace

std::string to_json(const RunRecord& record) {
  json rows = json::array();
  for (const auto& row : record.rows) rows.push_back(row_to_json(row));
  json events = json::array();
  for (const auto& ev : record.events)
    events.push_back(json{{"generation", ev.generation},
                          {"type", ev.type},
                          {"detail", ev.detail}});
  json doc{{"schema", "revo-run-record/1"},
           {"config", record.config},
           {"rows", rows},
           {"events", events},
           {"final_best",
            json{{"genome", record.best_genome},
                 {"fitness", number_or_null(record.best_fitness)}}}};
  return doc.dump(2) + "\n";
}

RunRecord record_from_json(const std::string& text) {
  json doc = json::parse(text);
  RunRecord record;
  record.config = doc.at("config").get<std::map<std::string, std::string>>();
  for (const auto& j : doc.at("rows")) record.rows.push_back(row_from_json(j));
  for (const auto& j : doc.at("events"))
    record.events.push_back(RunEvent{j.at("generation").get<long>(),
                                     j.at("type").get<std::string>(),
                                     j.at("detail").get<std::string>()});
  const auto& best = doc.at("final_best");
  record.best_genome = best.at("genome").get<Genome>();
  record.best_fitness = number_or_nan(best.at("fitness"));
  return record;
}

namespace {

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

void write_csv(const RunRecord& record, const std::string& path) {
  write_text(path, to_csv(record));
}

void write_json(const RunRecord& record, const std::string& path) {
  write_text(path, to_json(record));
}

RunRecord load_record(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open record '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return record_from_json(text);
}

std::optional<double> offline_error(const RunRecord& record) {
  if (record.rows.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& row : record.rows) {
    if (std::isnan(row.known_optimum)) return std::nullopt;
    sum += row.best_fitness - row.known_optimum;
  }
  return sum / static_cast<double>(record.rows.size());
}

StageReport detect_stages(const RunRecord& record, double theta) {
  StageReport report;
  const auto& rows = record.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].hegemon_id != rows[i - 1].hegemon_id)
      report.hegemon_changes.push_back(rows[i].generation);
    if (!report.formation && rows[i].hegemon_share >= theta)
      report.formation = rows[i].generation;
    else if (report.formation && !report.dissidence && i > 0 &&
             rows[i].n_systems > 1 && rows[i].n_systems > rows[i - 1].n_systems)
      report.dissidence = rows[i].generation;
  }
  long after = report.dissidence ? *report.dissidence
                                 : report.formation.value_or(-1);
  for (long g : report.hegemon_changes) {
    if (g > after) {
      report.turnover = g;
      break;
    }
  }
  return report;
}

}  // namespace revo
