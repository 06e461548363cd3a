#include "revo.h"

#include <cmath>
#include <cstring>
#include <string>

#include "revo/baselines.hpp"
#include "revo/config.hpp"
#include "revo/engine.hpp"
#include "revo/problem.hpp"
#include "revo/record.hpp"

struct revo_config {
  revo::RunConfig values;
};

struct revo_record {
  revo::RunRecord data;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
revo_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const revo::ConfigError& e) {
    set_error(e.what());
    return REVO_ERR_CONFIG;
  } catch (const revo::ContractViolation& e) {
    set_error(e.what());
    return REVO_ERR_RUN;
  } catch (const std::exception& e) {
    set_error(e.what());
    return REVO_ERR_IO;
  }
}

revo_status copy_out(const std::string& value, char* buf, size_t buflen) {
  if (!buf || buflen == 0) {
    set_error("output buffer is null or empty");
    return REVO_ERR_ARGUMENT;
  }
  size_t n = value.size() < buflen - 1 ? value.size() : buflen - 1;
  std::memcpy(buf, value.data(), n);
  buf[n] = '\0';
  return REVO_OK;
}

}  // namespace

extern "C" {

const char* revo_version(void) { return "0.1.0"; }

const char* revo_last_error(void) { return g_last_error.c_str(); }

revo_config* revo_config_new(void) { return new revo_config(); }

void revo_config_free(revo_config* cfg) { delete cfg; }

revo_status revo_config_set(revo_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  return guarded([&] {
    try {
      revo::config_set(cfg->values, key, value);
    } catch (const revo::ConfigError& e) {
      set_error(e.what());
      return REVO_ERR_ARGUMENT;
    }
    return REVO_OK;
  });
}

revo_status revo_config_get(const revo_config* cfg, const char* key, char* buf,
                            size_t buflen) {
  if (!cfg || !key) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  return guarded([&] {
    try {
      return copy_out(revo::config_get(cfg->values, key), buf, buflen);
    } catch (const revo::ConfigError& e) {
      set_error(e.what());
      return REVO_ERR_ARGUMENT;
    }
  });
}

revo_status revo_config_load_file(revo_config* cfg, const char* path) {
  if (!cfg || !path) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  return guarded([&] {
    cfg->values = revo::load_config_file(path);
    return REVO_OK;
  });
}

revo_status revo_config_validate(const revo_config* cfg) {
  if (!cfg) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  return guarded([&] {
    revo::validate_config(cfg->values);
    return REVO_OK;
  });
}

revo_status revo_run(const revo_config* cfg, revo_record** out) {
  if (!cfg || !out) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    revo::ValidatedConfig validated = revo::validate_config(cfg->values);
    std::unique_ptr<revo::DynamicProblem> problem =
        revo::make_problem(validated.values);
    revo::RunRecord record = revo::run(validated, *problem);
    *out = new revo_record{std::move(record)};
    return REVO_OK;
  });
}

void revo_record_free(revo_record* record) { delete record; }

long revo_record_row_count(const revo_record* record) {
  return record ? static_cast<long>(record->data.rows.size()) : 0;
}

revo_status revo_record_row(const revo_record* record, long index, revo_row* out) {
  if (!record || !out) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  if (index < 0 || index >= revo_record_row_count(record)) {
    set_error("row index out of range");
    return REVO_ERR_ARGUMENT;
  }
  const revo::GenerationRow& row = record->data.rows[index];
  out->generation = row.generation;
  out->time_step = row.time_step;
  out->best_fitness = row.best_fitness;
  out->offline_error = row.offline_error;
  out->n_systems = row.n_systems;
  out->hegemon_id = row.hegemon_id;
  out->hegemon_share = row.hegemon_share;
  out->dp = row.dp;
  out->div = row.div;
  out->foundings = row.foundings;
  out->deletions = row.deletions;
  return REVO_OK;
}

double revo_record_offline_error(const revo_record* record) {
  if (!record || record->data.rows.empty()) return std::nan("");
  return record->data.rows.back().offline_error;
}

double revo_record_final_best_fitness(const revo_record* record) {
  if (!record) return std::nan("");
  return record->data.best_fitness;
}

revo_status revo_record_final_best_genome(const revo_record* record, double* out,
                                          size_t capacity, size_t* length) {
  if (!record || !length) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  const revo::Genome& genome = record->data.best_genome;
  *length = genome.size();
  if (out) {
    size_t n = genome.size() < capacity ? genome.size() : capacity;
    for (size_t i = 0; i < n; ++i) out[i] = genome[i];
  }
  return REVO_OK;
}

revo_status revo_record_config_value(const revo_record* record, const char* key,
                                     char* buf, size_t buflen) {
  if (!record || !key) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  auto it = record->data.config.find(key);
  if (it == record->data.config.end()) {
    set_error("config key '" + std::string(key) + "' not present in record");
    return REVO_ERR_ARGUMENT;
  }
  return copy_out(it->second, buf, buflen);
}

revo_status revo_record_write_json(const revo_record* record, const char* path) {
  if (!record || !path) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  return guarded([&] {
    revo::write_json(record->data, path);
    return REVO_OK;
  });
}

revo_status revo_record_write_csv(const revo_record* record, const char* path) {
  if (!record || !path) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  return guarded([&] {
    revo::write_csv(record->data, path);
    return REVO_OK;
  });
}

char* revo_record_to_json(const revo_record* record) {
  if (!record) return nullptr;
  try {
    std::string text = revo::to_json(record->data);
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.data(), text.size() + 1);
    return out;
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void revo_string_free(char* text) { delete[] text; }

revo_status revo_record_load_json(const char* path, revo_record** out) {
  if (!path || !out) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    *out = new revo_record{revo::load_record(path)};
    return REVO_OK;
  });
}

revo_status revo_record_stages(const revo_record* record, double theta,
                               revo_stage_report* out) {
  if (!record || !out) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  return guarded([&] {
    revo::StageReport report = revo::detect_stages(record->data, theta);
    out->has_formation = report.formation.has_value();
    out->formation = report.formation.value_or(-1);
    out->has_dissidence = report.dissidence.has_value();
    out->dissidence = report.dissidence.value_or(-1);
    out->has_turnover = report.turnover.has_value();
    out->turnover = report.turnover.value_or(-1);
    out->hegemon_change_count = static_cast<long>(report.hegemon_changes.size());
    return REVO_OK;
  });
}

revo_status revo_record_hegemon_change(const revo_record* record, double theta,
                                       long index, long* out_generation) {
  if (!record || !out_generation) {
    set_error("null argument");
    return REVO_ERR_ARGUMENT;
  }
  return guarded([&] {
    revo::StageReport report = revo::detect_stages(record->data, theta);
    if (index < 0 ||
        index >= static_cast<long>(report.hegemon_changes.size())) {
      set_error("hegemon change index out of range");
      return REVO_ERR_ARGUMENT;
    }
    *out_generation = report.hegemon_changes[index];
    return REVO_OK;
  });
}

}  // extern "C"
