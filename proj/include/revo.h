/* C interface to the revo optimization core.
 *
 * Handles are opaque; every function that can fail returns a revo_status and
 * leaves a message retrievable through revo_last_error() (thread-local).
 * Configurations are plain string key/value pairs — the same keys accepted
 * by the config file and the CLI flags. Records are immutable once a run
 * finishes and may be queried, serialized to JSON/CSV, or reloaded from
 * JSON. All functions are safe to call from multiple threads as long as a
 * given handle is used by one thread at a time.
 */
#ifndef REVO_H
#define REVO_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum revo_status {
  REVO_OK = 0,
  REVO_ERR_ARGUMENT = 1, /* bad pointer, unknown key, malformed value */
  REVO_ERR_CONFIG = 2,   /* configuration invariant violated */
  REVO_ERR_IO = 3,       /* file could not be read or written */
  REVO_ERR_RUN = 4       /* engine contract violation during a run */
} revo_status;

typedef struct revo_config revo_config;
typedef struct revo_record revo_record;

const char* revo_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
const char* revo_last_error(void);

/* --- configuration ----------------------------------------------------- */

revo_config* revo_config_new(void);
void revo_config_free(revo_config* cfg);

revo_status revo_config_set(revo_config* cfg, const char* key, const char* value);
/* Writes the current value of `key` into buf (NUL-terminated, truncated to
 * buflen). */
revo_status revo_config_get(const revo_config* cfg, const char* key, char* buf,
                            size_t buflen);
/* Loads `key = value` lines; '#' starts a comment. Later revo_config_set
 * calls override. */
revo_status revo_config_load_file(revo_config* cfg, const char* path);
/* Checks every invariant; the error message names the first violation. */
revo_status revo_config_validate(const revo_config* cfg);

/* --- runs and records --------------------------------------------------- */

/* Executes one full run (algorithm, problem and seed all come from cfg) and
 * hands back a new record. */
revo_status revo_run(const revo_config* cfg, revo_record** out);
void revo_record_free(revo_record* record);

typedef struct revo_row {
  long generation;
  long time_step;
  double best_fitness;
  double offline_error; /* NaN when the optimum is unknown */
  long n_systems;
  unsigned long long hegemon_id;
  double hegemon_share;
  double dp;
  double div;
  long foundings;
  long deletions;
} revo_row;

long revo_record_row_count(const revo_record* record);
revo_status revo_record_row(const revo_record* record, long index, revo_row* out);
/* Final running offline error (NaN when unavailable). */
double revo_record_offline_error(const revo_record* record);
double revo_record_final_best_fitness(const revo_record* record);
/* Copies the final best genome into out (up to capacity entries); returns the
 * genome length via *length. */
revo_status revo_record_final_best_genome(const revo_record* record, double* out,
                                          size_t capacity, size_t* length);
/* Echoed config value for `key` as recorded at run time. */
revo_status revo_record_config_value(const revo_record* record, const char* key,
                                     char* buf, size_t buflen);

revo_status revo_record_write_json(const revo_record* record, const char* path);
revo_status revo_record_write_csv(const revo_record* record, const char* path);
/* Serialized JSON document; free with revo_string_free. */
char* revo_record_to_json(const revo_record* record);
void revo_string_free(char* text);
revo_status revo_record_load_json(const char* path, revo_record** out);

/* --- lifecycle stages ---------------------------------------------------- */

typedef struct revo_stage_report {
  int has_formation; /* hegemon share reached theta */
  long formation;
  int has_dissidence; /* live-system count rose above 1 afterwards */
  long dissidence;
  int has_turnover; /* hegemon id changed after the stages above */
  long turnover;
  long hegemon_change_count; /* all hegemon changes, any stage */
} revo_stage_report;

revo_status revo_record_stages(const revo_record* record, double theta,
                               revo_stage_report* out);
/* Generation of the i-th hegemon change (0 ≤ i < hegemon_change_count). */
revo_status revo_record_hegemon_change(const revo_record* record, double theta,
                                       long index, long* out_generation);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* REVO_H */
