#ifndef RESIL_RESIL_H_
#define RESIL_RESIL_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RESIL_API __declspec(dllexport)
#else
#define RESIL_API __attribute__((visibility("default")))
#endif

/* Status codes double as CLI exit codes. */
typedef enum resil_status {
  RESIL_OK = 0,
  RESIL_INTERNAL = 1,
  RESIL_INFEASIBLE = 2,
  RESIL_INPUT_ERROR = 3,
  RESIL_SIZE_GUARD = 4,
  RESIL_BAD_ARGUMENT = 5
} resil_status;

typedef struct resil_instance resil_instance;
typedef struct resil_result resil_result;

typedef struct resil_options {
  int power_constraint;
  int oracle_check;
  int use_cuts;
  int run_response;
  int run_dynamic;
  int timing; /* wall-clock fields in JSON */
} resil_options;

typedef struct resil_bench_config {
  uint64_t seed;
  int n_min;
  int n_max;
  double edge_factor;
} resil_bench_config;

/* Summary row of one pipeline run. Fields are -1 when not available. */
typedef struct resil_summary {
  int status; /* RESIL_OK or RESIL_INFEASIBLE (no attack) */
  int n;
  int edges;
  int x_star_size;
  int res_initial;
  int res_reconstructed;
  int links_added;
  double budget_used;
  int x_dyn_size;
  int res_dynamic;
} resil_summary;

RESIL_API const char* resil_version(void);

/* Message for the last failing call on this thread; never NULL. */
RESIL_API const char* resil_last_error(void);

/* Frees strings returned through char** out-parameters. */
RESIL_API void resil_string_free(char* s);

RESIL_API void resil_options_default(resil_options* o);
RESIL_API void resil_bench_config_default(resil_bench_config* c);

/* Instances. Node labels crossing this API are one-based. */
RESIL_API resil_status resil_instance_parse(const char* text, resil_instance** out);
RESIL_API resil_status resil_instance_load(const char* path, resil_instance** out);
RESIL_API resil_status resil_instance_generate(int n, int edges, uint64_t seed, resil_instance** out);
RESIL_API resil_status resil_instance_generate_batch(const resil_bench_config* c, int index,
                                                     resil_instance** out);
RESIL_API void resil_instance_free(resil_instance* inst);
RESIL_API resil_status resil_instance_emit(const resil_instance* inst, char** out);
RESIL_API resil_status resil_instance_node_count(const resil_instance* inst, int* out);
RESIL_API resil_status resil_instance_set_budget_attack(resil_instance* inst, double budget);
/* INFINITY means unlimited. */
RESIL_API resil_status resil_instance_set_budget_response(resil_instance* inst, double budget);
/* type: "targeted", "designated", "random" or "distributed". */
RESIL_API resil_status resil_instance_set_attack(resil_instance* inst, const char* type, const int* nodes,
                                                 size_t count);

/* Pipeline. On an infeasible attack stage *out is still set and the call
   returns RESIL_INFEASIBLE. */
RESIL_API resil_status resil_run_pipeline(const resil_instance* inst, const resil_options* o,
                                          resil_result** out);
/* Runs count instances on up to `threads` workers; out[k] belongs to
   instances[k]. Returns the worst status. */
RESIL_API resil_status resil_run_batch(const resil_instance* const* instances, size_t count,
                                       const resil_options* o, int threads, resil_result** out);
RESIL_API void resil_result_free(resil_result* r);
RESIL_API resil_status resil_result_json(const resil_result* r, char** out);
RESIL_API resil_status resil_result_summary(const resil_result* r, resil_summary* out);
RESIL_API resil_status resil_result_csv_row(const resil_result* r, const char* instance_name, char** out);
RESIL_API resil_status resil_result_table_row(const resil_result* r, const char* instance_name, char** out);
RESIL_API const char* resil_csv_header(void);
RESIL_API const char* resil_table_header(void);

/* Budget sweep as CSV (budget,links_added,budget_used,resilience,robustness). */
RESIL_API resil_status resil_sweep_csv(const resil_instance* inst, const double* budgets, size_t count,
                                       const resil_options* o, char** out);

/* which: "attack", "response" or "reduced". For the response models the
   removal set is cut_x when given, else the instance's designated set, else
   the solved worst cut. */
RESIL_API resil_status resil_export_mip(const resil_instance* inst, const char* which, const int* cut_x,
                                        size_t cut_count, int power_constraint, char** out);

/* Lifted cover cuts of sum coeffs[j] x_j <= capacity, as JSON. */
RESIL_API resil_status resil_cuts_audit(const double* coeffs, size_t count, double capacity, char** out);

/* Rupture score of a fixed removal set, as JSON. */
RESIL_API resil_status resil_rupture(const resil_instance* inst, const int* x, size_t count, char** out);

#ifdef __cplusplus
}
#endif

#endif  // RESIL_RESIL_H_
