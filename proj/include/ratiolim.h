/* ratiolim — exact lazy-walk heat kernels on slab-lattice graphs.
 *
 * C interface to the core library: opaque handles, integer status codes,
 * and a thread-local last-error message. All functions returning rl_status
 * leave *out untouched on failure.
 */
#ifndef RATIOLIM_H
#define RATIOLIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rl_status {
    RL_OK = 0,
    RL_CHECK_FAILED = 1,    /* a judged verification check failed */
    RL_CONFIG_ERROR = 2,    /* malformed configuration or usage error */
    RL_RESOURCE_LIMIT = 3,  /* a resource guard refused the computation */
    RL_INVALID_ARGUMENT = 4,
    RL_INTERNAL_ERROR = 5
} rl_status;

typedef struct rl_config rl_config;
typedef struct rl_schedule rl_schedule;
typedef struct rl_graph rl_graph;
typedef struct rl_series rl_series;

const char* rl_version(void);
/* Message for the most recent failure on this thread; empty when none. */
const char* rl_last_error(void);

/* ---- configuration ------------------------------------------------- */

rl_status rl_config_create(rl_config** out);
rl_status rl_config_load(const char* path, rl_config** out);
rl_status rl_config_set(rl_config* cfg, const char* key, const char* value);
void rl_config_free(rl_config* cfg);

/* ---- whole-run commands (the CLI surface) --------------------------- *
 * Outputs land in out_dir. schedule_path may be NULL, meaning
 * "<out_dir>/schedule.txt". quiet suppresses progress notes on stderr.
 * The returned status equals the documented process exit code. */

rl_status rl_run_schedule(const rl_config* cfg, const char* out_dir, int quiet);
rl_status rl_run_build(const rl_config* cfg, const char* out_dir, const char* schedule_path,
                       int quiet);
rl_status rl_run_kernel(const rl_config* cfg, const char* out_dir, const char* schedule_path,
                        int quiet);
rl_status rl_run_experiment(const rl_config* cfg, const char* out_dir, const char* schedule_path,
                            int quiet);
rl_status rl_run_verify(const rl_config* cfg, const char* out_dir, int quiet);
rl_status rl_run_decompose(const rl_config* cfg, const char* out_dir, const char* schedule_path,
                           int quiet);

/* ---- schedules ------------------------------------------------------ */

rl_status rl_schedule_seed(int64_t a_seed, int d, int s, rl_schedule** out);
/* Appends one round from measured constants; gamma_cap 0 means uncapped. */
rl_status rl_schedule_extend(rl_schedule* sched, double alpha, double beta, int64_t gamma_cap);
int rl_schedule_scales(const rl_schedule* sched);
/* k is 1-based; gamma and t are 0 for k = 1. Out-of-range k returns -1. */
int64_t rl_schedule_a(const rl_schedule* sched, int k);
int64_t rl_schedule_b(const rl_schedule* sched, int k);
int64_t rl_schedule_gamma(const rl_schedule* sched, int k);
int64_t rl_schedule_t(const rl_schedule* sched, int k);
void rl_schedule_free(rl_schedule* sched);

/* ---- graphs ---------------------------------------------------------- */

/* Component of the origin of Z^d restricted to [-radius, radius]^d. */
rl_status rl_graph_lattice(int d, int64_t radius, rl_graph** out);
/* Half graph of the schedule: parity 'e' or 'o'; kind 0 = H, 1 = F (clamped). */
rl_status rl_graph_half(const rl_schedule* sched, char parity, int kind, int64_t radius,
                        rl_graph** out);
rl_status rl_graph_glue(const rl_graph* g_e, const rl_graph* g_o, double delta, rl_graph** out);
int64_t rl_graph_vertices(const rl_graph* g);
int64_t rl_graph_edges(const rl_graph* g);
double rl_graph_degree(const rl_graph* g, int64_t v);
int64_t rl_graph_origin_x(const rl_graph* g);
int64_t rl_graph_origin_y(const rl_graph* g);
/* Writes the plain-text graph dump. */
rl_status rl_graph_dump(const rl_graph* g, const char* path);
void rl_graph_free(rl_graph* g);

/* ---- kernels ---------------------------------------------------------- */

/* Diagonal kernel p(start, start; t), t = 0..T. lazy != 0 selects the lazy
 * walk, 0 the simple walk. */
rl_status rl_kernel_diag(const rl_graph* g, int64_t start, int64_t T, int lazy, rl_series** out);
/* First-return probabilities f(t), t = 1..T (entry 0 is 0). */
rl_status rl_first_return(const rl_graph* g, int64_t start, int64_t T, rl_series** out);
/* Escape probability interval after a horizon-T return sum. */
rl_status rl_escape(const rl_graph* g, int64_t start, int64_t T, int d_eff, double* lower,
                    double* upper);
int64_t rl_series_length(const rl_series* s);
double rl_series_value(const rl_series* s, int64_t t);
int64_t rl_series_exact_horizon(const rl_series* s);
void rl_series_free(rl_series* s);

#ifdef __cplusplus
}
#endif

#endif /* RATIOLIM_H */
