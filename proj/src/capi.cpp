#include "ratiolim.h"

#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "kernel.hpp"
#include "lattice.hpp"
#include "run.hpp"
#include "schedule.hpp"
#include "textio.hpp"

namespace {

thread_local std::string g_last_error;

rl_status set_error(rl_status code, const char* what) {
    g_last_error = what ? what : "";
    return code;
}

template <typename Fn>
rl_status wrap(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return RL_OK;
    } catch (const ratiolim::ConfigError& e) {
        return set_error(RL_CONFIG_ERROR, e.what());
    } catch (const ratiolim::ResourceError& e) {
        return set_error(RL_RESOURCE_LIMIT, e.what());
    } catch (const std::invalid_argument& e) {
        return set_error(RL_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return set_error(RL_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return set_error(RL_INTERNAL_ERROR, e.what());
    } catch (...) {
        return set_error(RL_INTERNAL_ERROR, "unknown error");
    }
}

rl_status map_exit(int code) {
    switch (code) {
        case 0: return RL_OK;
        case 1: return RL_CHECK_FAILED;
        case 2: return RL_CONFIG_ERROR;
        case 3: return RL_RESOURCE_LIMIT;
        default: return RL_INTERNAL_ERROR;
    }
}

ratiolim::RunOptions options(const char* out_dir, const char* schedule_path, int quiet) {
    ratiolim::RunOptions opt;
    opt.out_dir = out_dir ? out_dir : ".";
    if (schedule_path) opt.schedule_path = schedule_path;
    opt.quiet = quiet != 0;
    return opt;
}

}  // namespace

struct rl_config {
    ratiolim::RunConfig cfg;
};
struct rl_schedule {
    ratiolim::ScaleSchedule sched;
};
struct rl_graph {
    ratiolim::WeightedGraph graph;
};
struct rl_series {
    std::vector<double> values;
    std::int64_t exact_horizon = 0;
};

extern "C" {

const char* rl_version(void) { return "1.0.0"; }

const char* rl_last_error(void) { return g_last_error.c_str(); }

rl_status rl_config_create(rl_config** out) {
    if (!out) return set_error(RL_INVALID_ARGUMENT, "null out");
    return wrap([&] { *out = new rl_config{ratiolim::RunConfig{}}; });
}

rl_status rl_config_load(const char* path, rl_config** out) {
    if (!out || !path) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return wrap([&] { *out = new rl_config{ratiolim::load_config(path)}; });
}

rl_status rl_config_set(rl_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return wrap([&] {
        ratiolim::config_set(cfg->cfg, key, value);
        cfg->cfg.validate();
    });
}

void rl_config_free(rl_config* cfg) { delete cfg; }

rl_status rl_run_schedule(const rl_config* cfg, const char* out_dir, int quiet) {
    if (!cfg || !out_dir) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return map_exit(ratiolim::cmd_schedule(cfg->cfg, options(out_dir, nullptr, quiet)));
}

rl_status rl_run_build(const rl_config* cfg, const char* out_dir, const char* schedule_path,
                       int quiet) {
    if (!cfg || !out_dir) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return map_exit(ratiolim::cmd_build(cfg->cfg, options(out_dir, schedule_path, quiet)));
}

rl_status rl_run_kernel(const rl_config* cfg, const char* out_dir, const char* schedule_path,
                        int quiet) {
    if (!cfg || !out_dir) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return map_exit(ratiolim::cmd_kernel(cfg->cfg, options(out_dir, schedule_path, quiet)));
}

rl_status rl_run_experiment(const rl_config* cfg, const char* out_dir, const char* schedule_path,
                            int quiet) {
    if (!cfg || !out_dir) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return map_exit(ratiolim::cmd_experiment(cfg->cfg, options(out_dir, schedule_path, quiet)));
}

rl_status rl_run_verify(const rl_config* cfg, const char* out_dir, int quiet) {
    if (!cfg || !out_dir) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return map_exit(ratiolim::cmd_verify(cfg->cfg, options(out_dir, nullptr, quiet)));
}

rl_status rl_run_decompose(const rl_config* cfg, const char* out_dir, const char* schedule_path,
                           int quiet) {
    if (!cfg || !out_dir) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return map_exit(ratiolim::cmd_decompose(cfg->cfg, options(out_dir, schedule_path, quiet)));
}

rl_status rl_schedule_seed(int64_t a_seed, int d, int s, rl_schedule** out) {
    if (!out) return set_error(RL_INVALID_ARGUMENT, "null out");
    return wrap([&] { *out = new rl_schedule{ratiolim::ScaleSchedule::seed(a_seed, d, s)}; });
}

rl_status rl_schedule_extend(rl_schedule* sched, double alpha, double beta, int64_t gamma_cap) {
    if (!sched) return set_error(RL_INVALID_ARGUMENT, "null schedule");
    return wrap([&] {
        ratiolim::ConstantsReport report;
        report.alpha = alpha;
        report.beta = beta;
        sched->sched = ratiolim::extend_schedule(sched->sched, report, gamma_cap);
    });
}

int rl_schedule_scales(const rl_schedule* sched) { return sched ? sched->sched.scales() : 0; }

#define RL_SCHEDULE_GETTER(name, field)                                       \
    int64_t rl_schedule_##name(const rl_schedule* sched, int k) {             \
        if (!sched || k < 1 || k > sched->sched.scales()) return -1;          \
        return sched->sched.field[static_cast<std::size_t>(k - 1)];           \
    }

RL_SCHEDULE_GETTER(a, a)
RL_SCHEDULE_GETTER(b, b)
RL_SCHEDULE_GETTER(gamma, gamma)
RL_SCHEDULE_GETTER(t, t_checkpoints)
#undef RL_SCHEDULE_GETTER

void rl_schedule_free(rl_schedule* sched) { delete sched; }

rl_status rl_graph_lattice(int d, int64_t radius, rl_graph** out) {
    if (!out) return set_error(RL_INVALID_ARGUMENT, "null out");
    return wrap([&] {
        *out = new rl_graph{ratiolim::enumerate_graph(
            [](std::span<const ratiolim::Coord>) { return true; },
            ratiolim::BoxSpec::cube(d, radius), d, {})};
    });
}

rl_status rl_graph_half(const rl_schedule* sched, char parity, int kind, int64_t radius,
                        rl_graph** out) {
    if (!sched || !out) return set_error(RL_INVALID_ARGUMENT, "null argument");
    if (parity != 'e' && parity != 'o') return set_error(RL_INVALID_ARGUMENT, "parity must be e or o");
    return wrap([&] {
        const ratiolim::ScaleSchedule& s = sched->sched;
        const ratiolim::Parity p = parity == 'e' ? ratiolim::Parity::even : ratiolim::Parity::odd;
        const int k = s.scales();
        auto pred = [&s, p, k, kind](std::span<const ratiolim::Coord> pt) {
            return kind ? ratiolim::in_f(pt, p, k, s) : ratiolim::in_h(pt, p, k, s);
        };
        *out = new rl_graph{ratiolim::enumerate_graph(pred, ratiolim::BoxSpec::cube(s.dim, radius),
                                                      s.dim, {})};
    });
}

rl_status rl_graph_glue(const rl_graph* g_e, const rl_graph* g_o, double delta, rl_graph** out) {
    if (!g_e || !g_o || !out) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return wrap([&] { *out = new rl_graph{ratiolim::glue(g_e->graph, g_o->graph, delta)}; });
}

int64_t rl_graph_vertices(const rl_graph* g) { return g ? g->graph.vertex_count() : -1; }
int64_t rl_graph_edges(const rl_graph* g) { return g ? g->graph.edge_count() : -1; }

double rl_graph_degree(const rl_graph* g, int64_t v) {
    if (!g || v < 0 || v >= g->graph.vertex_count()) return -1.0;
    return g->graph.degree(v);
}

int64_t rl_graph_origin_x(const rl_graph* g) { return g ? g->graph.origin_x() : -1; }
int64_t rl_graph_origin_y(const rl_graph* g) { return g ? g->graph.origin_y() : -1; }

rl_status rl_graph_dump(const rl_graph* g, const char* path) {
    if (!g || !path) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return wrap([&] {
        if (!ratiolim::write_text_file(path, ratiolim::dump_graph(g->graph)))
            throw std::runtime_error(std::string("cannot write ") + path);
    });
}

void rl_graph_free(rl_graph* g) { delete g; }

rl_status rl_kernel_diag(const rl_graph* g, int64_t start, int64_t T, int lazy, rl_series** out) {
    if (!g || !out) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return wrap([&] {
        const ratiolim::KernelSeries s = ratiolim::heat_kernel_diag(
            g->graph, start, T,
            lazy ? ratiolim::WalkSemantics::lazy : ratiolim::WalkSemantics::simple);
        *out = new rl_series{s.values, s.exact_horizon};
    });
}

rl_status rl_first_return(const rl_graph* g, int64_t start, int64_t T, rl_series** out) {
    if (!g || !out) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return wrap([&] {
        *out = new rl_series{ratiolim::first_return(g->graph, start, T),
                             g->graph.distance_to_boundary(start)};
    });
}

rl_status rl_escape(const rl_graph* g, int64_t start, int64_t T, int d_eff, double* lower,
                    double* upper) {
    if (!g || !lower || !upper) return set_error(RL_INVALID_ARGUMENT, "null argument");
    return wrap([&] {
        const ratiolim::EscapeEstimate e = ratiolim::escape_prob(g->graph, start, T, d_eff);
        *lower = e.lower;
        *upper = e.upper;
    });
}

int64_t rl_series_length(const rl_series* s) {
    return s ? static_cast<int64_t>(s->values.size()) : -1;
}

double rl_series_value(const rl_series* s, int64_t t) {
    if (!s || t < 0 || t >= static_cast<int64_t>(s->values.size())) return -1.0;
    return s->values[static_cast<std::size_t>(t)];
}

int64_t rl_series_exact_horizon(const rl_series* s) { return s ? s->exact_horizon : -1; }

void rl_series_free(rl_series* s) { delete s; }

}  // extern "C"
