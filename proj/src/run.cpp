#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "errors.hpp"
#include "graph.hpp"
#include "kernel.hpp"
#include "lattice.hpp"
#include "schedule.hpp"
#include "textio.hpp"
#include "verify.hpp"

namespace ratiolim {

namespace {

constexpr std::uint64_t kProbeSeed = 0x243F6A8885A308D3ull;  // fixed: outputs stay byte-stable

void note(const RunOptions& opt, const std::string& msg) {
    if (!opt.quiet) std::fprintf(stderr, "%s\n", msg.c_str());
}

std::string out_path(const RunOptions& opt, const std::string& name) {
    std::filesystem::create_directories(opt.out_dir);
    return (std::filesystem::path(opt.out_dir) / name).string();
}

std::string schedule_path(const RunOptions& opt) {
    return opt.schedule_path.empty()
               ? (std::filesystem::path(opt.out_dir) / "schedule.txt").string()
               : opt.schedule_path;
}

void write_or_throw(const std::string& path, const std::string& text) {
    if (!write_text_file(path, text)) throw std::runtime_error("cannot write " + path);
}

BuildLimits limits_of(const RunConfig& cfg) {
    return BuildLimits{cfg.max_cells, cfg.max_vertices};
}

WeightedGraph build_half(const RunConfig& cfg, const ScaleSchedule& sched, Parity parity, int k,
                         bool clamped) {
    const auto pred = [&sched, parity, k, clamped](std::span<const Coord> p) {
        return clamped ? in_f(p, parity, k, sched) : in_h(p, parity, k, sched);
    };
    return enumerate_graph(pred, BoxSpec::cube(static_cast<int>(cfg.d), cfg.box_radius),
                           static_cast<int>(cfg.d), limits_of(cfg));
}

KernelSeries sliced(const KernelSeries& s, std::int64_t T) {
    KernelSeries out = s;
    if (T + 1 < out.length()) out.values.resize(static_cast<std::size_t>(T) + 1);
    return out;
}

// Constants of one induction round, measured on the H (alpha, escape) and F
// (beta) graphs of the current prefix.
ConstantsReport measure_round(const RunConfig& cfg, const ScaleSchedule& sched,
                              const RunOptions& opt) {
    const int k = sched.scales();
    const WeightedGraph h_e = build_half(cfg, sched, Parity::even, k, false);
    const WeightedGraph h_o = build_half(cfg, sched, Parity::odd, k, false);
    const WeightedGraph f_e = build_half(cfg, sched, Parity::even, k, true);
    const WeightedGraph f_o = build_half(cfg, sched, Parity::odd, k, true);

    const std::int64_t horizon =
        std::min({h_e.distance_to_boundary(h_e.origin_x()), h_o.distance_to_boundary(h_o.origin_x()),
                  f_e.distance_to_boundary(f_e.origin_x()), f_o.distance_to_boundary(f_o.origin_x())});
    if (horizon < 2) throw ResourceError("schedule: box too small for constant estimation");

    auto estimate_pair = [&](std::int64_t window) {
        window = std::min(window, horizon - 1);
        const double a_e = estimate_alpha(
            sliced(heat_kernel_diag(h_e, h_e.origin_x(), window, WalkSemantics::lazy), window),
            static_cast<int>(cfg.d));
        const double a_o = estimate_alpha(
            sliced(heat_kernel_diag(h_o, h_o.origin_x(), window, WalkSemantics::lazy), window),
            static_cast<int>(cfg.d));
        const double b_e =
            estimate_beta(first_return(f_e, f_e.origin_x(), window), static_cast<int>(cfg.s));
        const double b_o =
            estimate_beta(first_return(f_o, f_o.origin_x(), window), static_cast<int>(cfg.s));
        return std::pair<double, double>{std::max(a_e, a_o), std::max(b_e, b_o)};
    };

    // First pass over a short window fixes gamma's size; the second pass
    // re-estimates over [1, 4 gamma^4], the range the checkpoint arguments use.
    auto [alpha0, beta0] = estimate_pair(std::min(cfg.est_window_cap, horizon - 1));
    std::int64_t gamma0 = gamma_from_constants(alpha0, beta0);
    if (cfg.gamma_cap > 0) gamma0 = std::min(gamma0, cfg.gamma_cap);
    __int128 wide = static_cast<__int128>(4) * gamma0 * gamma0 * gamma0 * gamma0;
    const std::int64_t refresh =
        wide > horizon - 1 ? horizon - 1 : static_cast<std::int64_t>(wide);
    auto [alpha, beta] = refresh > cfg.est_window_cap ? estimate_pair(refresh)
                                                      : std::pair<double, double>{alpha0, beta0};

    ConstantsReport report;
    report.alpha = alpha;
    report.beta = beta;
    report.horizon = std::max(refresh, std::min(cfg.est_window_cap, horizon - 1));

    std::int64_t escape_T = cfg.escape_T > 0 ? std::min(cfg.escape_T, horizon - 1) : horizon - 1;
    const EscapeEstimate eps_e = escape_prob(h_e, h_e.origin_x(), escape_T, static_cast<int>(cfg.d));
    const EscapeEstimate eps_o = escape_prob(h_o, h_o.origin_x(), escape_T, static_cast<int>(cfg.d));
    report.eps_e = {eps_e.lower, eps_e.upper, eps_e.tail_valid};
    report.eps_o = {eps_o.lower, eps_o.upper, eps_o.tail_valid};
    report.delta = 0.5 * std::min(eps_e.lower, eps_o.lower);
    note(opt, "round " + std::to_string(k + 1) + ": alpha=" + fmt17(alpha) + " beta=" + fmt17(beta) +
                  " delta=" + fmt17(report.delta));
    return report;
}

std::string constants_text(const ConstantsReport& r) {
    std::ostringstream ss;
    ss << "alpha " << fmt17(r.alpha) << '\n'
       << "beta " << fmt17(r.beta) << '\n'
       << "horizon " << r.horizon << '\n'
       << "epsilon_e " << fmt17(r.eps_e.lower) << ' ' << fmt17(r.eps_e.upper) << '\n'
       << "epsilon_o " << fmt17(r.eps_o.lower) << ' ' << fmt17(r.eps_o.upper) << '\n'
       << "delta " << fmt17(r.delta) << '\n';
    return ss.str();
}

struct Instance {
    WeightedGraph graph;
    double delta;
};

Instance build_instance(const RunConfig& cfg, const ScaleSchedule& sched, const RunOptions& opt) {
    const int k = sched.scales();
    WeightedGraph g_e = build_half(cfg, sched, Parity::even, k, false);
    WeightedGraph g_o = build_half(cfg, sched, Parity::odd, k, false);
    double delta = cfg.delta_override;
    if (delta <= 0.0) {
        const std::int64_t horizon = std::min(g_e.distance_to_boundary(g_e.origin_x()),
                                              g_o.distance_to_boundary(g_o.origin_x()));
        if (horizon < 2) throw ResourceError("instance: box too small for escape estimation");
        const std::int64_t escape_T =
            cfg.escape_T > 0 ? std::min(cfg.escape_T, horizon - 1) : horizon - 1;
        const EscapeEstimate eps_e =
            escape_prob(g_e, g_e.origin_x(), escape_T, static_cast<int>(cfg.d));
        const EscapeEstimate eps_o =
            escape_prob(g_o, g_o.origin_x(), escape_T, static_cast<int>(cfg.d));
        delta = 0.5 * std::min(eps_e.lower, eps_o.lower);
        if (!(delta > 0.0))
            throw ConfigError("instance: estimated escape lower bounds give delta <= 0 "
                              "(recurrent-looking halves); set delta_override");
    }
    note(opt, "instance: delta=" + fmt17(delta));
    WeightedGraph g = glue(g_e, g_o, delta);
    return {std::move(g), delta};
}

std::string ratio_csv(const RatioTable& table, bool approximate_mode) {
    std::ostringstream ss;
    ss << (approximate_mode ? "t,p_xx,p_yy,ratio,approx" : "t,p_xx,p_yy,ratio") << '\n';
    for (const RatioRow& row : table.rows) {
        ss << row.t << ',' << fmt17(row.p_xx) << ',' << fmt17(row.p_yy) << ',' << fmt17(row.ratio);
        if (approximate_mode) ss << ',' << (row.exact ? "" : "*");
        ss << '\n';
    }
    return ss.str();
}

int guarded(const RunOptions& opt, int (*body)(const RunConfig&, const RunOptions&),
            const RunConfig& cfg) {
    try {
        return body(cfg, opt);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ResourceError& e) {
        std::fprintf(stderr, "resource guard: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

int schedule_body(const RunConfig& cfg, const RunOptions& opt) {
    ScaleSchedule sched = ScaleSchedule::seed(cfg.a_seed, static_cast<int>(cfg.d),
                                              static_cast<int>(cfg.s));
    int exit_code = 0;
    for (int round = 2; round <= cfg.scales; ++round) {
        const ConstantsReport report = measure_round(cfg, sched, opt);
        write_or_throw(out_path(opt, "constants_round_" + std::to_string(round) + ".txt"),
                       constants_text(report));
        const ScaleSchedule extended = extend_schedule(sched, report, cfg.gamma_cap);
        if (extended.a.back() > cfg.box_radius) {
            note(opt, "schedule: a_" + std::to_string(round) + " = " +
                          std::to_string(extended.a.back()) +
                          " exceeds box_radius; halting with the completed prefix");
            exit_code = 3;
            break;
        }
        sched = extended;
    }
    write_or_throw(out_path(opt, "schedule.txt"), serialize_schedule(sched));
    note(opt, "schedule: " + std::to_string(sched.scales()) + " scale(s) written");
    return exit_code;
}

ScaleSchedule load_schedule(const RunConfig& cfg, const RunOptions& opt) {
    const std::string path = schedule_path(opt);
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception&) {
        throw ConfigError("schedule file not found: " + path + " (run the schedule command first)");
    }
    return parse_schedule(text, static_cast<int>(cfg.d), static_cast<int>(cfg.s));
}

int build_body(const RunConfig& cfg, const RunOptions& opt) {
    const ScaleSchedule sched = load_schedule(cfg, opt);
    const Instance inst = build_instance(cfg, sched, opt);
    write_or_throw(out_path(opt, "graph.txt"), dump_graph(inst.graph));
    note(opt, "build: " + std::to_string(inst.graph.vertex_count()) + " vertices, " +
                  std::to_string(inst.graph.edge_count()) + " edges");
    return 0;
}

RatioTable instance_table(const RunConfig& cfg, const Instance& inst, const RunOptions& opt) {
    RatioTable table = ratio_experiment(inst.graph, inst.graph.origin_x(), inst.graph.origin_y(),
                                        cfg.T, cfg.allow_approximate);
    if (table.achieved_T < cfg.T)
        note(opt, "kernel: exact horizon " + std::to_string(table.exact_horizon) +
                      " limits the table to t <= " + std::to_string(table.achieved_T));
    return table;
}

int kernel_body(const RunConfig& cfg, const RunOptions& opt) {
    const ScaleSchedule sched = load_schedule(cfg, opt);
    const Instance inst = build_instance(cfg, sched, opt);
    const RatioTable table = instance_table(cfg, inst, opt);
    write_or_throw(out_path(opt, "kernel.csv"), ratio_csv(table, cfg.allow_approximate));
    return 0;
}

int experiment_body(const RunConfig& cfg, const RunOptions& opt) {
    const ScaleSchedule sched = load_schedule(cfg, opt);
    const Instance inst = build_instance(cfg, sched, opt);
    const RatioTable table = instance_table(cfg, inst, opt);
    write_or_throw(out_path(opt, "ratio.csv"), ratio_csv(table, cfg.allow_approximate));

    const std::vector<NkCheckRow> rows = check_nk(table, sched, cfg.factor);
    std::ostringstream ss;
    for (const NkCheckRow& row : rows) {
        ss << "nk_k" << row.k << " t=" << row.t_k << ' ' << (row.even ? "even" : "odd") << ' '
           << (row.status == NkStatus::unreached ? "-" : fmt17(row.ratio)) << ' '
           << fmt17(row.required) << ' '
           << (row.status == NkStatus::pass
                   ? "PASS"
                   : row.status == NkStatus::fail ? "FAIL" : "UNREACHED")
           << '\n';
    }
    write_or_throw(out_path(opt, "nk_report.txt"), ss.str());
    return 0;
}

int decompose_body(const RunConfig& cfg, const RunOptions& opt) {
    const ScaleSchedule sched = load_schedule(cfg, opt);
    const Instance inst = build_instance(cfg, sched, opt);
    const std::int64_t gamma = cfg.decompose_gamma;
    const std::int64_t t_max = std::min(cfg.decompose_T, cfg.T);
    std::ostringstream ss;
    ss << "t,p1,p2,p3,p12,p_yy\n";
    for (std::int64_t t = 2 * gamma + 1; t <= t_max; ++t) {
        const VisitDecomposition d = visit_decomposition(
            inst.graph, inst.graph.origin_x(), inst.graph.origin_y(), t, gamma);
        ss << t << ',' << fmt17(d.p1) << ',' << fmt17(d.p2) << ',' << fmt17(d.p3) << ','
           << fmt17(d.p12) << ',' << fmt17(d.p_yy) << '\n';
    }
    write_or_throw(out_path(opt, "decompose.csv"), ss.str());
    return 0;
}

struct ReportLine {
    std::string name;
    std::string window;
    double value = 0.0;
    double threshold = 0.0;
    bool judged = false;
    bool pass = true;
};

std::string report_text(const std::vector<ReportLine>& lines) {
    std::ostringstream ss;
    for (const ReportLine& line : lines) {
        ss << line.name << ' ' << line.window << ' ' << fmt17(line.value) << ' '
           << (line.judged ? fmt17(line.threshold) : "-") << ' '
           << (line.pass ? "PASS" : "FAIL") << '\n';
    }
    return ss.str();
}

int verify_body(const RunConfig& cfg, const RunOptions& opt) {
    const int d = static_cast<int>(cfg.d);
    const WeightedGraph box = enumerate_graph([](std::span<const Coord>) { return true; },
                                              BoxSpec::cube(d, cfg.box_radius), d, limits_of(cfg));
    const std::int64_t origin = box.origin_x();
    const std::int64_t horizon = box.distance_to_boundary(origin);

    std::int64_t t_need = 0;
    for (const std::int64_t t : cfg.smoothing_ts)
        t_need = std::max(t_need, t + static_cast<std::int64_t>(std::sqrt(static_cast<double>(t))));
    t_need = std::max<std::int64_t>(t_need, std::min<std::int64_t>(200, horizon - 1));
    note(opt, "verify: kernel series to T=" + std::to_string(t_need) + " on " +
                  std::to_string(box.vertex_count()) + " vertices");
    const KernelSeries series = heat_kernel_diag(box, origin, t_need, WalkSemantics::lazy);

    std::vector<ReportLine> lines;

    // Polynomial on-diagonal decay at the configured effective dimension.
    {
        const int d_eff = cfg.verify_deff > 0 ? static_cast<int>(cfg.verify_deff) : d;
        const std::int64_t lo = 10;
        const std::int64_t hi = std::min<std::int64_t>(200, horizon - 1);
        if (hi >= lo) {
            const BoundFit fit = check_delmotte(sliced(series, hi), d_eff, lo, hi);
            lines.push_back({"delmotte_d" + std::to_string(d_eff),
                             "[" + std::to_string(lo) + "," + std::to_string(hi) + "]",
                             fit.spread(), cfg.cc_bound, true, fit.spread() <= cfg.cc_bound});
        }
    }

    // Growth of ball volumes under radius doubling.
    {
        const std::int64_t r_max = std::min(cfg.vd_r_max, (horizon - 1) / 2);
        if (r_max >= 1) {
            const DoublingResult vd = check_volume_doubling(box, origin, r_max);
            const double bound = cfg.vd_bound > 0.0 ? cfg.vd_bound
                                                    : std::ldexp(1.0, d) + 0.5;
            lines.push_back({"volume_doubling", "[1," + std::to_string(r_max) + "]", vd.max_ratio,
                             bound, true, vd.max_ratio <= bound});
        }
    }

    // Probe-family Poincare constants, judged on stability across radii.
    {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        int used = 0;
        for (const std::int64_t r : cfg.poincare_radii) {
            if (2 * r >= horizon) continue;
            const PoincareResult pr = check_poincare(box, origin, r, kProbeSeed);
            if (pr.degenerate) continue;
            lines.push_back({"poincare_r" + std::to_string(r), "r=" + std::to_string(r),
                             pr.constant, 0.0, false, true});
            lo = std::min(lo, pr.constant);
            hi = std::max(hi, pr.constant);
            ++used;
        }
        if (used >= 2)
            lines.push_back({"poincare_stability", "radii", hi / lo, cfg.poincare_stability, true,
                             hi / lo <= cfg.poincare_stability});
    }

    // Lazy smoothing constants at s = t + floor(sqrt(t)), judged on stability
    // across the doubling sequence; small t stays informational.
    {
        std::vector<double> cs;
        std::vector<std::int64_t> ts;
        for (const std::int64_t t : cfg.smoothing_ts) {
            if (t < 16) continue;
            const std::int64_t s = t + static_cast<std::int64_t>(std::sqrt(static_cast<double>(t)));
            if (s >= series.length()) continue;
            const double c = check_lazy_smoothing(series, t, s);
            lines.push_back({"lazy_smoothing_t" + std::to_string(t),
                             "s=" + std::to_string(s), c, 0.0, false, true});
            cs.push_back(c);
            ts.push_back(t);
        }
        for (std::size_t i = 1; i < cs.size(); ++i) {
            const double ratio = cs[i - 1] > cs[i] ? cs[i - 1] / cs[i] : cs[i] / cs[i - 1];
            lines.push_back({"smoothing_stability_t" + std::to_string(ts[i - 1]) + "_t" +
                                 std::to_string(ts[i]),
                             "doubling", ratio, cfg.smoothing_stability, true,
                             ratio <= cfg.smoothing_stability});
        }
    }

    write_or_throw(out_path(opt, "verify_report.txt"), report_text(lines));
    for (const ReportLine& line : lines)
        if (line.judged && !line.pass) return 1;
    return 0;
}

}  // namespace

int cmd_schedule(const RunConfig& cfg, const RunOptions& opt) {
    return guarded(opt, schedule_body, cfg);
}
int cmd_build(const RunConfig& cfg, const RunOptions& opt) { return guarded(opt, build_body, cfg); }
int cmd_kernel(const RunConfig& cfg, const RunOptions& opt) { return guarded(opt, kernel_body, cfg); }
int cmd_experiment(const RunConfig& cfg, const RunOptions& opt) {
    return guarded(opt, experiment_body, cfg);
}
int cmd_verify(const RunConfig& cfg, const RunOptions& opt) { return guarded(opt, verify_body, cfg); }
int cmd_decompose(const RunConfig& cfg, const RunOptions& opt) {
    return guarded(opt, decompose_body, cfg);
}

}  // namespace ratiolim
