#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kernel.hpp"
#include "schedule.hpp"

namespace ratiolim {

// Extremes of p(t) t^{d_eff/2} over [window_lo, window_hi].
struct BoundFit {
    double c_lower = 0.0;
    double C_upper = 0.0;
    std::int64_t window_lo = 0;
    std::int64_t window_hi = 0;

    double spread() const { return C_upper / c_lower; }
};

BoundFit check_delmotte(const KernelSeries& series, int d_eff, std::int64_t window_lo,
                        std::int64_t window_hi);

// max over r in [r_min, r_max] of |B(x,2r)| / |B(x,r)| with |B| the sum of
// weighted degrees in the ball. boundary_ok is false when B(x, 2 r_max) may
// touch the truncation boundary.
struct DoublingResult {
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    std::int64_t r_min = 0;
    std::int64_t r_max = 0;
    bool boundary_ok = true;
};

DoublingResult check_volume_doubling(const WeightedGraph& g, std::int64_t x, std::int64_t r_max,
                                     std::int64_t r_min = 1);

// Largest probe value of
//   sum_{y in B(x,r)} deg(y) |f(y) - fbar|^2
//   / (r^2 sum_{(y,z) in E(B(x,2r))} w(y,z) (f(y) - f(z))^2)
// over the probe family: the d coordinate projections, n_random seeded
// pseudo-random functions, and n_power successive diffusion iterates on the
// ball (approaching the worst case from below).
struct PoincareResult {
    double constant = 0.0;
    bool degenerate = false;  // every probe had zero Dirichlet energy
    int probes_used = 0;
};

PoincareResult check_poincare(const WeightedGraph& g, std::int64_t x, std::int64_t r,
                              std::uint64_t seed, int n_random = 32, int n_power = 8);

// The ratio for one explicit probe f (indexed by graph vertex; only the
// values on B(x, 2r) matter). Returns -1 for zero Dirichlet energy.
double poincare_ratio(const WeightedGraph& g, std::int64_t x, std::int64_t r,
                      const std::vector<double>& f);

// Smallest C with |p(t) - p(s)| <= C (|t-s| log^3 t / sqrt(t)) p(t)
//                                 + C exp(-log^2 t / 8).
// Requires |t - s| <= sqrt(t).
double check_lazy_smoothing(const KernelSeries& series, std::int64_t t, std::int64_t s);

// Checkpoint inequalities along the schedule: at even k the ratio must be
// >= factor, at odd k <= 1/factor. Checkpoints past the table's exact rows
// are reported as unreached.
enum class NkStatus { pass, fail, unreached };

struct NkCheckRow {
    int k = 0;
    std::int64_t t_k = 0;
    bool even = false;
    double ratio = 0.0;
    double required = 0.0;
    NkStatus status = NkStatus::unreached;
};

std::vector<NkCheckRow> check_nk(const RatioTable& table, const ScaleSchedule& sched,
                                 double factor);

}  // namespace ratiolim
