#pragma once

#include <cstdint>
#include <vector>

#include "graph.hpp"

namespace ratiolim {

enum class WalkSemantics { lazy, simple };

// Time series p(x, target; t) for t = 0..T. Values for t < exact_horizon
// equal the untruncated (infinite-graph) kernel; later entries are values of
// the finite graph itself.
struct KernelSeries {
    std::vector<double> values;
    std::int64_t exact_horizon = 0;
    WalkSemantics semantics = WalkSemantics::lazy;
    bool stability_flagged = false;  // T beyond the numeric stability budget

    std::int64_t length() const { return static_cast<std::int64_t>(values.size()); }
};

// Walk engine bound to one immutable graph. Reusable across runs.
class Stepper {
  public:
    explicit Stepper(const WeightedGraph& g);

    const WeightedGraph& graph() const { return *g_; }

    // out(u) = 1/2 in(u) + 1/2 sum_{w ~ u} in(w) w(w,u)/deg(w).
    void lazy_step(const std::vector<double>& in, std::vector<double>& out) const;
    // out(u) = sum_{w ~ u} in(w) w(w,u)/deg(w).
    void simple_step(const std::vector<double>& in, std::vector<double>& out) const;
    // Lazy step followed by absorption at `taboo`; returns the absorbed mass.
    double taboo_step(const std::vector<double>& in, std::vector<double>& out,
                      std::int64_t taboo) const;

    // Deterministic chunked-compensated total.
    static double total_mass(const std::vector<double>& v);

  private:
    const WeightedGraph* g_;
};

// Single application of the lazy transition. Throws when the graph has a
// vertex of zero degree (the walk is undefined there).
std::vector<double> lazy_step(const WeightedGraph& g, const std::vector<double>& v);

// Diagonal kernel p(x,x;t), t = 0..T, by iterated stepping from the point
// mass at x. exact_horizon is the graph distance from x to the truncation
// boundary (the walk crosses one edge per move, so shorter times cannot feel
// the truncation).
KernelSeries heat_kernel_diag(const WeightedGraph& g, std::int64_t x, std::int64_t T,
                              WalkSemantics semantics);

// Same evolution, recording the mass at `target` instead of at the start.
KernelSeries heat_kernel_at(const WeightedGraph& g, std::int64_t start, std::int64_t target,
                            std::int64_t T, WalkSemantics semantics);

// sum_{i=0..t} q(x,x;i) C(t,i) 2^{-t}: the lazy kernel assembled from the
// simple one. Binomial weights generated multiplicatively.
double binomial_lazy(const KernelSeries& q_series, std::int64_t t);

// Full taboo evolution: dist[t] is the surviving distribution after t steps
// (mass entering `taboo` removed each step), absorbed[t] the mass removed at
// step t (absorbed[0] = 0). Materializes T+1 vectors; meant for small graphs.
struct TabooSeries {
    std::vector<std::vector<double>> dist;
    std::vector<double> absorbed;
};
TabooSeries taboo_kernel(const WeightedGraph& g, std::int64_t start, std::int64_t taboo,
                         std::int64_t T);

// First-return probabilities f(t), t = 1..T (index t; f[0] = 0), computed by
// taboo absorption at x after one free step, and cross-checked against the
// renewal deconvolution f(t) = p(t) - sum_{s<t} f(s) p(t-s). Disagreement
// beyond 1e-10 is an internal fault.
std::vector<double> first_return(const WeightedGraph& g, std::int64_t x, std::int64_t T);

struct EscapeEstimate {
    double lower = 0.0;   // upper - tail, clamped to 0
    double upper = 1.0;   // 1 - sum_{t<=T} f(t)
    double tail = 0.0;    // sum_{t>T} C_fit t^{-d_eff/2} (integral bound)
    double c_fit = 0.0;   // Delmotte upper constant fitted on the exact window
    bool tail_valid = true;

    double point() const { return upper; }
};

// Escape probability interval from a horizon-T first-return sum plus a
// polynomial tail bound with the fitted upper kernel constant.
EscapeEstimate escape_prob(const WeightedGraph& g, std::int64_t x, std::int64_t T, int d_eff);

// sup over 1 <= t < series length of p(t) t^{d_eff/2}. The series must be
// exact over its whole length.
double estimate_alpha(const KernelSeries& series, int d_eff);

// sup over 1 <= t <= T of 1 / (f(t) t^{s_eff/2}). Zero f(t) in the window is
// an error (never happens for lazy walks).
double estimate_beta(const std::vector<double>& f, int s_eff);

// Probabilities for the split of {R(t) = y} by the first (T1) and last (T2)
// visit time to x, for the walk started at y:
//   p1  = P(T1 > gamma,            R(t) = y)
//   p2  = P(T2 < t - gamma,        R(t) = y)
//   p12 = P(both)
//   p3  = p_yy - p1 - p2 + p12
struct VisitDecomposition {
    double p1 = 0, p2 = 0, p3 = 0, p12 = 0, p_yy = 0;
};
VisitDecomposition visit_decomposition(const WeightedGraph& g, std::int64_t x, std::int64_t y,
                                       std::int64_t t, std::int64_t gamma);

struct RatioRow {
    std::int64_t t;
    double p_xx;
    double p_yy;
    double ratio;
    bool exact;
};

struct RatioTable {
    std::vector<RatioRow> rows;
    std::int64_t exact_horizon = 0;  // min of both sides
    std::int64_t achieved_T = 0;
};

// Two diagonal runs plus the elementwise ratio. Rows stop at the exact
// horizon unless approximate rows are requested; those are marked.
RatioTable ratio_experiment(const WeightedGraph& g, std::int64_t x, std::int64_t y, std::int64_t T,
                            bool allow_approximate = false);

}  // namespace ratiolim
