#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ratiolim {

// Interval estimate for an escape probability. `lower` may be clamped to 0
// when the tail bound is not usable at the given horizon.
struct EscapeInterval {
    double lower = 0.0;
    double upper = 1.0;
    bool tail_valid = true;  // false: tail bound exceeded 1 or exponent too small

    double point() const { return upper; }
};

// Constants measured on the half-graphs of one induction round.
struct ConstantsReport {
    double alpha = 0.0;        // sup of p(x,x;t) * t^{d/2} over the window
    double beta = 0.0;         // sup of 1 / (f(t) * t^{s/2}) over the window
    std::int64_t horizon = 0;  // largest t examined
    EscapeInterval eps_e;
    EscapeInterval eps_o;
    double delta = 0.0;        // glue weight: half the smaller escape lower bound
};

// The inductive scale state: periods a_k, prefix sums b_k, and per-round
// derived integers gamma_k and checkpoint times t_k = gamma_k^4.
// gamma[0] and t_checkpoints[0] are 0: the seed scale has no round constants.
struct ScaleSchedule {
    int dim = 0;        // ambient dimension d
    int free_dims = 0;  // slab dimension s
    std::vector<std::int64_t> a;
    std::vector<std::int64_t> b;
    std::vector<std::int64_t> gamma;
    std::vector<std::int64_t> t_checkpoints;

    static ScaleSchedule seed(std::int64_t a_seed, int d, int s);

    int scales() const { return static_cast<int>(a.size()); }

    // Throws std::logic_error when any structural invariant is broken:
    // evenness, divisibility a_{k-1} | a_k/2, growth a_k > 2 gamma_k^4 + 4 a_{k-1},
    // b_k = b_{k-1} + a_k, t_k = gamma_k^4.
    void validate() const;
};

// Smallest even a with a > 2*gamma_k^4 + 4*a_prev and a_prev | (a/2),
// i.e. the least multiple of 2*a_prev strictly above the bound.
std::int64_t next_scale(std::int64_t gamma_k, std::int64_t a_prev);

// ceil(max(alpha, beta)), at least 1. Rejects non-finite or non-positive input.
std::int64_t gamma_from_constants(double alpha, double beta);

// Appends one round: gamma_k from the report (optionally clamped by
// gamma_cap > 0), t_k = gamma_k^4, a_k = next_scale(gamma_k, a_{k-1}).
// The input schedule is not modified.
ScaleSchedule extend_schedule(const ScaleSchedule& sched, const ConstantsReport& report,
                              std::int64_t gamma_cap = 0);

// One line per scale: "k a_k b_k gamma_k t_k", space separated decimal
// integers; the seed line carries 0 for the undefined gamma_1, t_1.
std::string serialize_schedule(const ScaleSchedule& sched);

// Inverse of serialize_schedule. Throws std::runtime_error on malformed input.
ScaleSchedule parse_schedule(std::string_view text, int d, int s);

}  // namespace ratiolim
