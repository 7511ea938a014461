#include "schedule.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace ratiolim {

namespace {

// Guard for gamma^4 and the multiples of 2*a_prev staying inside int64.
constexpr std::int64_t kValueLimit = std::int64_t(1) << 60;

std::int64_t checked_pow4(std::int64_t g) {
    if (g <= 0) throw std::invalid_argument("gamma must be positive");
    __int128 v = static_cast<__int128>(g) * g;
    v = v * v;
    if (v > kValueLimit) throw ResourceError("gamma^4 exceeds the schedule value limit");
    return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t next_scale(std::int64_t gamma_k, std::int64_t a_prev) {
    if (gamma_k < 1) throw std::invalid_argument("next_scale: gamma_k must be >= 1");
    if (a_prev < 2 || a_prev % 2 != 0)
        throw std::invalid_argument("next_scale: a_prev must be a positive even integer");
    const std::int64_t g4 = checked_pow4(gamma_k);
    __int128 bound = static_cast<__int128>(2) * g4 + static_cast<__int128>(4) * a_prev;
    __int128 stride = static_cast<__int128>(2) * a_prev;
    __int128 k = bound / stride + 1;
    __int128 a = stride * k;
    if (a > kValueLimit) throw ResourceError("next_scale result exceeds the schedule value limit");
    return static_cast<std::int64_t>(a);
}

std::int64_t gamma_from_constants(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("gamma_from_constants: non-finite input");
    if (alpha <= 0.0 || beta <= 0.0)
        throw std::invalid_argument("gamma_from_constants: inputs must be positive");
    const double m = alpha > beta ? alpha : beta;
    if (m > 9.0e17) throw ResourceError("gamma_from_constants: value too large");
    const double c = std::ceil(m);
    std::int64_t g = static_cast<std::int64_t>(c);
    return g < 1 ? 1 : g;
}

ScaleSchedule ScaleSchedule::seed(std::int64_t a_seed, int d, int s) {
    if (a_seed < 2 || a_seed % 2 != 0)
        throw std::invalid_argument("schedule seed must be a positive even integer");
    if (s < 1 || s >= d) throw std::invalid_argument("schedule requires 1 <= s < d");
    ScaleSchedule sched;
    sched.dim = d;
    sched.free_dims = s;
    sched.a = {a_seed};
    sched.b = {a_seed};
    sched.gamma = {0};
    sched.t_checkpoints = {0};
    return sched;
}

void ScaleSchedule::validate() const {
    const std::size_t n = a.size();
    if (n == 0) throw std::logic_error("schedule: empty");
    if (b.size() != n || gamma.size() != n || t_checkpoints.size() != n)
        throw std::logic_error("schedule: ragged sequences");
    if (dim <= free_dims || free_dims < 1) throw std::logic_error("schedule: bad (d, s)");
    std::int64_t prefix = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k] < 2 || a[k] % 2 != 0) throw std::logic_error("schedule: a_k not a positive even integer");
        prefix += a[k];
        if (b[k] != prefix) throw std::logic_error("schedule: b_k is not the prefix sum");
        if (k == 0) continue;
        if ((a[k] / 2) % a[k - 1] != 0) throw std::logic_error("schedule: a_{k-1} does not divide a_k/2");
        const std::int64_t g = gamma[k];
        if (g < 1) throw std::logic_error("schedule: gamma_k missing");
        const std::int64_t g4 = checked_pow4(g);
        if (t_checkpoints[k] != g4) throw std::logic_error("schedule: t_k != gamma_k^4");
        if (a[k] <= 2 * g4 + 4 * a[k - 1]) throw std::logic_error("schedule: a_k growth bound violated");
    }
}

ScaleSchedule extend_schedule(const ScaleSchedule& sched, const ConstantsReport& report,
                              std::int64_t gamma_cap) {
    if (sched.a.empty()) throw std::invalid_argument("extend_schedule: schedule has no seed");
    std::int64_t g = gamma_from_constants(report.alpha, report.beta);
    if (gamma_cap > 0 && g > gamma_cap) g = gamma_cap;
    ScaleSchedule out = sched;
    const std::int64_t a_prev = out.a.back();
    const std::int64_t a_k = next_scale(g, a_prev);
    out.a.push_back(a_k);
    out.b.push_back(out.b.back() + a_k);
    out.gamma.push_back(g);
    out.t_checkpoints.push_back(checked_pow4(g));
    out.validate();
    return out;
}

std::string serialize_schedule(const ScaleSchedule& sched) {
    std::ostringstream ss;
    for (int k = 1; k <= sched.scales(); ++k) {
        ss << k << ' ' << sched.a[k - 1] << ' ' << sched.b[k - 1] << ' ' << sched.gamma[k - 1]
           << ' ' << sched.t_checkpoints[k - 1] << '\n';
    }
    return ss.str();
}

ScaleSchedule parse_schedule(std::string_view text, int d, int s) {
    ScaleSchedule sched;
    sched.dim = d;
    sched.free_dims = s;
    std::istringstream in{std::string(text)};
    std::string line;
    int expect = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::int64_t k, ak, bk, gk, tk;
        if (!(ls >> k >> ak >> bk >> gk >> tk))
            throw std::runtime_error("schedule parse: malformed line: " + line);
        if (k != expect) throw std::runtime_error("schedule parse: scale index out of order");
        sched.a.push_back(ak);
        sched.b.push_back(bk);
        sched.gamma.push_back(gk);
        sched.t_checkpoints.push_back(tk);
        ++expect;
    }
    if (sched.a.empty()) throw std::runtime_error("schedule parse: no scales");
    sched.validate();
    return sched;
}

}  // namespace ratiolim
