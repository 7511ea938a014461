#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ratiolim {

namespace {

double poly_scale(std::int64_t t, int d_eff) {
    const double td = static_cast<double>(t);
    double scale = 1.0;
    for (int i = 0; i < d_eff / 2; ++i) scale *= td;
    if (d_eff % 2) scale *= std::sqrt(td);
    return scale;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
}

}  // namespace

BoundFit check_delmotte(const KernelSeries& series, int d_eff, std::int64_t window_lo,
                        std::int64_t window_hi) {
    if (window_lo < 1 || window_hi < window_lo || window_hi >= series.length())
        throw std::invalid_argument("check_delmotte: empty or out-of-range window");
    if (series.exact_horizon < series.length())
        throw std::invalid_argument("check_delmotte: series extends beyond its exact horizon");
    BoundFit fit;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.c_lower = std::numeric_limits<double>::infinity();
    fit.C_upper = 0.0;
    for (std::int64_t t = window_lo; t <= window_hi; ++t) {
        const double v = series.values[static_cast<std::size_t>(t)] * poly_scale(t, d_eff);
        fit.c_lower = std::min(fit.c_lower, v);
        fit.C_upper = std::max(fit.C_upper, v);
    }
    return fit;
}

DoublingResult check_volume_doubling(const WeightedGraph& g, std::int64_t x, std::int64_t r_max,
                                     std::int64_t r_min) {
    if (r_min < 1 || r_max < r_min)
        throw std::invalid_argument("check_volume_doubling: bad radius range");
    DoublingResult out;
    out.r_min = r_min;
    out.r_max = r_max;
    out.boundary_ok = g.distance_to_boundary(x) > 2 * r_max;

    const std::vector<std::int64_t> dist = g.bfs_distances(x, 2 * r_max);
    std::vector<double> volume(static_cast<std::size_t>(2 * r_max) + 1, 0.0);
    for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
        const std::int64_t d = dist[static_cast<std::size_t>(v)];
        if (d >= 0 && d <= 2 * r_max) volume[static_cast<std::size_t>(d)] += g.degree(v);
    }
    for (std::size_t i = 1; i < volume.size(); ++i) volume[i] += volume[i - 1];

    out.max_ratio = 0.0;
    out.min_ratio = std::numeric_limits<double>::infinity();
    for (std::int64_t r = r_min; r <= r_max; ++r) {
        const double inner = volume[static_cast<std::size_t>(r)];
        if (!(inner > 0.0)) throw std::invalid_argument("check_volume_doubling: empty inner ball");
        const double ratio = volume[static_cast<std::size_t>(2 * r)] / inner;
        out.max_ratio = std::max(out.max_ratio, ratio);
        out.min_ratio = std::min(out.min_ratio, ratio);
    }
    return out;
}

PoincareResult check_poincare(const WeightedGraph& g, std::int64_t x, std::int64_t r,
                              std::uint64_t seed, int n_random, int n_power) {
    if (r < 1) throw std::invalid_argument("check_poincare: radius must be >= 1");
    const std::vector<std::int64_t> dist = g.bfs_distances(x, 2 * r);

    std::vector<std::int64_t> ball;  // vertices of B(x, 2r), ascending ids
    for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
        const std::int64_t d = dist[static_cast<std::size_t>(v)];
        if (d >= 0 && d <= 2 * r) ball.push_back(v);
    }
    std::vector<std::int64_t> local(static_cast<std::size_t>(g.vertex_count()), -1);
    for (std::size_t i = 0; i < ball.size(); ++i) local[static_cast<std::size_t>(ball[i])] =
        static_cast<std::int64_t>(i);

    // Edges with both endpoints in B(x, 2r); the Dirichlet energy weights
    // each squared difference by the edge weight.
    struct LocalEdge {
        std::int64_t a, b;
        double w;
    };
    std::vector<LocalEdge> ledges;
    for (const EdgeRec& e : g.edges()) {
        const std::int64_t a = local[static_cast<std::size_t>(e.u)];
        const std::int64_t b = local[static_cast<std::size_t>(e.v)];
        if (a >= 0 && b >= 0 && e.u != e.v) ledges.push_back({a, b, e.w});
    }

    std::vector<std::int64_t> inner;  // local indices of B(x, r)
    double inner_volume = 0.0;
    for (std::size_t i = 0; i < ball.size(); ++i) {
        if (dist[static_cast<std::size_t>(ball[i])] <= r) {
            inner.push_back(static_cast<std::int64_t>(i));
            inner_volume += g.degree(ball[i]);
        }
    }

    auto ratio_of = [&](const std::vector<double>& f) -> double {
        double mean = 0.0;
        for (const std::int64_t i : inner)
            mean += g.degree(ball[static_cast<std::size_t>(i)]) * f[static_cast<std::size_t>(i)];
        mean /= inner_volume;
        double lhs = 0.0;
        for (const std::int64_t i : inner) {
            const double d = f[static_cast<std::size_t>(i)] - mean;
            lhs += g.degree(ball[static_cast<std::size_t>(i)]) * d * d;
        }
        double energy = 0.0;
        for (const LocalEdge& e : ledges) {
            const double d = f[static_cast<std::size_t>(e.a)] - f[static_cast<std::size_t>(e.b)];
            energy += e.w * d * d;
        }
        if (!(energy > 0.0)) return -1.0;  // degenerate probe
        return lhs / (static_cast<double>(r) * static_cast<double>(r) * energy);
    };

    PoincareResult out;
    std::vector<double> f(ball.size(), 0.0);

    auto consider = [&](const std::vector<double>& probe) {
        const double v = ratio_of(probe);
        if (v < 0.0) return;
        ++out.probes_used;
        out.constant = std::max(out.constant, v);
    };

    // Coordinate projections.
    for (int axis = 0; axis < g.dim(); ++axis) {
        for (std::size_t i = 0; i < ball.size(); ++i)
            f[i] = static_cast<double>(g.coords_of(ball[i])[static_cast<std::size_t>(axis)]);
        consider(f);
    }

    // Seeded pseudo-random functions, reproducible across runs and platforms.
    for (int k = 0; k < n_random; ++k) {
        for (std::size_t i = 0; i < ball.size(); ++i) {
            std::uint64_t s = seed ^ (static_cast<std::uint64_t>(k) * 0xD1342543DE82EF95ull) ^
                              (static_cast<std::uint64_t>(ball[i]) * 0x2545F4914F6CDD1Dull);
            f[i] = 2.0 * unit_double(splitmix64(s)) - 1.0;
        }
        consider(f);
    }

    // Diffusion iterates on the induced ball subgraph: repeated lazy
    // averaging damps high modes, steering the probe toward the slow mode
    // that extremizes the ratio.
    {
        std::vector<double> ldeg(ball.size(), 0.0);
        for (const LocalEdge& e : ledges) {
            ldeg[static_cast<std::size_t>(e.a)] += e.w;
            ldeg[static_cast<std::size_t>(e.b)] += e.w;
        }
        std::uint64_t s0 = seed ^ 0xA0761D6478BD642Full;
        for (std::size_t i = 0; i < ball.size(); ++i)
            f[i] = 2.0 * unit_double(splitmix64(s0)) - 1.0;
        std::vector<double> next(ball.size(), 0.0);
        double total_deg = 0.0;
        for (std::size_t i = 0; i < ball.size(); ++i) total_deg += ldeg[i];
        for (int it = 0; it < n_power; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (const LocalEdge& e : ledges) {
                next[static_cast<std::size_t>(e.a)] += e.w * f[static_cast<std::size_t>(e.b)];
                next[static_cast<std::size_t>(e.b)] += e.w * f[static_cast<std::size_t>(e.a)];
            }
            for (std::size_t i = 0; i < ball.size(); ++i)
                next[i] = ldeg[i] > 0.0 ? 0.5 * f[i] + 0.5 * next[i] / ldeg[i] : f[i];
            // Project out the constant mode and renormalize.
            double mean = 0.0;
            for (std::size_t i = 0; i < ball.size(); ++i) mean += ldeg[i] * next[i];
            if (total_deg > 0.0) mean /= total_deg;
            double norm = 0.0;
            for (std::size_t i = 0; i < ball.size(); ++i) {
                next[i] -= mean;
                norm += next[i] * next[i];
            }
            if (!(norm > 0.0)) break;
            norm = std::sqrt(norm);
            for (std::size_t i = 0; i < ball.size(); ++i) next[i] /= norm;
            f = next;
            consider(f);
        }
    }

    out.degenerate = out.probes_used == 0;
    return out;
}

double poincare_ratio(const WeightedGraph& g, std::int64_t x, std::int64_t r,
                      const std::vector<double>& f) {
    if (static_cast<std::int64_t>(f.size()) != g.vertex_count())
        throw std::invalid_argument("poincare_ratio: probe size mismatch");
    const std::vector<std::int64_t> dist = g.bfs_distances(x, 2 * r);
    double inner_volume = 0.0, mean = 0.0;
    for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
        const std::int64_t d = dist[static_cast<std::size_t>(v)];
        if (d >= 0 && d <= r) {
            inner_volume += g.degree(v);
            mean += g.degree(v) * f[static_cast<std::size_t>(v)];
        }
    }
    mean /= inner_volume;
    double lhs = 0.0;
    for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
        const std::int64_t d = dist[static_cast<std::size_t>(v)];
        if (d >= 0 && d <= r) {
            const double diff = f[static_cast<std::size_t>(v)] - mean;
            lhs += g.degree(v) * diff * diff;
        }
    }
    double energy = 0.0;
    for (const EdgeRec& e : g.edges()) {
        if (e.u == e.v) continue;
        const std::int64_t du = dist[static_cast<std::size_t>(e.u)];
        const std::int64_t dv = dist[static_cast<std::size_t>(e.v)];
        if (du < 0 || dv < 0 || du > 2 * r || dv > 2 * r) continue;
        const double diff = f[static_cast<std::size_t>(e.u)] - f[static_cast<std::size_t>(e.v)];
        energy += e.w * diff * diff;
    }
    if (!(energy > 0.0)) return -1.0;
    return lhs / (static_cast<double>(r) * static_cast<double>(r) * energy);
}

double check_lazy_smoothing(const KernelSeries& series, std::int64_t t, std::int64_t s) {
    if (t < 1 || s < 0) throw std::invalid_argument("check_lazy_smoothing: bad times");
    const std::int64_t gap = t > s ? t - s : s - t;
    if (static_cast<double>(gap) > std::sqrt(static_cast<double>(t)))
        throw std::invalid_argument("check_lazy_smoothing: requires |t - s| <= sqrt(t)");
    if (t >= series.length() || s >= series.length())
        throw std::invalid_argument("check_lazy_smoothing: series too short");
    const double pt = series.values[static_cast<std::size_t>(t)];
    const double ps = series.values[static_cast<std::size_t>(s)];
    const double logt = std::log(static_cast<double>(t));
    const double term1 =
        static_cast<double>(gap) * logt * logt * logt / std::sqrt(static_cast<double>(t)) * pt;
    const double term2 = std::exp(-logt * logt / 8.0);
    return std::abs(pt - ps) / (term1 + term2);
}

std::vector<NkCheckRow> check_nk(const RatioTable& table, const ScaleSchedule& sched,
                                 double factor) {
    if (!(factor > 1.0)) throw std::invalid_argument("check_nk: factor must exceed 1");
    std::vector<NkCheckRow> out;
    for (int k = 2; k <= sched.scales(); ++k) {
        NkCheckRow row;
        row.k = k;
        row.t_k = sched.t_checkpoints[static_cast<std::size_t>(k - 1)];
        row.even = (k % 2 == 0);
        row.required = row.even ? factor : 1.0 / factor;
        if (row.t_k < static_cast<std::int64_t>(table.rows.size()) &&
            table.rows[static_cast<std::size_t>(row.t_k)].exact) {
            row.ratio = table.rows[static_cast<std::size_t>(row.t_k)].ratio;
            const bool ok = row.even ? row.ratio >= row.required : row.ratio <= row.required;
            row.status = ok ? NkStatus::pass : NkStatus::fail;
        } else {
            row.status = NkStatus::unreached;
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace ratiolim
