#include "kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace ratiolim {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr std::int64_t kStabilityBudget = 2'000'000;

void require_positive_degrees(const WeightedGraph& g) {
    for (std::int64_t v = 0; v < g.vertex_count(); ++v)
        if (!(g.degree(v) > 0.0))
            throw std::invalid_argument("walk: graph has an isolated vertex; the step is undefined");
}

void check_vertex(const WeightedGraph& g, std::int64_t v, const char* what) {
    if (v < 0 || v >= g.vertex_count())
        throw std::invalid_argument(std::string(what) + ": vertex out of range");
}

}  // namespace

Stepper::Stepper(const WeightedGraph& g) : g_(&g) { require_positive_degrees(g); }

void Stepper::lazy_step(const std::vector<double>& in, std::vector<double>& out) const {
    const std::int64_t n = g_->vertex_count();
    if (static_cast<std::int64_t>(in.size()) != n)
        throw std::invalid_argument("lazy_step: dimension mismatch");
    out.resize(in.size());
    const auto row = g_->row_ptr();
    const auto col = g_->col();
    const auto coeff = g_->coeff();
    for (std::int64_t u = 0; u < n; ++u) {
        double acc = 0.0;
        for (std::int64_t j = row[static_cast<std::size_t>(u)];
             j < row[static_cast<std::size_t>(u) + 1]; ++j)
            acc += coeff[static_cast<std::size_t>(j)] * in[static_cast<std::size_t>(
                       col[static_cast<std::size_t>(j)])];
        out[static_cast<std::size_t>(u)] = 0.5 * in[static_cast<std::size_t>(u)] + acc;
    }
}

void Stepper::simple_step(const std::vector<double>& in, std::vector<double>& out) const {
    const std::int64_t n = g_->vertex_count();
    if (static_cast<std::int64_t>(in.size()) != n)
        throw std::invalid_argument("simple_step: dimension mismatch");
    out.resize(in.size());
    const auto row = g_->row_ptr();
    const auto col = g_->col();
    const auto coeff = g_->coeff();
    for (std::int64_t u = 0; u < n; ++u) {
        double acc = 0.0;
        for (std::int64_t j = row[static_cast<std::size_t>(u)];
             j < row[static_cast<std::size_t>(u) + 1]; ++j)
            acc += coeff[static_cast<std::size_t>(j)] * in[static_cast<std::size_t>(
                       col[static_cast<std::size_t>(j)])];
        out[static_cast<std::size_t>(u)] = 2.0 * acc;
    }
}

double Stepper::taboo_step(const std::vector<double>& in, std::vector<double>& out,
                           std::int64_t taboo) const {
    lazy_step(in, out);
    const double absorbed = out[static_cast<std::size_t>(taboo)];
    out[static_cast<std::size_t>(taboo)] = 0.0;
    return absorbed;
}

double Stepper::total_mass(const std::vector<double>& v) {
    // Fixed-size chunks with a compensated outer sum: deterministic and
    // accurate independent of length.
    constexpr std::size_t kChunk = 4096;
    double total = 0.0, comp = 0.0;
    for (std::size_t base = 0; base < v.size(); base += kChunk) {
        const std::size_t end = base + kChunk < v.size() ? base + kChunk : v.size();
        double chunk = 0.0;
        for (std::size_t i = base; i < end; ++i) chunk += v[i];
        const double y = chunk - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    return total;
}

std::vector<double> lazy_step(const WeightedGraph& g, const std::vector<double>& v) {
    Stepper stepper(g);
    std::vector<double> out;
    stepper.lazy_step(v, out);
    return out;
}

namespace {

KernelSeries kernel_series_impl(const WeightedGraph& g, std::int64_t start, std::int64_t target,
                                std::int64_t T, WalkSemantics semantics) {
    check_vertex(g, start, "heat_kernel");
    check_vertex(g, target, "heat_kernel");
    if (T < 0) throw std::invalid_argument("heat_kernel: T must be non-negative");
    Stepper stepper(g);
    KernelSeries out;
    out.semantics = semantics;
    out.exact_horizon = g.distance_to_boundary(start);
    out.stability_flagged = T > kStabilityBudget;
    out.values.reserve(static_cast<std::size_t>(T) + 1);

    std::vector<double> v(static_cast<std::size_t>(g.vertex_count()), 0.0);
    std::vector<double> w(v.size(), 0.0);
    v[static_cast<std::size_t>(start)] = 1.0;
    out.values.push_back(start == target ? 1.0 : 0.0);
    for (std::int64_t t = 1; t <= T; ++t) {
        if (semantics == WalkSemantics::lazy)
            stepper.lazy_step(v, w);
        else
            stepper.simple_step(v, w);
        v.swap(w);
        out.values.push_back(v[static_cast<std::size_t>(target)]);
    }
    if (T > 0) {
        const double mass = Stepper::total_mass(v);
        if (std::abs(mass - 1.0) > kMassTolerance * (1.0 + static_cast<double>(T) / 1000.0))
            throw std::logic_error("heat_kernel: mass conservation violated");
    }
    return out;
}

}  // namespace

KernelSeries heat_kernel_diag(const WeightedGraph& g, std::int64_t x, std::int64_t T,
                              WalkSemantics semantics) {
    return kernel_series_impl(g, x, x, T, semantics);
}

KernelSeries heat_kernel_at(const WeightedGraph& g, std::int64_t start, std::int64_t target,
                            std::int64_t T, WalkSemantics semantics) {
    return kernel_series_impl(g, start, target, T, semantics);
}

double binomial_lazy(const KernelSeries& q_series, std::int64_t t) {
    if (q_series.semantics != WalkSemantics::simple)
        throw std::invalid_argument("binomial_lazy: series must use simple-walk semantics");
    if (t < 0 || t >= q_series.length())
        throw std::invalid_argument("binomial_lazy: series too short");
    // weight_i = C(t, i) 2^{-t}, advanced multiplicatively.
    double weight = std::ldexp(1.0, static_cast<int>(-t));
    double acc = 0.0, comp = 0.0;
    for (std::int64_t i = 0; i <= t; ++i) {
        const double term = q_series.values[static_cast<std::size_t>(i)] * weight;
        const double y = term - comp;
        const double s = acc + y;
        comp = (s - acc) - y;
        acc = s;
        if (i < t) weight *= static_cast<double>(t - i) / static_cast<double>(i + 1);
    }
    return acc;
}

TabooSeries taboo_kernel(const WeightedGraph& g, std::int64_t start, std::int64_t taboo,
                         std::int64_t T) {
    check_vertex(g, start, "taboo_kernel");
    check_vertex(g, taboo, "taboo_kernel");
    if (start == taboo) throw std::invalid_argument("taboo_kernel: start equals the taboo vertex");
    if (T < 0) throw std::invalid_argument("taboo_kernel: T must be non-negative");
    Stepper stepper(g);
    TabooSeries out;
    out.dist.reserve(static_cast<std::size_t>(T) + 1);
    out.absorbed.assign(static_cast<std::size_t>(T) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(g.vertex_count()), 0.0);
    v[static_cast<std::size_t>(start)] = 1.0;
    out.dist.push_back(v);
    std::vector<double> w(v.size(), 0.0);
    for (std::int64_t t = 1; t <= T; ++t) {
        out.absorbed[static_cast<std::size_t>(t)] = stepper.taboo_step(v, w, taboo);
        v.swap(w);
        out.dist.push_back(v);
    }
    return out;
}

std::vector<double> first_return(const WeightedGraph& g, std::int64_t x, std::int64_t T) {
    check_vertex(g, x, "first_return");
    if (T < 1) throw std::invalid_argument("first_return: T must be >= 1");
    Stepper stepper(g);

    // Route (a): renewal deconvolution from the diagonal kernel.
    const KernelSeries p = heat_kernel_diag(g, x, T, WalkSemantics::lazy);
    std::vector<double> f_renewal(static_cast<std::size_t>(T) + 1, 0.0);
    for (std::int64_t t = 1; t <= T; ++t) {
        double acc = p.values[static_cast<std::size_t>(t)];
        for (std::int64_t s = 1; s < t; ++s)
            acc -= f_renewal[static_cast<std::size_t>(s)] * p.values[static_cast<std::size_t>(t - s)];
        f_renewal[static_cast<std::size_t>(t)] = acc;
    }

    // Route (b): one free step from x, then absorption at x.
    std::vector<double> f(static_cast<std::size_t>(T) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(g.vertex_count()), 0.0);
    std::vector<double> w(v.size(), 0.0);
    v[static_cast<std::size_t>(x)] = 1.0;
    stepper.lazy_step(v, w);
    v.swap(w);
    f[1] = v[static_cast<std::size_t>(x)];
    v[static_cast<std::size_t>(x)] = 0.0;
    for (std::int64_t t = 2; t <= T; ++t) {
        f[static_cast<std::size_t>(t)] = stepper.taboo_step(v, w, x);
        v.swap(w);
    }

    for (std::int64_t t = 1; t <= T; ++t)
        if (std::abs(f[static_cast<std::size_t>(t)] - f_renewal[static_cast<std::size_t>(t)]) > 1e-10)
            throw std::logic_error("first_return: renewal and taboo routes disagree");
    return f;
}

double estimate_alpha(const KernelSeries& series, int d_eff) {
    if (series.length() < 2) throw std::invalid_argument("estimate_alpha: empty window");
    if (series.exact_horizon < series.length())
        throw std::invalid_argument("estimate_alpha: series extends beyond its exact horizon");
    double best = 0.0;
    for (std::int64_t t = 1; t < series.length(); ++t) {
        const double td = static_cast<double>(t);
        double scale = 1.0;
        for (int i = 0; i < d_eff / 2; ++i) scale *= td;
        if (d_eff % 2) scale *= std::sqrt(td);
        const double v = series.values[static_cast<std::size_t>(t)] * scale;
        if (v > best) best = v;
    }
    return best;
}

double estimate_beta(const std::vector<double>& f, int s_eff) {
    if (f.size() < 2) throw std::invalid_argument("estimate_beta: empty window");
    double best = 0.0;
    for (std::size_t t = 1; t < f.size(); ++t) {
        if (!(f[t] > 0.0)) throw std::invalid_argument("estimate_beta: zero f(t) in the window");
        const double td = static_cast<double>(t);
        double scale = 1.0;
        for (int i = 0; i < s_eff / 2; ++i) scale *= td;
        if (s_eff % 2) scale *= std::sqrt(td);
        const double v = 1.0 / (f[t] * scale);
        if (v > best) best = v;
    }
    return best;
}

EscapeEstimate escape_prob(const WeightedGraph& g, std::int64_t x, std::int64_t T, int d_eff) {
    if (T < 1) throw std::invalid_argument("escape_prob: T must be >= 1");
    const std::vector<double> f = first_return(g, x, T);
    double sum = 0.0, comp = 0.0;
    for (std::int64_t t = 1; t <= T; ++t) {
        const double y = f[static_cast<std::size_t>(t)] - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    EscapeEstimate out;
    out.upper = 1.0 - sum;

    // Tail over t > T of C_fit t^{-d_eff/2}, with C_fit the largest value of
    // p(x,x;t) t^{d_eff/2} on the exact window of the same graph, bounded by
    // the integral: sum_{t>T} t^{-q} <= T^{1-q}/(q-1) for q > 1.
    const std::int64_t horizon = g.distance_to_boundary(x);
    const std::int64_t fit_T = horizon == WeightedGraph::kUnboundedHorizon
                                   ? T
                                   : (horizon - 1 < T ? horizon - 1 : T);
    if (fit_T >= 1) {
        const KernelSeries p = heat_kernel_diag(g, x, fit_T, WalkSemantics::lazy);
        out.c_fit = estimate_alpha(p, d_eff);
    }
    const double q = 0.5 * static_cast<double>(d_eff);
    if (q > 1.0 && out.c_fit > 0.0) {
        out.tail = out.c_fit * std::pow(static_cast<double>(T), 1.0 - q) / (q - 1.0);
        out.tail_valid = out.tail < 1.0;
    } else {
        out.tail = 1.0;
        out.tail_valid = false;  // recurrent exponent: no usable tail bound
    }
    out.lower = out.upper - out.tail;
    if (out.lower < 0.0) out.lower = 0.0;
    return out;
}

VisitDecomposition visit_decomposition(const WeightedGraph& g, std::int64_t x, std::int64_t y,
                                       std::int64_t t, std::int64_t gamma) {
    check_vertex(g, x, "visit_decomposition");
    check_vertex(g, y, "visit_decomposition");
    if (x == y) throw std::invalid_argument("visit_decomposition: x and y must differ");
    if (gamma < 0 || 2 * gamma >= t)
        throw std::invalid_argument("visit_decomposition: requires gamma < t/2");
    Stepper stepper(g);
    const std::size_t n = static_cast<std::size_t>(g.vertex_count());
    std::vector<double> v(n, 0.0), w(n, 0.0);

    auto point_mass_y = [&](std::vector<double>& vec) {
        vec.assign(n, 0.0);
        vec[static_cast<std::size_t>(y)] = 1.0;
    };
    auto free_steps = [&](std::vector<double>& vec, std::int64_t steps) {
        for (std::int64_t i = 0; i < steps; ++i) {
            stepper.lazy_step(vec, w);
            vec.swap(w);
        }
    };
    auto taboo_steps = [&](std::vector<double>& vec, std::int64_t steps) {
        for (std::int64_t i = 0; i < steps; ++i) {
            stepper.taboo_step(vec, w, x);
            vec.swap(w);
        }
    };

    VisitDecomposition out;

    // p_yy: free evolution.
    point_mass_y(v);
    free_steps(v, t);
    out.p_yy = v[static_cast<std::size_t>(y)];

    // p1: avoid x through time gamma, then free.
    point_mass_y(v);
    taboo_steps(v, gamma);
    free_steps(v, t - gamma);
    out.p1 = v[static_cast<std::size_t>(y)];

    // p2: free to time t - gamma, require R(t-gamma) != x, avoid x afterwards.
    point_mass_y(v);
    free_steps(v, t - gamma);
    v[static_cast<std::size_t>(x)] = 0.0;
    taboo_steps(v, gamma);
    out.p2 = v[static_cast<std::size_t>(y)];

    // p12: both restrictions.
    point_mass_y(v);
    taboo_steps(v, gamma);
    free_steps(v, t - 2 * gamma);
    v[static_cast<std::size_t>(x)] = 0.0;
    taboo_steps(v, gamma);
    out.p12 = v[static_cast<std::size_t>(y)];

    out.p3 = out.p_yy - out.p1 - out.p2 + out.p12;
    return out;
}

RatioTable ratio_experiment(const WeightedGraph& g, std::int64_t x, std::int64_t y, std::int64_t T,
                            bool allow_approximate) {
    check_vertex(g, x, "ratio_experiment");
    check_vertex(g, y, "ratio_experiment");
    const KernelSeries px = heat_kernel_diag(g, x, T, WalkSemantics::lazy);
    const KernelSeries py = heat_kernel_diag(g, y, T, WalkSemantics::lazy);
    RatioTable out;
    out.exact_horizon = px.exact_horizon < py.exact_horizon ? px.exact_horizon : py.exact_horizon;
    const std::int64_t exact_T = out.exact_horizon - 1 < T ? out.exact_horizon - 1 : T;
    out.achieved_T = allow_approximate ? T : exact_T;
    out.rows.reserve(static_cast<std::size_t>(out.achieved_T) + 1);
    for (std::int64_t t = 0; t <= out.achieved_T; ++t) {
        const double a = px.values[static_cast<std::size_t>(t)];
        const double b = py.values[static_cast<std::size_t>(t)];
        out.rows.push_back({t, a, b, a / b, t <= exact_T});
    }
    return out;
}

}  // namespace ratiolim
