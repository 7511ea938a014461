#include "lattice.hpp"

#include <cstdlib>
#include <stdexcept>

namespace ratiolim {

void SlabParams::validate() const {
    if (period < 1) throw std::invalid_argument("slab: period must be positive");
    if (half_width < 0) throw std::invalid_argument("slab: half-width must be non-negative");
    if (2 * half_width >= period) throw std::invalid_argument("slab: requires m < l/2");
    if (free_dims < 1 || free_dims >= dim) throw std::invalid_argument("slab: requires 1 <= s < d");
}

std::int64_t centered_mod(std::int64_t n, std::int64_t l) {
    if (l < 1) throw std::invalid_argument("centered_mod: modulus must be positive");
    std::int64_t r = n % l;
    if (r < 0) r += l;
    if (r > l / 2) r -= l;
    return r;
}

bool in_slab(std::span<const Coord> p, const SlabParams& q, int axis) {
    if (axis < 0 || axis >= static_cast<int>(p.size()))
        throw std::out_of_range("in_slab: axis out of range");
    const std::int64_t r = centered_mod(p[axis], q.period);
    return (r < 0 ? -r : r) <= q.half_width;
}

bool in_union_q(std::span<const Coord> p, const SlabParams& q) {
    const int need = q.dim - q.free_dims;
    if (need <= 0) return true;
    int hit = 0;
    const int d = static_cast<int>(p.size());
    for (int i = 0; i < d; ++i) {
        if (in_slab(p, q, i) && ++hit >= need) return true;
    }
    return false;
}

std::vector<Coord> shift_vector(std::int64_t m, int free_dims, int dim) {
    if (m % 2 != 0) throw std::invalid_argument("shift_vector: m must be even");
    if (free_dims < 1 || free_dims >= dim)
        throw std::invalid_argument("shift_vector: requires 1 <= s < d");
    std::vector<Coord> v(static_cast<std::size_t>(dim), 0);
    for (int i = 0; i < free_dims; ++i) v[static_cast<std::size_t>(i)] = m / 2;
    return v;
}

bool in_h(std::span<const Coord> p, Parity parity, int k, const ScaleSchedule& sched) {
    if (static_cast<int>(p.size()) != sched.dim)
        throw std::invalid_argument("in_h: point dimension does not match schedule");
    if (k > sched.scales()) throw std::invalid_argument("in_h: schedule shorter than k");
    if (k < 2) return true;
    const int need = sched.dim - sched.free_dims;
    for (int j = 2; j <= k; ++j) {
        const bool j_even = (j % 2 == 0);
        if (j_even != (parity == Parity::even)) continue;
        const std::int64_t aj = sched.a[static_cast<std::size_t>(j - 1)];
        const std::int64_t half = aj / 2;
        const std::int64_t width = sched.b[static_cast<std::size_t>(j - 2)];
        int hit = 0;
        bool ok = false;
        for (int i = 0; i < sched.dim; ++i) {
            const Coord shifted = p[static_cast<std::size_t>(i)] - (i < sched.free_dims ? half : 0);
            const std::int64_t r = centered_mod(shifted, aj);
            if ((r < 0 ? -r : r) <= width && ++hit >= need) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

bool in_f(std::span<const Coord> p, Parity parity, int k, const ScaleSchedule& sched) {
    if (k < 1) throw std::invalid_argument("in_f: requires k >= 1");
    if (k > sched.scales()) throw std::invalid_argument("in_f: schedule shorter than k");
    const std::int64_t clamp = sched.b[static_cast<std::size_t>(k - 1)];
    for (int i = sched.free_dims; i < sched.dim; ++i) {
        const Coord c = p[static_cast<std::size_t>(i)];
        if ((c < 0 ? -c : c) > clamp) return false;
    }
    return in_h(p, parity, k, sched);
}

}  // namespace ratiolim
