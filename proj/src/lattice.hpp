#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "schedule.hpp"

namespace ratiolim {

using Coord = std::int64_t;

// One slab family Q_{l,m} in Z^d: points with at least d-s coordinates whose
// centered residue mod l has absolute value <= m.
struct SlabParams {
    std::int64_t period = 2;      // l, positive even
    std::int64_t half_width = 0;  // m, with m < l/2
    int free_dims = 1;            // s
    int dim = 2;                  // d

    void validate() const;  // throws std::invalid_argument
};

// The unique r with r == n (mod l) and -floor((l-1)/2) <= r <= floor(l/2).
// Computed through the canonical non-negative residue, so the result does
// not depend on the platform's remainder sign convention.
std::int64_t centered_mod(std::int64_t n, std::int64_t l);

// |centered_mod(p[axis], l)| <= m. axis is 0-based; out of range throws.
bool in_slab(std::span<const Coord> p, const SlabParams& q, int axis);

// Membership in the union over all (d-s)-subsets of axes of the slab
// intersections: equivalently, at least d-s coordinates satisfy the slab
// predicate. d == s makes the requirement empty, hence always true.
bool in_union_q(std::span<const Coord> p, const SlabParams& q);

// (m/2, ..., m/2, 0, ..., 0): m/2 on the s free axes. m must be even.
std::vector<Coord> shift_vector(std::int64_t m, int free_dims, int dim);

enum class Parity { even, odd };

// Membership in the intersection over scales j in [2, k] of the given parity
// of the shifted families Q_{a_j, b_{j-1}} + v(a_j). k < 2 (no scales of
// either parity yet) means the whole lattice.
bool in_h(std::span<const Coord> p, Parity parity, int k, const ScaleSchedule& sched);

// in_h plus the clamp |p_i| <= b_k on the d-s non-free axes, i.e. the
// Z^s-like graph determined by the first k scales.
bool in_f(std::span<const Coord> p, Parity parity, int k, const ScaleSchedule& sched);

}  // namespace ratiolim
