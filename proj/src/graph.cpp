#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"
#include "textio.hpp"

namespace ratiolim {

BoxSpec BoxSpec::cube(int dim, Coord radius) {
    if (dim < 1) throw std::invalid_argument("box: dimension must be positive");
    if (radius < 1) throw std::invalid_argument("box: radius must be >= 1");
    BoxSpec box;
    box.lo.assign(static_cast<std::size_t>(dim), -radius);
    box.hi.assign(static_cast<std::size_t>(dim), radius);
    return box;
}

std::int64_t BoxSpec::cells(std::int64_t max_cells) const {
    __int128 total = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (hi[i] < lo[i]) throw std::invalid_argument("box: degenerate axis bounds");
        total *= static_cast<__int128>(hi[i] - lo[i] + 1);
        if (total > max_cells)
            throw ResourceError("box volume exceeds the cell limit (" + std::to_string(max_cells) +
                                " cells)");
    }
    return static_cast<std::int64_t>(total);
}

bool BoxSpec::contains_origin() const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > 0 || hi[i] < 0) return false;
    return true;
}

WeightedGraph WeightedGraph::from_parts(int dim, std::vector<Coord> coords, std::vector<Side> sides,
                                        std::vector<std::uint8_t> boundary,
                                        std::vector<EdgeRec> edges, std::int64_t origin_x,
                                        std::int64_t origin_y) {
    WeightedGraph g;
    g.dim_ = dim;
    g.n_ = static_cast<std::int64_t>(coords.size()) / dim;
    if (g.n_ == 0) throw GraphBuildError("graph: empty vertex set");
    if (static_cast<std::int64_t>(coords.size()) != g.n_ * dim)
        throw std::invalid_argument("graph: coords size not a multiple of dim");
    if (sides.empty()) sides.assign(static_cast<std::size_t>(g.n_), Side::none);
    if (boundary.empty()) boundary.assign(static_cast<std::size_t>(g.n_), 0);
    if (static_cast<std::int64_t>(sides.size()) != g.n_ ||
        static_cast<std::int64_t>(boundary.size()) != g.n_)
        throw std::invalid_argument("graph: ragged vertex attributes");
    g.coords_ = std::move(coords);
    g.sides_ = std::move(sides);
    g.boundary_ = std::move(boundary);
    g.edges_ = std::move(edges);
    g.origin_x_ = origin_x;
    g.origin_y_ = origin_y;

    g.degree_.assign(static_cast<std::size_t>(g.n_), 0.0);
    for (const EdgeRec& e : g.edges_) {
        if (e.u < 0 || e.u >= g.n_ || e.v < 0 || e.v >= g.n_)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (!(e.w > 0.0)) throw std::invalid_argument("graph: edge weight must be positive");
        g.degree_[static_cast<std::size_t>(e.u)] += e.w;
        if (e.v != e.u) g.degree_[static_cast<std::size_t>(e.v)] += e.w;
    }

    // CSR grouped by destination: incoming entry (dst <- src) with
    // coefficient w / (2 deg(src)), the per-step move mass of the lazy walk.
    std::vector<std::int64_t> counts(static_cast<std::size_t>(g.n_) + 1, 0);
    for (const EdgeRec& e : g.edges_) {
        counts[static_cast<std::size_t>(e.v) + 1]++;
        if (e.v != e.u) counts[static_cast<std::size_t>(e.u) + 1]++;
    }
    g.row_ptr_.assign(static_cast<std::size_t>(g.n_) + 1, 0);
    for (std::int64_t i = 0; i < g.n_; ++i)
        g.row_ptr_[static_cast<std::size_t>(i) + 1] =
            g.row_ptr_[static_cast<std::size_t>(i)] + counts[static_cast<std::size_t>(i) + 1];
    const std::int64_t nnz = g.row_ptr_.back();
    if (g.n_ > std::numeric_limits<std::int32_t>::max())
        throw ResourceError("graph: too many vertices for the stepping structure");
    g.col_.assign(static_cast<std::size_t>(nnz), 0);
    g.coeff_.assign(static_cast<std::size_t>(nnz), 0.0);
    std::vector<std::int64_t> cursor(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
    auto put = [&](std::int64_t dst, std::int64_t src, double w) {
        const std::int64_t at = cursor[static_cast<std::size_t>(dst)]++;
        g.col_[static_cast<std::size_t>(at)] = static_cast<std::int32_t>(src);
        g.coeff_[static_cast<std::size_t>(at)] = w / (2.0 * g.degree_[static_cast<std::size_t>(src)]);
    };
    for (const EdgeRec& e : g.edges_) {
        put(e.v, e.u, e.w);
        if (e.v != e.u) put(e.u, e.v, e.w);
    }
    return g;
}

std::vector<std::int64_t> WeightedGraph::bfs_distances(std::int64_t start, std::int64_t cap) const {
    if (start < 0 || start >= n_) throw std::invalid_argument("bfs: start out of range");
    std::vector<std::int64_t> dist(static_cast<std::size_t>(n_), -1);
    std::deque<std::int64_t> queue;
    dist[static_cast<std::size_t>(start)] = 0;
    queue.push_back(start);
    while (!queue.empty()) {
        const std::int64_t u = queue.front();
        queue.pop_front();
        const std::int64_t du = dist[static_cast<std::size_t>(u)];
        if (du >= cap) continue;
        for (std::int64_t j = row_ptr_[static_cast<std::size_t>(u)];
             j < row_ptr_[static_cast<std::size_t>(u) + 1]; ++j) {
            const std::int64_t v = col_[static_cast<std::size_t>(j)];
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = du + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

std::int64_t WeightedGraph::distance_to_boundary(std::int64_t start) const {
    bool any = false;
    for (std::int64_t v = 0; v < n_; ++v)
        if (boundary_[static_cast<std::size_t>(v)]) {
            any = true;
            break;
        }
    if (!any) return kUnboundedHorizon;
    if (boundary_flag(start)) return 0;
    const std::vector<std::int64_t> dist = bfs_distances(start);
    std::int64_t best = kUnboundedHorizon;
    for (std::int64_t v = 0; v < n_; ++v) {
        if (!boundary_[static_cast<std::size_t>(v)]) continue;
        const std::int64_t d = dist[static_cast<std::size_t>(v)];
        if (d >= 0 && d < best) best = d;
    }
    return best;
}

bool WeightedGraph::connected_from(std::int64_t start) const {
    const std::vector<std::int64_t> dist = bfs_distances(start);
    for (std::int64_t v = 0; v < n_; ++v)
        if (dist[static_cast<std::size_t>(v)] < 0) return false;
    return true;
}

namespace {

// Packed bitset over box cells.
class CellBits {
  public:
    explicit CellBits(std::int64_t n) : bits_(static_cast<std::size_t>((n + 63) / 64), 0) {}
    bool get(std::int64_t i) const {
        return (bits_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u;
    }
    void set(std::int64_t i) { bits_[static_cast<std::size_t>(i >> 6)] |= std::uint64_t(1) << (i & 63); }

  private:
    std::vector<std::uint64_t> bits_;
};

}  // namespace

WeightedGraph enumerate_graph(const MembershipFn& pred, const BoxSpec& box, int dim,
                              const BuildLimits& limits) {
    if (box.dim() != dim) throw std::invalid_argument("enumerate_graph: box dimension mismatch");
    if (!box.contains_origin())
        throw std::invalid_argument("enumerate_graph: box must contain the origin");
    const std::int64_t cells = box.cells(limits.max_cells);

    std::vector<std::int64_t> extent(static_cast<std::size_t>(dim));
    std::vector<std::int64_t> stride(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        extent[static_cast<std::size_t>(i)] =
            box.hi[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)] + 1;
    stride[static_cast<std::size_t>(dim - 1)] = 1;
    for (int i = dim - 2; i >= 0; --i)
        stride[static_cast<std::size_t>(i)] =
            stride[static_cast<std::size_t>(i) + 1] * extent[static_cast<std::size_t>(i) + 1];

    auto cell_of = [&](std::span<const Coord> p) {
        std::int64_t c = 0;
        for (int i = 0; i < dim; ++i)
            c += (p[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)]) *
                 stride[static_cast<std::size_t>(i)];
        return c;
    };
    auto point_of = [&](std::int64_t cell, std::vector<Coord>& p) {
        for (int i = 0; i < dim; ++i) {
            p[static_cast<std::size_t>(i)] =
                box.lo[static_cast<std::size_t>(i)] + cell / stride[static_cast<std::size_t>(i)];
            cell %= stride[static_cast<std::size_t>(i)];
        }
    };

    std::vector<Coord> origin(static_cast<std::size_t>(dim), 0);
    if (!pred(origin)) throw GraphBuildError("enumerate_graph: origin fails the predicate");

    // BFS over in-box cells satisfying the predicate; membership evaluated on
    // demand, so cost scales with the component, not the box volume.
    CellBits visited(cells);
    std::vector<std::int64_t> queue;
    queue.reserve(1024);
    visited.set(cell_of(origin));
    queue.push_back(cell_of(origin));
    std::vector<Coord> p(static_cast<std::size_t>(dim));
    std::vector<Coord> q(static_cast<std::size_t>(dim));
    std::int64_t n = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        ++n;
        if (n > limits.max_vertices)
            throw ResourceError("enumerate_graph: component exceeds the vertex limit");
        point_of(queue[head], p);
        for (int i = 0; i < dim; ++i) {
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                q = p;
                q[static_cast<std::size_t>(i)] += sgn;
                if (q[static_cast<std::size_t>(i)] < box.lo[static_cast<std::size_t>(i)] ||
                    q[static_cast<std::size_t>(i)] > box.hi[static_cast<std::size_t>(i)])
                    continue;
                const std::int64_t qc = cell_of(q);
                if (visited.get(qc)) continue;
                if (!pred(q)) continue;
                visited.set(qc);
                queue.push_back(qc);
            }
        }
    }

    // Lexicographic vertex ids: sorted cell indices (row-major order of the
    // box coincides with lexicographic coordinate order).
    std::vector<std::int64_t> cells_sorted = queue;
    std::sort(cells_sorted.begin(), cells_sorted.end());
    queue.clear();
    queue.shrink_to_fit();

    auto id_of = [&](std::int64_t cell) -> std::int64_t {
        const auto it = std::lower_bound(cells_sorted.begin(), cells_sorted.end(), cell);
        if (it == cells_sorted.end() || *it != cell) return -1;
        return it - cells_sorted.begin();
    };

    std::vector<Coord> coords(static_cast<std::size_t>(n) * static_cast<std::size_t>(dim));
    std::vector<std::uint8_t> bflag(static_cast<std::size_t>(n), 0);
    std::vector<EdgeRec> edges;
    edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(dim));
    for (std::int64_t v = 0; v < n; ++v) {
        point_of(cells_sorted[static_cast<std::size_t>(v)], p);
        for (int i = 0; i < dim; ++i)
            coords[static_cast<std::size_t>(v) * dim + static_cast<std::size_t>(i)] =
                p[static_cast<std::size_t>(i)];
        for (int i = 0; i < dim; ++i) {
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                q = p;
                q[static_cast<std::size_t>(i)] += sgn;
                const bool inside =
                    q[static_cast<std::size_t>(i)] >= box.lo[static_cast<std::size_t>(i)] &&
                    q[static_cast<std::size_t>(i)] <= box.hi[static_cast<std::size_t>(i)];
                if (!inside) {
                    // Neighbour beyond the window: the infinite graph differs
                    // here if the predicate holds outside.
                    if (pred(q)) bflag[static_cast<std::size_t>(v)] = 1;
                    continue;
                }
                if (sgn < 0) continue;  // each in-box pair once, from its smaller side
                const std::int64_t w = id_of(cell_of(q));
                if (w >= 0) edges.push_back({v, w, 1.0});
            }
        }
    }

    const std::int64_t origin_id = id_of(cell_of(origin));
    return WeightedGraph::from_parts(dim, std::move(coords), {}, std::move(bflag),
                                     std::move(edges), origin_id, -1);
}

namespace {

WeightedGraph glue_impl(const WeightedGraph& g_e, const WeightedGraph& g_o, double bridge_weight,
                        std::int64_t segment_len) {
    if (g_e.origin_x() < 0 || g_o.origin_x() < 0)
        throw std::invalid_argument("glue: both halves must carry an origin marker");
    if (g_e.dim() != g_o.dim()) throw std::invalid_argument("glue: dimension mismatch");
    const int dim = g_e.dim();
    const std::int64_t ne = g_e.vertex_count();
    const std::int64_t no = g_o.vertex_count();
    const std::int64_t extra = segment_len > 1 ? segment_len - 1 : 0;
    const std::int64_t n = ne + no + extra;

    std::vector<Coord> coords;
    coords.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(dim));
    std::vector<Side> sides(static_cast<std::size_t>(n), Side::none);
    std::vector<std::uint8_t> bflag(static_cast<std::size_t>(n), 0);
    for (std::int64_t v = 0; v < ne; ++v) {
        const auto c = g_e.coords_of(v);
        coords.insert(coords.end(), c.begin(), c.end());
        sides[static_cast<std::size_t>(v)] = Side::even;
        bflag[static_cast<std::size_t>(v)] = g_e.boundary_flag(v) ? 1 : 0;
    }
    for (std::int64_t v = 0; v < no; ++v) {
        const auto c = g_o.coords_of(v);
        coords.insert(coords.end(), c.begin(), c.end());
        sides[static_cast<std::size_t>(ne + v)] = Side::odd;
        bflag[static_cast<std::size_t>(ne + v)] = g_o.boundary_flag(v) ? 1 : 0;
    }
    for (std::int64_t j = 0; j < extra; ++j)
        coords.insert(coords.end(), static_cast<std::size_t>(dim), Coord(0));

    std::vector<EdgeRec> edges;
    edges.reserve(g_e.edges().size() + g_o.edges().size() + static_cast<std::size_t>(segment_len));
    edges.insert(edges.end(), g_e.edges().begin(), g_e.edges().end());
    for (const EdgeRec& e : g_o.edges()) edges.push_back({e.u + ne, e.v + ne, e.w});

    const std::int64_t x = g_e.origin_x();
    const std::int64_t y = g_o.origin_x() + ne;
    if (segment_len <= 1) {
        edges.push_back({x, y, bridge_weight});
    } else {
        std::int64_t prev = x;
        for (std::int64_t j = 0; j < extra; ++j) {
            const std::int64_t mid = ne + no + j;
            edges.push_back({prev, mid, 1.0});
            prev = mid;
        }
        edges.push_back({prev, y, 1.0});
    }
    return WeightedGraph::from_parts(dim, std::move(coords), std::move(sides), std::move(bflag),
                                     std::move(edges), x, y);
}

}  // namespace

WeightedGraph glue(const WeightedGraph& g_e, const WeightedGraph& g_o, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("glue: delta must lie in (0, 1)");
    return glue_impl(g_e, g_o, delta, 1);
}

WeightedGraph glue_unweighted(const WeightedGraph& g_e, const WeightedGraph& g_o,
                              std::int64_t segment_len) {
    if (segment_len < 1) throw std::invalid_argument("glue_unweighted: segment length must be >= 1");
    return glue_impl(g_e, g_o, 1.0, segment_len);
}

std::string dump_graph(const WeightedGraph& g) {
    std::ostringstream ss;
    ss << g.dim() << ' ' << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
        ss << v;
        for (const Coord c : g.coords_of(v)) ss << ' ' << c;
        const Side s = g.side_of(v);
        ss << ' ' << (s == Side::even ? 'e' : s == Side::odd ? 'o' : '-') << '\n';
    }
    for (const EdgeRec& e : g.edges()) ss << e.u << ' ' << e.v << ' ' << fmt17(e.w) << '\n';
    return ss.str();
}

}  // namespace ratiolim
