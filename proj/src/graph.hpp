#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lattice.hpp"

namespace ratiolim {

// Axis-aligned finite window of Z^d, inclusive bounds per axis.
struct BoxSpec {
    std::vector<Coord> lo;
    std::vector<Coord> hi;

    static BoxSpec cube(int dim, Coord radius);

    int dim() const { return static_cast<int>(lo.size()); }
    // Total cell count; throws ResourceError beyond max_cells.
    std::int64_t cells(std::int64_t max_cells) const;
    bool contains_origin() const;
};

enum class Side : std::uint8_t { none = 0, even = 1, odd = 2 };

struct EdgeRec {
    std::int64_t u;
    std::int64_t v;
    double w;
};

// Finite weighted graph with lattice coordinates, side tags, origin markers
// and truncation-boundary flags. Immutable after construction; the stepping
// structure (transition CSR) is built once in the constructor.
class WeightedGraph {
  public:
    static constexpr std::int64_t kUnboundedHorizon =
        std::numeric_limits<std::int64_t>::max() / 4;

    // Assembles a graph from raw parts. Degrees, adjacency and the stepping
    // structure are derived here. boundary may be empty (no flags).
    static WeightedGraph from_parts(int dim, std::vector<Coord> coords, std::vector<Side> sides,
                                    std::vector<std::uint8_t> boundary, std::vector<EdgeRec> edges,
                                    std::int64_t origin_x, std::int64_t origin_y);

    int dim() const { return dim_; }
    std::int64_t vertex_count() const { return n_; }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
    const std::vector<EdgeRec>& edges() const { return edges_; }

    std::span<const Coord> coords_of(std::int64_t v) const {
        return {coords_.data() + v * dim_, static_cast<std::size_t>(dim_)};
    }
    Side side_of(std::int64_t v) const { return sides_[static_cast<std::size_t>(v)]; }
    bool boundary_flag(std::int64_t v) const { return boundary_[static_cast<std::size_t>(v)] != 0; }
    double degree(std::int64_t v) const { return degree_[static_cast<std::size_t>(v)]; }

    std::int64_t origin_x() const { return origin_x_; }
    std::int64_t origin_y() const { return origin_y_; }

    // Unweighted graph distance from start to the nearest boundary-flagged
    // vertex; kUnboundedHorizon when no vertex is flagged. Kernel values
    // computed on this graph equal the untruncated ones for t < the result.
    std::int64_t distance_to_boundary(std::int64_t start) const;

    // Unweighted BFS distances from start, -1 for unreachable.
    std::vector<std::int64_t> bfs_distances(std::int64_t start, std::int64_t cap =
                                                std::numeric_limits<std::int64_t>::max()) const;

    bool connected_from(std::int64_t start) const;

    // Transition structure for the walk modules: entries grouped by
    // destination row; coeff[j] = w(src, dst) / (2 * degree(src)).
    std::span<const std::int64_t> row_ptr() const { return row_ptr_; }
    std::span<const std::int32_t> col() const { return col_; }
    std::span<const double> coeff() const { return coeff_; }

  private:
    int dim_ = 0;
    std::int64_t n_ = 0;
    std::int64_t origin_x_ = -1;
    std::int64_t origin_y_ = -1;
    std::vector<Coord> coords_;
    std::vector<Side> sides_;
    std::vector<std::uint8_t> boundary_;
    std::vector<EdgeRec> edges_;
    std::vector<double> degree_;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int32_t> col_;
    std::vector<double> coeff_;
};

using MembershipFn = std::function<bool(std::span<const Coord>)>;

struct BuildLimits {
    std::int64_t max_cells = 300'000'000;
    std::int64_t max_vertices = 20'000'000;
};

// Materializes the connected component of the origin of the induced subgraph
// {p in box : pred(p)} with unit nearest-neighbour edges. Vertices are indexed
// lexicographically by coordinates. Vertices adjacent (in Z^d, through pred)
// to points outside the box get the truncation-boundary flag.
WeightedGraph enumerate_graph(const MembershipFn& pred, const BoxSpec& box, int dim,
                              const BuildLimits& limits = {});

// Disjoint union tagged e/o plus one (x, y) edge of weight delta in (0, 1).
WeightedGraph glue(const WeightedGraph& g_e, const WeightedGraph& g_o, double delta);

// Disjoint union joined by a path of `segment_len` unit edges through
// segment_len - 1 fresh vertices. segment_len == 1 coincides with a unit glue.
WeightedGraph glue_unweighted(const WeightedGraph& g_e, const WeightedGraph& g_o,
                              std::int64_t segment_len);

// Header "d n_vertices n_edges", vertex lines "id coords... side" (side as
// e, o or -), edge lines "id1 id2 weight" with 17 significant digits.
std::string dump_graph(const WeightedGraph& g);

}  // namespace ratiolim
