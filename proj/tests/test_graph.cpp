#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"
#include "graph.hpp"
#include "kernel.hpp"
#include "oracles.hpp"

using namespace ratiolim;

namespace {
const MembershipFn kFullLattice = [](std::span<const Coord>) { return true; };

MembershipFn grid_lines(std::int64_t l, std::int64_t m, int s, int d) {
    return [=](std::span<const Coord> p) { return in_union_q(p, SlabParams{l, m, s, d}); };
}
}  // namespace

TEST_CASE("full lattice boxes") {
    const WeightedGraph g2 = enumerate_graph(kFullLattice, BoxSpec::cube(2, 1), 2);
    CHECK(g2.vertex_count() == 9);
    CHECK(g2.edge_count() == 12);
    CHECK(g2.origin_x() >= 0);
    CHECK(g2.connected_from(g2.origin_x()));

    // |n| <= 2 inside a radius-5 window in d = 1: a 5-path
    const WeightedGraph g1 = enumerate_graph(
        [](std::span<const Coord> p) { return p[0] >= -2 && p[0] <= 2; }, BoxSpec::cube(1, 5), 1);
    CHECK(g1.vertex_count() == 5);
    CHECK(g1.edge_count() == 4);
    // fully interior: no truncation flags
    CHECK(g1.distance_to_boundary(g1.origin_x()) == WeightedGraph::kUnboundedHorizon);
}

TEST_CASE("grid-line component matches a direct scan") {
    const int R = 4;
    const WeightedGraph g = enumerate_graph(grid_lines(4, 0, 1, 2), BoxSpec::cube(2, R), 2);
    // independent flood fill over an array
    const int N = 2 * R + 1;
    auto inq = [](std::int64_t a, std::int64_t b) {
        auto cm = [](std::int64_t n) {
            std::int64_t r = ((n % 4) + 4) % 4;
            if (r > 2) r -= 4;
            return r < 0 ? -r : r;
        };
        return cm(a) == 0 || cm(b) == 0;
    };
    std::set<std::pair<std::int64_t, std::int64_t>> comp;
    std::vector<std::pair<std::int64_t, std::int64_t>> stack{{0, 0}};
    comp.insert({0, 0});
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const std::pair<std::int64_t, std::int64_t> nbs[4] = {
            {a + 1, b}, {a - 1, b}, {a, b + 1}, {a, b - 1}};
        for (const auto& nb : nbs) {
            if (std::abs(nb.first) > R || std::abs(nb.second) > R) continue;
            if (!inq(nb.first, nb.second) || comp.count(nb)) continue;
            comp.insert(nb);
            stack.push_back(nb);
        }
    }
    REQUIRE(g.vertex_count() == static_cast<std::int64_t>(comp.size()));
    for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
        const auto c = g.coords_of(v);
        CHECK(comp.count({c[0], c[1]}) == 1);
    }
}

TEST_CASE("origin must satisfy the predicate") {
    const MembershipFn never = [](std::span<const Coord>) { return false; };
    CHECK_THROWS_AS(enumerate_graph(never, BoxSpec::cube(2, 2), 2), GraphBuildError);
}

TEST_CASE("vertex order is lexicographic and stable") {
    const WeightedGraph g = enumerate_graph(kFullLattice, BoxSpec::cube(2, 2), 2);
    for (std::int64_t v = 1; v < g.vertex_count(); ++v) {
        const auto a = g.coords_of(v - 1);
        const auto b = g.coords_of(v);
        CHECK(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
    }
}

TEST_CASE("vertex count grows with radius and predicate relaxation") {
    std::int64_t prev = 0;
    for (int r = 1; r <= 4; ++r) {
        const auto g = enumerate_graph(grid_lines(4, 0, 1, 2), BoxSpec::cube(2, r), 2);
        CHECK(g.vertex_count() >= prev);
        prev = g.vertex_count();
    }
    const auto narrow = enumerate_graph(grid_lines(8, 1, 1, 2), BoxSpec::cube(2, 6), 2);
    const auto wide = enumerate_graph(grid_lines(8, 2, 1, 2), BoxSpec::cube(2, 6), 2);
    CHECK(wide.vertex_count() >= narrow.vertex_count());
}

TEST_CASE("resource guards") {
    BuildLimits tight;
    tight.max_cells = 10;
    CHECK_THROWS_AS(enumerate_graph(kFullLattice, BoxSpec::cube(2, 5), 2, tight), ResourceError);
    tight.max_cells = 300'000'000;
    tight.max_vertices = 3;
    CHECK_THROWS_AS(enumerate_graph(kFullLattice, BoxSpec::cube(2, 5), 2, tight), ResourceError);
}

TEST_CASE("glue joins at the origins") {
    const WeightedGraph a = oracle::single_vertex(true);
    const WeightedGraph b = oracle::single_vertex(true);
    const WeightedGraph g = glue(a, b, 0.5);
    CHECK(g.vertex_count() == 2);
    CHECK(g.edge_count() == 3);  // two loops plus the bridge
    CHECK(g.origin_x() == 0);
    CHECK(g.origin_y() == 1);
    CHECK(g.side_of(g.origin_x()) == Side::even);
    CHECK(g.side_of(g.origin_y()) == Side::odd);
    CHECK(g.degree(g.origin_x()) == doctest::Approx(1.5).epsilon(1e-15));

    const WeightedGraph z3 = enumerate_graph(kFullLattice, BoxSpec::cube(3, 3), 3);
    const WeightedGraph gg = glue(z3, z3, 0.25);
    CHECK(gg.degree(gg.origin_x()) == doctest::Approx(6.25).epsilon(1e-15));
    CHECK(gg.vertex_count() == 2 * z3.vertex_count());
    CHECK(gg.connected_from(gg.origin_x()));

    CHECK_THROWS_AS(glue(a, b, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(glue(a, b, 1.0), std::invalid_argument);
    const WeightedGraph unmarked =
        WeightedGraph::from_parts(1, {0, 1}, {}, {}, {{0, 1, 1.0}}, -1, -1);
    CHECK_THROWS_AS(glue(unmarked, b, 0.5), std::invalid_argument);
}

TEST_CASE("gluing two copies of one half gives an exchange symmetry") {
    const WeightedGraph half = enumerate_graph(grid_lines(4, 0, 1, 2), BoxSpec::cube(2, 3), 2);
    const WeightedGraph g = glue(half, half, 0.375);
    const KernelSeries px = heat_kernel_diag(g, g.origin_x(), 40, WalkSemantics::lazy);
    const KernelSeries py = heat_kernel_diag(g, g.origin_y(), 40, WalkSemantics::lazy);
    for (std::int64_t t = 0; t <= 40; ++t)
        CHECK(std::abs(px.values[static_cast<std::size_t>(t)] -
                       py.values[static_cast<std::size_t>(t)]) <= 1e-14);
}

TEST_CASE("unweighted glue inserts a fresh path") {
    const WeightedGraph a = oracle::single_vertex(true);
    const WeightedGraph b = oracle::single_vertex(true);
    const WeightedGraph g3 = glue_unweighted(a, b, 3);
    CHECK(g3.vertex_count() == 4);
    CHECK(g3.edge_count() == 5);
    CHECK(g3.side_of(2) == Side::none);
    const WeightedGraph g1 = glue_unweighted(a, b, 1);
    CHECK(g1.vertex_count() == 2);
    CHECK(g1.edges().back().w == 1.0);
    CHECK_THROWS_AS(glue_unweighted(a, b, 0), std::invalid_argument);
}

TEST_CASE("segment traversal probability decreases strictly with length") {
    const WeightedGraph half = oracle::path_graph(9, 4);
    double prev = 1.0;
    for (std::int64_t L = 1; L <= 6; ++L) {
        const WeightedGraph g = glue_unweighted(half, half, L);
        const double p = oracle::traversal_probability(g, g.origin_x(), g.origin_y());
        CHECK(p < prev);
        CHECK(p > 0.0);
        prev = p;
    }
}

TEST_CASE("glued graph is connected iff both halves are") {
    const WeightedGraph path = oracle::path_graph(4, 0);
    const WeightedGraph two_comp = WeightedGraph::from_parts(
        1, {0, 1, 2}, {}, {}, {{0, 1, 1.0}}, 0, -1);  // vertex 2 isolated
    CHECK(glue(path, path, 0.5).connected_from(0));
    CHECK_FALSE(glue(path, two_comp, 0.5).connected_from(0));
}

TEST_CASE("graph dump format") {
    const WeightedGraph g = glue(oracle::single_vertex(true), oracle::single_vertex(true), 0.25);
    CHECK(dump_graph(g) ==
          "1 2 3\n"
          "0 0 e\n"
          "1 0 o\n"
          "0 0 1\n"
          "1 1 1\n"
          "0 1 0.25\n");
}

TEST_CASE("edge weights are symmetric in the stepping structure") {
    // detailed balance of the one-step kernel: deg(u) P(u->v) = w = deg(v) P(v->u)
    const WeightedGraph g = glue(oracle::path_graph(3, 1), oracle::path_graph(3, 1), 0.25);
    const auto row = g.row_ptr();
    const auto col = g.col();
    const auto coeff = g.coeff();
    for (std::int64_t u = 0; u < g.vertex_count(); ++u) {
        for (std::int64_t j = row[static_cast<std::size_t>(u)];
             j < row[static_cast<std::size_t>(u) + 1]; ++j) {
            const std::int64_t src = col[static_cast<std::size_t>(j)];
            // coeff = w / (2 deg(src)); recover w and compare against the
            // reverse direction
            const double w = coeff[static_cast<std::size_t>(j)] * 2.0 * g.degree(src);
            bool found = false;
            for (std::int64_t k = row[static_cast<std::size_t>(src)];
                 k < row[static_cast<std::size_t>(src) + 1]; ++k) {
                if (col[static_cast<std::size_t>(k)] == u) {
                    const double w_rev = coeff[static_cast<std::size_t>(k)] * 2.0 * g.degree(u);
                    CHECK(w == doctest::Approx(w_rev).epsilon(1e-15));
                    found = true;
                }
            }
            CHECK(found);
        }
    }
}
