#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ilv/kernels.hpp"
#include "ilv/syndrome.hpp"

using namespace ilv;

namespace {

// Edge index connecting two cells, found by scanning the 12 incident edges.
uint32_t edge_between(const SyndromeGraph& g, Vec3i a, Vec3i b) {
    const uint32_t u = g.vertex_at(a);
    const uint32_t v = g.vertex_at(b);
    for (int i = 0; i < 12; ++i) {
        const uint32_t e = g.incident(u)[i];
        if ((g.edge_u(e) == u && g.edge_v(e) == v) || (g.edge_u(e) == v && g.edge_v(e) == u)) {
            return e;
        }
    }
    throw std::runtime_error("cells not adjacent");
}

void set_bit(std::vector<uint64_t>& bits, uint32_t e) {
    bits[e / 64] ^= uint64_t(1) << (e % 64);
}

}  // namespace

TEST_CASE("counts at d = 4") {
    const auto [primal, dual] = build_syndrome_graphs(4);
    for (const SyndromeGraph* g : {&primal, &dual}) {
        CHECK(g->vertex_count() == 32);   // d^3 / 2 checks per class
        CHECK(g->edge_count() == 192);    // one edge per fusion per class
        std::vector<int> degree(g->vertex_count(), 0);
        for (uint32_t e = 0; e < g->edge_count(); ++e) {
            ++degree[g->edge_u(e)];
            ++degree[g->edge_v(e)];
        }
        for (const int deg : degree) {
            CHECK(deg == 12);  // 12 outcomes per bulk check
        }
    }
    // both outcomes of every fusion accounted for: 2 * 3d^3 edges in total
    CHECK(primal.edge_count() + dual.edge_count() == 6 * 4 * 4 * 4);
}

TEST_CASE("three edge direction classes") {
    const auto [primal, dual] = build_syndrome_graphs(6);
    for (int a = 0; a < 3; ++a) {
        const auto [begin, end] = primal.axis_range(Axis(a));
        CHECK(end - begin == primal.edge_count() / 3);
        for (uint32_t e = begin; e < end; ++e) {
            CHECK(primal.edge_axis(e) == Axis(a));
            CHECK(dual.edge_axis(e) == Axis(a));
            // direction-typed steps: x edges step diagonally in (y, z) etc.
            CHECK(primal.edge_step(e)[a] == 0);
            CHECK(primal.edge_step(e)[(a + 1) % 3] != 0);
            CHECK(primal.edge_step(e)[(a + 2) % 3] != 0);
        }
    }
}

TEST_CASE("primal and dual graphs are isomorphic under translation") {
    const auto [primal, dual] = build_syndrome_graphs(4);
    const int32_t d = 4;
    const auto translate = [&](Vec3i c) { return Vec3i{(c.x + 1) % d, c.y, c.z}; };

    std::set<std::tuple<uint32_t, uint32_t, int>> dual_edges;
    for (uint32_t e = 0; e < dual.edge_count(); ++e) {
        const auto [u, v] = std::minmax(dual.edge_u(e), dual.edge_v(e));
        dual_edges.insert({u, v, int(dual.edge_axis(e))});
    }
    std::set<std::tuple<uint32_t, uint32_t, int>> translated;
    for (uint32_t e = 0; e < primal.edge_count(); ++e) {
        const uint32_t u = dual.vertex_at(translate(primal.cell_of(primal.edge_u(e))));
        const uint32_t v = dual.vertex_at(translate(primal.cell_of(primal.edge_v(e))));
        translated.insert({std::min(u, v), std::max(u, v), int(primal.edge_axis(e))});
    }
    CHECK(translated == dual_edges);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(build_syndrome_graphs(5), std::invalid_argument);
    CHECK_THROWS_AS(build_syndrome_graphs(2), std::invalid_argument);
}

TEST_CASE("membrane parity of simple residuals") {
    const auto [primal, dual] = build_syndrome_graphs(4);
    const SyndromeGraph& g = primal;

    std::vector<uint64_t> residual(g.mask_words(), 0);
    CHECK(membrane_parity(g, residual) == std::array<uint8_t, 3>{0, 0, 0});

    // straight loop wrapping dimension 0: alternate z-edge steps
    // (+1,+1,0) and (+1,-1,0)
    SUBCASE("wrapping loop") {
        Vec3i c{0, 0, 0};
        for (int s = 0; s < 4; ++s) {
            const Vec3i next{(c.x + 1) % 4, c.y == 0 ? 1 : 0, 0};
            set_bit(residual, edge_between(g, c, next));
            c = next;
        }
        CHECK(c == Vec3i{0, 0, 0});
        CHECK(membrane_parity(g, residual) == std::array<uint8_t, 3>{1, 0, 0});
    }

    // contractible triangle: steps (+1,+1,0), (0,-1,+1), (-1,0,-1)
    SUBCASE("contractible cycle") {
        const Vec3i c0{0, 0, 0}, c1{1, 1, 0}, c2{1, 0, 1};
        set_bit(residual, edge_between(g, c0, c1));
        set_bit(residual, edge_between(g, c1, c2));
        set_bit(residual, edge_between(g, c2, c0));
        CHECK(membrane_parity(g, residual) == std::array<uint8_t, 3>{0, 0, 0});
    }

    // quad whose y steps cross the seam twice: still trivial
    SUBCASE("seam-cancelling cycle") {
        const Vec3i c0{0, 0, 0}, c1{1, 1, 0}, c2{2, 0, 0}, c3{1, 3, 0};
        for (const auto& [a, b] :
             {std::pair{c0, c1}, std::pair{c1, c2}, std::pair{c2, c3}, std::pair{c3, c0}}) {
            set_bit(residual, edge_between(g, a, b));
        }
        CHECK(membrane_parity(g, residual) == std::array<uint8_t, 3>{0, 0, 0});
    }
}

// Brute force on d = 4: crossing parities computed against a membrane at any
// transverse plane agree on a complete cycle basis of the graph.
TEST_CASE("membrane position invariance") {
    const auto [primal, dual] = build_syndrome_graphs(4);
    const SyndromeGraph& g = primal;
    const uint32_t n = g.vertex_count();

    // spanning tree by BFS over all edges
    std::vector<uint32_t> parent_edge(n, UINT32_MAX);
    std::vector<uint32_t> parent_vertex(n, UINT32_MAX);
    std::vector<uint8_t> visited(n, 0);
    std::vector<uint32_t> queue{0};
    visited[0] = 1;
    for (size_t q = 0; q < queue.size(); ++q) {
        const uint32_t u = queue[q];
        for (int i = 0; i < 12; ++i) {
            const uint32_t e = g.incident(u)[i];
            const uint32_t other = g.edge_u(e) == u ? g.edge_v(e) : g.edge_u(e);
            if (!visited[other]) {
                visited[other] = 1;
                parent_edge[other] = e;
                parent_vertex[other] = u;
                queue.push_back(other);
            }
        }
    }
    REQUIRE(queue.size() == n);

    std::vector<uint8_t> on_tree(g.edge_count(), 0);
    for (uint32_t v = 0; v < n; ++v) {
        if (parent_edge[v] != UINT32_MAX) {
            on_tree[parent_edge[v]] = 1;
        }
    }

    const auto fundamental_cycle = [&](uint32_t e) {
        std::vector<uint64_t> cycle(g.mask_words(), 0);
        set_bit(cycle, e);
        for (uint32_t v : {g.edge_u(e), g.edge_v(e)}) {
            while (parent_edge[v] != UINT32_MAX) {
                set_bit(cycle, parent_edge[v]);  // shared root segments cancel
                v = parent_vertex[v];
            }
        }
        return cycle;
    };

    const auto& backend = kernels::active();
    int checked = 0;
    for (uint32_t e = 0; e < g.edge_count(); ++e) {
        if (on_tree[e]) {
            continue;
        }
        const auto cycle = fundamental_cycle(e);
        for (int m = 0; m < 3; ++m) {
            const auto reference = g.membrane_at(m, 3);
            const uint64_t expected =
                backend.and_parity(cycle.data(), reference.data(), cycle.size());
            for (int32_t h = 0; h < 4; ++h) {
                const auto shifted = g.membrane_at(m, h);
                CHECK(backend.and_parity(cycle.data(), shifted.data(), cycle.size()) == expected);
            }
        }
        ++checked;
    }
    CHECK(checked == int(g.edge_count() - (n - 1)));
}

TEST_CASE("paper-scale block builds") {
    const auto [primal, dual] = build_syndrome_graphs(12);
    CHECK(primal.vertex_count() == 12 * 12 * 12 / 2);
    CHECK(primal.edge_count() == 3 * 12 * 12 * 12);
    CHECK(dual.vertex_count() == primal.vertex_count());
}
