#include <doctest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "ilv/fusion_graph.hpp"

using namespace ilv;

namespace {

constexpr Boundary all_periodic{AxisBoundary::periodic, AxisBoundary::periodic,
                                AxisBoundary::periodic};
constexpr Boundary all_open{AxisBoundary::open, AxisBoundary::open, AxisBoundary::open};
constexpr Boundary z_open{AxisBoundary::periodic, AxisBoundary::periodic, AxisBoundary::open};

// Brute-force adjacency oracle: two vertices are fused along an axis iff
// their coordinates differ by one step on that axis (mod extent when the
// axis is periodic) and agree elsewhere.
std::set<std::tuple<uint32_t, uint32_t, int>> brute_force_edges(Vec3i dims, Boundary boundary) {
    std::set<std::tuple<uint32_t, uint32_t, int>> edges;
    const auto id = [&](int x, int y, int z) {
        return uint32_t(x) + uint32_t(dims.x) * (uint32_t(y) + uint32_t(dims.y) * uint32_t(z));
    };
    for (int z = 0; z < dims.z; ++z) {
        for (int y = 0; y < dims.y; ++y) {
            for (int x = 0; x < dims.x; ++x) {
                const int coords[3] = {x, y, z};
                for (int a = 0; a < 3; ++a) {
                    int next[3] = {x, y, z};
                    next[a] += 1;
                    if (next[a] == dims[a]) {
                        if (boundary[a] == AxisBoundary::open) {
                            continue;
                        }
                        next[a] = 0;
                    }
                    if (next[a] == coords[a]) {
                        continue;  // extent 1, self loop
                    }
                    edges.insert({id(x, y, z), id(next[0], next[1], next[2]), a});
                }
            }
        }
    }
    return edges;
}

}  // namespace

TEST_CASE("periodic 4x4x4 counts") {
    const auto g = FusionGraph::build_cubic({4, 4, 4}, all_periodic);
    CHECK(g.vertex_count() == 64);
    CHECK(g.edges().size() == 192);
    CHECK(g.half_edges().empty());
}

TEST_CASE("simulation block size 12x12x12") {
    const auto g = FusionGraph::build_cubic({12, 12, 12}, all_periodic);
    CHECK(g.edges().size() == 5184);
}

TEST_CASE("z-open slab 8x8x1 matches the brute-force oracle") {
    const auto g = FusionGraph::build_cubic({8, 8, 1}, z_open);
    std::set<std::tuple<uint32_t, uint32_t, int>> built;
    for (const FusionEdge& e : g.edges()) {
        built.insert({e.tail, e.head, int(e.axis)});
    }
    CHECK(built == brute_force_edges({8, 8, 1}, z_open));
    CHECK(g.edges().size() == 128);  // 64 x edges + 64 y edges
    CHECK(g.half_edges().size() == 128);  // z+ and z- on every vertex
    for (uint32_t v = 0; v < g.vertex_count(); ++v) {
        const auto inc = g.incident(v);
        CHECK(inc[Port{Axis::z, Sign::plus}.index()].kind == Incidence::Kind::half_edge);
        CHECK(inc[Port{Axis::z, Sign::minus}.index()].kind == Incidence::Kind::half_edge);
    }
}

TEST_CASE("mixed boundaries match the brute-force oracle") {
    for (const Boundary boundary :
         {all_open, z_open,
          Boundary{AxisBoundary::open, AxisBoundary::periodic, AxisBoundary::periodic}}) {
        const auto g = FusionGraph::build_cubic({3, 4, 5}, boundary);
        std::set<std::tuple<uint32_t, uint32_t, int>> built;
        for (const FusionEdge& e : g.edges()) {
            built.insert({e.tail, e.head, int(e.axis)});
        }
        CHECK(built == brute_force_edges({3, 4, 5}, boundary));
        // every port is in exactly one edge or one half-edge
        CHECK(g.edges().size() * 2 + g.half_edges().size() == g.vertex_count() * 6);
    }
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(FusionGraph::build_cubic({0, 4, 4}, all_open), std::invalid_argument);
    CHECK_THROWS_AS(FusionGraph::build_cubic({4, -1, 4}, all_open), std::invalid_argument);
    CHECK_THROWS_AS(FusionGraph::build_cubic({1, 4, 4}, all_periodic), std::invalid_argument);
}

TEST_CASE("slices partition the graph") {
    const auto g = FusionGraph::build_cubic({8, 8, 3}, z_open);
    const auto slices = g.slices();
    REQUIRE(slices.size() == 3);
    for (const auto& s : slices) {
        CHECK(s.size() == 64);
    }

    const auto thin = FusionGraph::build_cubic({1, 1, 5}, all_open);
    CHECK(thin.slices().size() == 5);
    for (const auto& s : thin.slices()) {
        CHECK(s.size() == 1);
    }

    const auto box = FusionGraph::build_cubic({2, 3, 4}, all_open);
    const auto box_slices = box.slices();
    for (size_t k = 0; k < box_slices.size(); ++k) {
        for (const uint32_t v : box_slices[k]) {
            CHECK(box.vertex_pos(v).z == int32_t(k));
        }
    }
}

TEST_CASE("incidence") {
    const auto g = FusionGraph::build_cubic({4, 4, 4}, all_periodic);
    const auto inc = g.incident(g.vertex_id({0, 0, 0}));
    for (const Incidence& i : inc) {
        CHECK(i.kind == Incidence::Kind::edge);
    }
    // wraparound: the x- partner of (0,0,0) is (3,0,0)
    const auto& xm_edge = g.edges()[inc[Port{Axis::x, Sign::minus}.index()].index];
    CHECK(xm_edge.tail == g.vertex_id({3, 0, 0}));
    CHECK(xm_edge.head == g.vertex_id({0, 0, 0}));

    const auto open = FusionGraph::build_cubic({3, 3, 3}, all_open);
    int corner_edges = 0;
    int corner_half = 0;
    for (const Incidence& i : open.incident(open.vertex_id({0, 0, 0}))) {
        (i.kind == Incidence::Kind::edge ? corner_edges : corner_half) += 1;
    }
    CHECK(corner_edges == 3);
    CHECK(corner_half == 3);

    CHECK_THROWS_AS(g.incident(9999), std::out_of_range);
}

TEST_CASE("port pairing") {
    const auto g = FusionGraph::build_cubic({4, 3, 2},
                                            {AxisBoundary::periodic, AxisBoundary::open,
                                             AxisBoundary::periodic});
    for (uint32_t e = 0; e < g.edges().size(); ++e) {
        const FusionEdge& edge = g.edges()[e];
        const auto tail_inc = g.incident(edge.tail);
        const auto head_inc = g.incident(edge.head);
        CHECK(tail_inc[Port{edge.axis, Sign::plus}.index()].index == e);
        CHECK(head_inc[Port{edge.axis, Sign::minus}.index()].index == e);
    }
}

TEST_CASE("determinism") {
    const auto a = FusionGraph::build_cubic({5, 4, 3}, z_open);
    const auto b = FusionGraph::build_cubic({5, 4, 3}, z_open);
    REQUIRE(a.edges().size() == b.edges().size());
    for (size_t e = 0; e < a.edges().size(); ++e) {
        CHECK(a.edges()[e].tail == b.edges()[e].tail);
        CHECK(a.edges()[e].head == b.edges()[e].head);
        CHECK(a.edges()[e].axis == b.edges()[e].axis);
    }
    // edges are ordered by (axis, tail id)
    for (size_t e = 1; e < a.edges().size(); ++e) {
        const bool ordered = a.edges()[e - 1].axis < a.edges()[e].axis ||
                             (a.edges()[e - 1].axis == a.edges()[e].axis &&
                              a.edges()[e - 1].tail < a.edges()[e].tail);
        CHECK(ordered);
    }
}

TEST_CASE("shifted toric identifications") {
    const auto g = FusionGraph::build_shifted_toric(4, 3);
    CHECK(g.shifted_wrap());
    // x wrap advances y by one
    const auto inc = g.incident(g.vertex_id({3, 1, 0}));
    const auto& xw = g.edges()[inc[Port{Axis::x, Sign::plus}.index()].index];
    CHECK(xw.head == g.vertex_id({0, 2, 0}));
    // double wrap at the corner advances z
    const auto& corner = g.edges()[g.incident(g.vertex_id({3, 3, 0}))[Port{Axis::x, Sign::plus}.index()].index];
    CHECK(corner.head == g.vertex_id({0, 0, 1}));
    // y wrap advances z by one
    const auto& yw = g.edges()[g.incident(g.vertex_id({1, 3, 0}))[Port{Axis::y, Sign::plus}.index()].index];
    CHECK(yw.head == g.vertex_id({1, 0, 1}));
    // the top slice sheds half-edges where the helix runs out of slices
    const auto top = g.incident(g.vertex_id({1, 3, 2}));
    CHECK(top[Port{Axis::y, Sign::plus}.index()].kind == Incidence::Kind::half_edge);
    // every port accounted for
    CHECK(g.edges().size() * 2 + g.half_edges().size() == g.vertex_count() * 6);
}
