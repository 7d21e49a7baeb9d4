#include "ilv/syndrome.hpp"

#include <stdexcept>

#include "ilv/kernels.hpp"

namespace ilv {

namespace {

inline int32_t wrap(int32_t c, int32_t d) {
    return c < 0 ? c + d : (c >= d ? c - d : c);
}

struct CellPair {
    Vec3i u;                     // normalized cell coordinates
    std::array<int8_t, 3> step;  // offset from u to v
};

// The four dual-lattice cells surrounding a fusion split into two pairs of
// equal color. pair 0 contains the cell at the fusion's tail position; its
// color is the tail coordinate-sum parity.
std::array<CellPair, 2> surrounding_pairs(Vec3i p, Axis axis) {
    switch (axis) {
        case Axis::x:
            return {CellPair{{p.x, p.y - 1, p.z - 1}, {0, 1, 1}},
                    CellPair{{p.x, p.y - 1, p.z}, {0, 1, -1}}};
        case Axis::y:
            return {CellPair{{p.x - 1, p.y, p.z - 1}, {1, 0, 1}},
                    CellPair{{p.x - 1, p.y, p.z}, {1, 0, -1}}};
        case Axis::z:
            return {CellPair{{p.x - 1, p.y - 1, p.z}, {1, 1, 0}},
                    CellPair{{p.x - 1, p.y, p.z}, {1, -1, 0}}};
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::pair<uint32_t, uint32_t> SyndromeGraph::axis_range(Axis axis) const {
    const uint32_t per_axis = edge_count() / 3;
    const uint32_t a = uint32_t(axis);
    return {a * per_axis, (a + 1) * per_axis};
}

Vec3i SyndromeGraph::cell_of(uint32_t vertex) const {
    return vertex_to_cell_[vertex];
}

uint32_t SyndromeGraph::vertex_at(Vec3i cell) const {
    const int32_t d = int32_t(d_);
    const Vec3i n{wrap(cell.x, d), wrap(cell.y, d), wrap(cell.z, d)};
    const uint32_t v =
        cell_to_vertex_[size_t(n.x) + size_t(d) * (size_t(n.y) + size_t(d) * size_t(n.z))];
    if (v == UINT32_MAX) {
        throw std::out_of_range("cell belongs to the other parity class");
    }
    return v;
}

std::vector<uint64_t> SyndromeGraph::membrane_at(int m, int32_t h) const {
    std::vector<uint64_t> bits((size_t(edge_count()) + 63) / 64, 0);
    for (uint32_t e = 0; e < edge_count(); ++e) {
        const int8_t s = edge_step_[e][m];
        if (s == 0) {
            continue;
        }
        const Vec3i u = vertex_to_cell_[edge_u_[e]];
        const int32_t c = m == 0 ? u.x : (m == 1 ? u.y : u.z);
        const bool crosses = (s > 0 && c == h) || (s < 0 && c == wrap(h + 1, int32_t(d_)));
        if (crosses) {
            bits[e / 64] |= uint64_t(1) << (e % 64);
        }
    }
    return bits;
}

std::pair<SyndromeGraph, SyndromeGraph> build_syndrome_graphs(uint32_t d) {
    if (d % 2 != 0) {
        throw std::invalid_argument("block size must be even for a consistent cell coloring");
    }
    if (d < 4) {
        throw std::invalid_argument("block size must be at least 4");
    }

    const FusionGraph fusion = FusionGraph::build_cubic(
        {int32_t(d), int32_t(d), int32_t(d)},
        {AxisBoundary::periodic, AxisBoundary::periodic, AxisBoundary::periodic});

    SyndromeGraph graphs[2];
    const uint32_t cells = d * d * d;
    for (int side = 0; side < 2; ++side) {
        SyndromeGraph& g = graphs[side];
        g.parity_ = ParityClass(side);
        g.d_ = d;
        g.cell_to_vertex_.assign(cells, UINT32_MAX);
        g.vertex_to_cell_.reserve(cells / 2);
        for (uint32_t c = 0; c < cells; ++c) {
            const Vec3i cell{int32_t(c % d), int32_t((c / d) % d), int32_t(c / (d * d))};
            if (uint32_t(cell.x + cell.y + cell.z) % 2 == uint32_t(side)) {
                g.cell_to_vertex_[c] = uint32_t(g.vertex_to_cell_.size());
                g.vertex_to_cell_.push_back(cell);
            }
        }
        g.vertex_count_ = uint32_t(g.vertex_to_cell_.size());
        g.edge_u_.resize(fusion.edges().size());
        g.edge_v_.resize(fusion.edges().size());
        g.edge_axis_.resize(fusion.edges().size());
        g.edge_step_.resize(fusion.edges().size());
    }

    for (size_t e = 0; e < fusion.edges().size(); ++e) {
        const FusionEdge& fe = fusion.edges()[e];
        const Vec3i p = fusion.vertex_pos(fe.tail);
        const auto pairs = surrounding_pairs(p, fe.axis);
        const int tail_parity = int(uint32_t(p.x + p.y + p.z) % 2);
        for (int side = 0; side < 2; ++side) {
            // pair 0 carries the tail's parity, pair 1 the opposite one.
            const CellPair& pair = pairs[tail_parity == side ? 0 : 1];
            SyndromeGraph& g = graphs[side];
            const uint32_t u = g.vertex_at(pair.u);
            const Vec3i v_cell{pair.u.x + pair.step[0], pair.u.y + pair.step[1],
                               pair.u.z + pair.step[2]};
            const uint32_t v = g.vertex_at(v_cell);
            g.edge_u_[e] = u;
            g.edge_v_[e] = v;
            g.edge_axis_[e] = uint8_t(fe.axis);
            g.edge_step_[e] = pair.step;
        }
    }

    for (int side = 0; side < 2; ++side) {
        SyndromeGraph& g = graphs[side];
        std::vector<uint32_t> degree(g.vertex_count_, 0);
        for (uint32_t e = 0; e < g.edge_count(); ++e) {
            ++degree[g.edge_u_[e]];
            ++degree[g.edge_v_[e]];
        }
        for (uint32_t v = 0; v < g.vertex_count_; ++v) {
            if (degree[v] != 12) {
                throw std::logic_error("syndrome check vertex degree != 12");
            }
        }
        g.incident_.assign(size_t(g.vertex_count_) * 12, 0);
        std::vector<uint32_t> fill(g.vertex_count_, 0);
        for (uint32_t e = 0; e < g.edge_count(); ++e) {
            g.incident_[size_t(g.edge_u_[e]) * 12 + fill[g.edge_u_[e]]++] = e;
            g.incident_[size_t(g.edge_v_[e]) * 12 + fill[g.edge_v_[e]]++] = e;
        }
        for (int m = 0; m < 3; ++m) {
            g.membranes_[m] = g.membrane_at(m, int32_t(d) - 1);
        }
    }

    return {std::move(graphs[0]), std::move(graphs[1])};
}

std::array<uint8_t, 3> membrane_parity(const SyndromeGraph& graph,
                                       const std::vector<uint64_t>& residual) {
    const auto& backend = kernels::active();
    std::array<uint8_t, 3> bits{};
    for (int m = 0; m < 3; ++m) {
        bits[m] = uint8_t(
            backend.and_parity(residual.data(), graph.membrane(m).data(), residual.size()));
    }
    return bits;
}

}  // namespace ilv
