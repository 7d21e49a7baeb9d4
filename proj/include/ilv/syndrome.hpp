#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "ilv/fusion_graph.hpp"

namespace ilv {

enum class ParityClass : uint8_t { primal = 0, dual = 1 };

// Syndrome graph of a d^3 periodic ring fusion network, one parity class.
//
// Check vertices are the cells of the lattice dual to the resource-state
// lattice, two-colored by coordinate-sum parity (primal = even). Every fusion
// is surrounded by four cells, two of each color; it contributes the edge
// joining the two primal cells to the primal graph and the edge joining the
// two dual cells to the dual graph. Edge index i corresponds to fusion edge i
// of the underlying torus, so each graph has 3d^3 edges, d^3/2 vertices, and
// every bulk check combines 12 outcomes (vertex degree 12).
//
// Immutable after construction; shared read-only across Monte Carlo workers.
class SyndromeGraph {
  public:
    ParityClass parity() const { return parity_; }
    uint32_t block_size() const { return d_; }
    uint32_t vertex_count() const { return vertex_count_; }
    uint32_t edge_count() const { return uint32_t(edge_u_.size()); }
    size_t mask_words() const { return (size_t(edge_count()) + 63) / 64; }

    uint32_t edge_u(uint32_t e) const { return edge_u_[e]; }
    uint32_t edge_v(uint32_t e) const { return edge_v_[e]; }
    Axis edge_axis(uint32_t e) const { return Axis(edge_axis_[e]); }
    // Offset from the u cell to the v cell, entries in {-1, 0, +1}.
    std::array<int8_t, 3> edge_step(uint32_t e) const { return edge_step_[e]; }

    // Contiguous edge index ranges per fusion axis (edges are axis-major).
    std::pair<uint32_t, uint32_t> axis_range(Axis axis) const;

    // Normalized lattice cell of a check vertex.
    Vec3i cell_of(uint32_t vertex) const;
    uint32_t vertex_at(Vec3i cell) const;

    // The 12 edges incident to a vertex.
    const uint32_t* incident(uint32_t vertex) const {
        return incident_.data() + size_t(vertex) * 12;
    }

    // Edges whose step wraps around periodic dimension m: a minimal cut whose
    // crossing parity classifies cycles by homology.
    const std::vector<uint64_t>& membrane(int m) const { return membranes_[m]; }

    // Membrane equivalent to membrane(m) but anchored at transverse plane h
    // (edges crossing between layer h and h+1). Used to test translation
    // invariance of the crossing parity.
    std::vector<uint64_t> membrane_at(int m, int32_t h) const;

    friend std::pair<SyndromeGraph, SyndromeGraph> build_syndrome_graphs(uint32_t d);

  private:
    ParityClass parity_{};
    uint32_t d_ = 0;
    uint32_t vertex_count_ = 0;
    std::vector<uint32_t> edge_u_, edge_v_;
    std::vector<uint8_t> edge_axis_;
    std::vector<std::array<int8_t, 3>> edge_step_;
    std::vector<uint32_t> incident_;
    std::vector<uint32_t> cell_to_vertex_;  // d^3 entries; UINT32_MAX off-class
    std::vector<Vec3i> vertex_to_cell_;
    std::array<std::vector<uint64_t>, 3> membranes_;
};

// Builds the primal and dual syndrome graphs of the d^3 periodic block.
// d must be even (the cell two-coloring is inconsistent on an odd torus)
// and at least 4.
std::pair<SyndromeGraph, SyndromeGraph> build_syndrome_graphs(uint32_t d);

// Per-dimension crossing parities of an edge subset (bitset over edges).
// For a residual that is a cycle, bit m is 1 iff the cycle wraps periodic
// dimension m an odd number of times.
std::array<uint8_t, 3> membrane_parity(const SyndromeGraph& graph,
                                       const std::vector<uint64_t>& residual);

}  // namespace ilv
