#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilv {

enum class Axis : uint8_t { x = 0, y = 1, z = 2 };

enum class Sign : uint8_t { minus = 0, plus = 1 };

// One of the six qubits of a ring resource state, named after the lattice
// direction of the fusion it participates in.
struct Port {
    Axis axis;
    Sign sign;

    // x-, x+, y-, y+, z-, z+
    uint8_t index() const { return uint8_t(uint8_t(axis) * 2 + uint8_t(sign)); }
    static Port from_index(uint8_t i) { return {Axis(i / 2), Sign(i % 2)}; }
    bool operator==(const Port&) const = default;
};

constexpr uint8_t port_count = 6;

std::string to_string(Axis axis);
std::string to_string(Port port);

struct Vec3i {
    int32_t x = 0;
    int32_t y = 0;
    int32_t z = 0;

    int32_t operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    bool operator==(const Vec3i&) const = default;
};

enum class AxisBoundary : uint8_t { periodic, open };

using Boundary = std::array<AxisBoundary, 3>;

// A fusion between the axis+ port of `tail` and the axis- port of `head`.
// head is the lattice neighbor of tail in the positive direction of `axis`
// (modulo wraparound on periodic axes).
struct FusionEdge {
    uint32_t tail;
    uint32_t head;
    Axis axis;
};

// A single-qubit measurement on an unpaired port at an open boundary.
struct HalfEdge {
    uint32_t vertex;
    Port port;
};

struct Incidence {
    enum class Kind : uint8_t { edge, half_edge };
    Kind kind;
    uint32_t index;
};

// Simple cubic lattice of ring resource states. Vertices carry canonical ids
// ix + rx*(iy + ry*iz); edges are ordered by (axis, tail id) so two builds
// from equal arguments are identical. Immutable after construction.
class FusionGraph {
  public:
    static FusionGraph build_cubic(Vec3i dims, Boundary boundary);

    // Torus of x/y extent m and open z extent rz with helical identifications:
    // stepping past x = m-1 lands in the next y row, stepping past y = m-1
    // lands in the next z slice. Used by the single-module toric schedule,
    // where these identifications keep every fusion delay constant.
    static FusionGraph build_shifted_toric(int32_t m, int32_t rz);

    Vec3i dims() const { return dims_; }
    Boundary boundary() const { return boundary_; }
    bool shifted_wrap() const { return shifted_wrap_; }

    uint32_t vertex_count() const { return vertex_count_; }
    uint32_t vertex_id(Vec3i pos) const;
    Vec3i vertex_pos(uint32_t id) const;
    bool contains(Vec3i pos) const;

    const std::vector<FusionEdge>& edges() const { return edges_; }
    const std::vector<HalfEdge>& half_edges() const { return half_edges_; }

    // All six ports of v, each resolved to the edge or half-edge using it.
    std::array<Incidence, port_count> incident(uint32_t v) const;

    // Vertex sets of the rz slices perpendicular to z, in z order.
    std::vector<std::vector<uint32_t>> slices() const;

  private:
    FusionGraph() = default;
    void finalize_incidence();

    Vec3i dims_{};
    Boundary boundary_{};
    bool shifted_wrap_ = false;
    uint32_t vertex_count_ = 0;
    std::vector<FusionEdge> edges_;
    std::vector<HalfEdge> half_edges_;
    // vertex*6 + port index -> edge index (>= 0) or ~half_edge index (< 0)
    std::vector<int64_t> incidence_;
};

}  // namespace ilv
