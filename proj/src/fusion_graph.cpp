#include "ilv/fusion_graph.hpp"

#include <optional>

namespace ilv {

std::string to_string(Axis axis) {
    switch (axis) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        case Axis::z: return "z";
    }
    return "?";
}

std::string to_string(Port port) {
    return to_string(port.axis) + (port.sign == Sign::plus ? "+" : "-");
}

namespace {

// Neighbor of `pos` one step in the positive direction of `axis`, or nullopt
// when the step leaves the graph (producing a half-edge).
std::optional<Vec3i> plus_neighbor(Vec3i pos, Axis axis, Vec3i dims, Boundary boundary,
                                   bool shifted_wrap) {
    int32_t c[3] = {pos.x, pos.y, pos.z};
    const int a = int(axis);
    c[a] += 1;
    if (shifted_wrap) {
        // Helical reduction: overflow in x carries into y, overflow in y
        // carries into z. z stays open.
        if (c[0] == dims.x) {
            c[0] = 0;
            c[1] += 1;
        }
        if (c[1] == dims.y) {
            c[1] = 0;
            c[2] += 1;
        }
        if (c[2] >= dims.z) {
            return std::nullopt;
        }
        return Vec3i{c[0], c[1], c[2]};
    }
    const int32_t extent = dims[a];
    if (c[a] == extent) {
        if (boundary[a] == AxisBoundary::open) {
            return std::nullopt;
        }
        c[a] = 0;
    }
    return Vec3i{c[0], c[1], c[2]};
}

}  // namespace

FusionGraph FusionGraph::build_cubic(Vec3i dims, Boundary boundary) {
    if (dims.x < 1 || dims.y < 1 || dims.z < 1) {
        throw std::invalid_argument("fusion graph dimensions must be positive");
    }
    for (int a = 0; a < 3; ++a) {
        if (boundary[a] == AxisBoundary::periodic && dims[a] < 2) {
            throw std::invalid_argument("periodic axes require extent >= 2");
        }
    }
    FusionGraph g;
    g.dims_ = dims;
    g.boundary_ = boundary;
    g.shifted_wrap_ = false;
    g.vertex_count_ = uint32_t(dims.x) * uint32_t(dims.y) * uint32_t(dims.z);

    for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
        for (uint32_t v = 0; v < g.vertex_count_; ++v) {
            const auto n = plus_neighbor(g.vertex_pos(v), axis, dims, boundary, false);
            if (n.has_value()) {
                g.edges_.push_back({v, g.vertex_id(*n), axis});
            }
        }
    }
    g.finalize_incidence();
    return g;
}

FusionGraph FusionGraph::build_shifted_toric(int32_t m, int32_t rz) {
    if (m < 2 || rz < 1) {
        throw std::invalid_argument("shifted toric graph requires m >= 2 and rz >= 1");
    }
    FusionGraph g;
    g.dims_ = {m, m, rz};
    g.boundary_ = {AxisBoundary::periodic, AxisBoundary::periodic, AxisBoundary::open};
    g.shifted_wrap_ = true;
    g.vertex_count_ = uint32_t(m) * uint32_t(m) * uint32_t(rz);

    for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
        for (uint32_t v = 0; v < g.vertex_count_; ++v) {
            const auto n = plus_neighbor(g.vertex_pos(v), axis, g.dims_, g.boundary_, true);
            if (n.has_value()) {
                g.edges_.push_back({v, g.vertex_id(*n), axis});
            }
        }
    }
    g.finalize_incidence();
    return g;
}

void FusionGraph::finalize_incidence() {
    constexpr int64_t unset = INT64_MIN;
    incidence_.assign(size_t(vertex_count_) * port_count, unset);
    for (size_t e = 0; e < edges_.size(); ++e) {
        const FusionEdge& edge = edges_[e];
        const Port tail_port{edge.axis, Sign::plus};
        const Port head_port{edge.axis, Sign::minus};
        incidence_[size_t(edge.tail) * port_count + tail_port.index()] = int64_t(e);
        incidence_[size_t(edge.head) * port_count + head_port.index()] = int64_t(e);
    }
    // Every port not consumed by a fusion becomes a single-qubit measurement.
    for (uint32_t v = 0; v < vertex_count_; ++v) {
        for (uint8_t p = 0; p < port_count; ++p) {
            auto& slot = incidence_[size_t(v) * port_count + p];
            if (slot == unset) {
                slot = ~int64_t(half_edges_.size());
                half_edges_.push_back({v, Port::from_index(p)});
            }
        }
    }
}

uint32_t FusionGraph::vertex_id(Vec3i pos) const {
    if (!contains(pos)) {
        throw std::out_of_range("vertex position outside graph dimensions");
    }
    return uint32_t(pos.x) +
           uint32_t(dims_.x) * (uint32_t(pos.y) + uint32_t(dims_.y) * uint32_t(pos.z));
}

Vec3i FusionGraph::vertex_pos(uint32_t id) const {
    if (id >= vertex_count_) {
        throw std::out_of_range("vertex id outside graph");
    }
    const uint32_t rx = uint32_t(dims_.x);
    const uint32_t ry = uint32_t(dims_.y);
    return {int32_t(id % rx), int32_t((id / rx) % ry), int32_t(id / (rx * ry))};
}

bool FusionGraph::contains(Vec3i pos) const {
    return pos.x >= 0 && pos.x < dims_.x && pos.y >= 0 && pos.y < dims_.y && pos.z >= 0 &&
           pos.z < dims_.z;
}

std::array<Incidence, port_count> FusionGraph::incident(uint32_t v) const {
    if (v >= vertex_count_) {
        throw std::out_of_range("vertex id outside graph");
    }
    std::array<Incidence, port_count> result;
    for (uint8_t p = 0; p < port_count; ++p) {
        const int64_t slot = incidence_[size_t(v) * port_count + p];
        if (slot >= 0) {
            result[p] = {Incidence::Kind::edge, uint32_t(slot)};
        } else {
            result[p] = {Incidence::Kind::half_edge, uint32_t(~slot)};
        }
    }
    return result;
}

std::vector<std::vector<uint32_t>> FusionGraph::slices() const {
    std::vector<std::vector<uint32_t>> result(size_t(dims_.z));
    const uint32_t slice_size = uint32_t(dims_.x) * uint32_t(dims_.y);
    for (auto& s : result) {
        s.reserve(slice_size);
    }
    for (uint32_t v = 0; v < vertex_count_; ++v) {
        result[v / slice_size].push_back(v);
    }
    return result;
}

}  // namespace ilv
