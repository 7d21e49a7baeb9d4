#include "ilv/scheduler.hpp"

#include <stdexcept>

namespace ilv {

Scheme Scheme::trivial() {
    return {};
}

Scheme Scheme::layered(uint32_t k) {
    if (k < 1) {
        throw std::invalid_argument("layered interleaving requires k >= 1");
    }
    Scheme s;
    s.kind = Kind::layered;
    s.param = k;
    return s;
}

Scheme Scheme::rastered(uint32_t l) {
    if (l < 1) {
        throw std::invalid_argument("rastering length must be >= 1");
    }
    Scheme s;
    s.kind = Kind::rastered;
    s.param = l;
    return s;
}

Scheme Scheme::rastered_abcd(uint32_t l) {
    Scheme s = rastered(l);
    s.kind = Kind::rastered_abcd;
    return s;
}

Scheme Scheme::single_module_toric(uint32_t m) {
    if (m < 2) {
        throw std::invalid_argument("toric schedule requires m >= 2");
    }
    Scheme s;
    s.kind = Kind::single_module_toric;
    s.param = m;
    s.grid_x = 1;
    s.grid_y = 1;
    return s;
}

Scheme Scheme::hyper_rastered(uint32_t dims, uint32_t l) {
    if (dims < 2) {
        throw std::invalid_argument("hyper-rastered schemes require dimension >= 2");
    }
    if (l < 1) {
        throw std::invalid_argument("rastering length must be >= 1");
    }
    Scheme s;
    s.kind = Kind::hyper_rastered;
    s.param = l;
    s.hyper_dims = dims;
    return s;
}

std::string to_string(Scheme::Kind kind) {
    switch (kind) {
        case Scheme::Kind::trivial: return "trivial";
        case Scheme::Kind::layered: return "layered";
        case Scheme::Kind::rastered: return "rastered";
        case Scheme::Kind::rastered_abcd: return "rastered-abcd";
        case Scheme::Kind::single_module_toric: return "single-module-toric";
        case Scheme::Kind::hyper_rastered: return "hyper-rastered";
    }
    return "?";
}

namespace {

// Time bin of a cell within its L x L square. B squares raster right to
// left, C squares bottom to top, D squares both; A squares raster left to
// right, top to bottom (top = ascending iy from 0).
uint64_t raster_bin(uint32_t u, uint32_t v, uint32_t l, bool flip_u, bool flip_v) {
    const uint32_t uu = flip_u ? l - 1 - u : u;
    const uint32_t vv = flip_v ? l - 1 - v : v;
    return uint64_t(vv) * l + uu;
}

}  // namespace

Schedule assign_coordinates(const FusionGraph& graph, const Scheme& scheme) {
    const Vec3i dims = graph.dims();
    const uint32_t rx = uint32_t(dims.x);
    const uint32_t ry = uint32_t(dims.y);

    Schedule schedule;
    schedule.scheme = scheme;
    schedule.scheme.periodic_x = graph.boundary()[0] == AxisBoundary::periodic;
    schedule.scheme.periodic_y = graph.boundary()[1] == AxisBoundary::periodic;
    schedule.coords.resize(graph.vertex_count());

    uint32_t grid_x = 0;
    uint32_t grid_y = 0;
    switch (scheme.kind) {
        case Scheme::Kind::trivial:
        case Scheme::Kind::layered:
            grid_x = rx;
            grid_y = ry;
            break;
        case Scheme::Kind::rastered:
        case Scheme::Kind::rastered_abcd: {
            const uint32_t l = scheme.param;
            if (rx % l != 0 || ry % l != 0) {
                throw std::invalid_argument("slice dimensions must be divisible by L");
            }
            grid_x = rx / l;
            grid_y = ry / l;
            if (scheme.kind == Scheme::Kind::rastered_abcd) {
                if ((schedule.scheme.periodic_x && grid_x % 2 != 0) ||
                    (schedule.scheme.periodic_y && grid_y % 2 != 0)) {
                    throw std::invalid_argument(
                        "alternating square types need an even module grid on periodic axes");
                }
            }
            break;
        }
        case Scheme::Kind::single_module_toric: {
            const uint32_t m = scheme.param;
            if (!graph.shifted_wrap() || rx != m || ry != m) {
                throw std::invalid_argument(
                    "toric schedule requires the shifted M x M torus graph");
            }
            grid_x = 1;
            grid_y = 1;
            break;
        }
        case Scheme::Kind::hyper_rastered:
            throw std::invalid_argument(
                "hyper-rastered schemes support coordinate derivation via "
                "hyper_time_coordinate only");
    }
    if ((scheme.grid_x != 0 && scheme.grid_x != grid_x) ||
        (scheme.grid_y != 0 && scheme.grid_y != grid_y)) {
        throw std::invalid_argument("scheme module grid does not match graph dimensions");
    }
    schedule.scheme.grid_x = grid_x;
    schedule.scheme.grid_y = grid_y;
    schedule.rsg_count = grid_x * grid_y;

    for (uint32_t v = 0; v < graph.vertex_count(); ++v) {
        const Vec3i p = graph.vertex_pos(v);
        const uint32_t ix = uint32_t(p.x);
        const uint32_t iy = uint32_t(p.y);
        const uint64_t iz = uint64_t(p.z);
        InterleavingCoordinate& c = schedule.coords[v];
        switch (scheme.kind) {
            case Scheme::Kind::trivial:
                c = {ix + rx * iy, iz};
                break;
            case Scheme::Kind::layered:
                c = {ix + rx * iy, uint64_t(scheme.param) * iz};
                break;
            case Scheme::Kind::rastered:
            case Scheme::Kind::rastered_abcd: {
                const uint32_t l = scheme.param;
                const uint32_t sx = ix / l;
                const uint32_t sy = iy / l;
                bool flip_u = false;
                bool flip_v = false;
                if (scheme.kind == Scheme::Kind::rastered_abcd) {
                    flip_u = sx % 2 != 0;  // B and D squares
                    flip_v = sy % 2 != 0;  // C and D squares
                }
                const uint64_t bin = raster_bin(ix % l, iy % l, l, flip_u, flip_v);
                c = {sx + grid_x * sy, uint64_t(l) * l * iz + bin};
                break;
            }
            case Scheme::Kind::single_module_toric: {
                const uint64_t m = scheme.param;
                c = {0, ix + m * iy + m * m * iz};
                break;
            }
            case Scheme::Kind::hyper_rastered:
                break;  // rejected above
        }
    }
    return schedule;
}

FusionClassification classify_fusion(const Schedule& schedule, const FusionEdge& edge) {
    if (edge.tail >= schedule.coords.size() || edge.head >= schedule.coords.size()) {
        throw std::out_of_range("fusion edge endpoint is not scheduled");
    }
    const InterleavingCoordinate& a = schedule.coords[edge.tail];
    const InterleavingCoordinate& b = schedule.coords[edge.head];
    return {a.t < b.t ? b.t - a.t : a.t - b.t, a.g == b.g};
}

std::array<uint64_t, port_count> delay_requirements(const Schedule& schedule,
                                                    const FusionGraph& graph) {
    std::array<uint64_t, port_count> bins{};
    for (const FusionEdge& edge : graph.edges()) {
        const InterleavingCoordinate& tail = schedule.coords.at(edge.tail);
        const InterleavingCoordinate& head = schedule.coords.at(edge.head);
        if (tail.g != head.g) {
            continue;  // networked routing is not part of the per-port profile
        }
        // The earlier photon of a local fusion waits in a delay for |dt|.
        if (tail.t < head.t) {
            const uint8_t port = Port{edge.axis, Sign::plus}.index();
            bins[port] = std::max(bins[port], head.t - tail.t);
        } else if (head.t < tail.t) {
            const uint8_t port = Port{edge.axis, Sign::minus}.index();
            bins[port] = std::max(bins[port], tail.t - head.t);
        }
    }
    return bins;
}

uint64_t interleaving_ratio(const Scheme& scheme) {
    switch (scheme.kind) {
        case Scheme::Kind::trivial:
        case Scheme::Kind::layered:
            return 1;
        case Scheme::Kind::rastered:
        case Scheme::Kind::rastered_abcd:
        case Scheme::Kind::single_module_toric:
            return uint64_t(scheme.param) * scheme.param;
        case Scheme::Kind::hyper_rastered: {
            uint64_t ratio = 1;
            for (uint32_t i = 0; i < scheme.hyper_dims; ++i) {
                ratio *= scheme.param;
            }
            return ratio;
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<uint64_t> hyper_delay_lengths(uint32_t dims, uint32_t l) {
    if (dims < 1) {
        throw std::invalid_argument("dimension must be >= 1");
    }
    std::vector<uint64_t> lengths(dims + 1);
    uint64_t power = 1;
    for (uint32_t i = 0; i <= dims; ++i) {
        lengths[i] = power;
        power *= l;
    }
    return lengths;
}

uint64_t hyper_time_coordinate(std::span<const int64_t> pos, uint32_t l) {
    if (pos.size() < 2) {
        throw std::invalid_argument("position must have at least two components");
    }
    const size_t d = pos.size() - 1;
    uint64_t t = 0;
    uint64_t power = 1;
    for (size_t i = 0; i < d; ++i) {
        if (pos[i] < 0) {
            throw std::invalid_argument("position components must be nonnegative");
        }
        t += power * (uint64_t(pos[i]) % l);
        power *= l;
    }
    if (pos[d] < 0) {
        throw std::invalid_argument("position components must be nonnegative");
    }
    return t + power * uint64_t(pos[d]);
}

RateEstimate estimate_time(double v_comp, double n_rsg, double t_rsg_s) {
    if (!(n_rsg >= 1.0)) {
        throw std::invalid_argument("generator count must be at least 1");
    }
    if (!(t_rsg_s > 0.0)) {
        throw std::invalid_argument("cycle time must be positive");
    }
    return {v_comp, n_rsg, t_rsg_s, v_comp / n_rsg * t_rsg_s};
}

FusionGraph compatible_graph(const Scheme& scheme, Vec3i dims) {
    if (scheme.kind == Scheme::Kind::single_module_toric) {
        if (dims.x != int32_t(scheme.param) || dims.y != int32_t(scheme.param)) {
            throw std::invalid_argument("toric scheme requires M x M slices");
        }
        return FusionGraph::build_shifted_toric(dims.x, dims.z);
    }
    const Boundary boundary{
        scheme.periodic_x ? AxisBoundary::periodic : AxisBoundary::open,
        scheme.periodic_y ? AxisBoundary::periodic : AxisBoundary::open,
        AxisBoundary::open,
    };
    return FusionGraph::build_cubic(dims, boundary);
}

}  // namespace ilv
