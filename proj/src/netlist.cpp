#include "ilv/netlist.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace ilv {

std::string to_string(GridDirection d) {
    switch (d) {
        case GridDirection::north: return "N";
        case GridDirection::east: return "E";
        case GridDirection::south: return "S";
        case GridDirection::west: return "W";
    }
    return "?";
}

std::string to_string(RouteSpec::Source s) {
    switch (s) {
        case RouteSpec::Source::self: return "self";
        case RouteSpec::Source::north: return "N";
        case RouteSpec::Source::east: return "E";
        case RouteSpec::Source::south: return "S";
        case RouteSpec::Source::west: return "W";
    }
    return "?";
}

namespace {

constexpr Port xm{Axis::x, Sign::minus};
constexpr Port xp{Axis::x, Sign::plus};
constexpr Port ym{Axis::y, Sign::minus};
constexpr Port yp{Axis::y, Sign::plus};
constexpr Port zm{Axis::z, Sign::minus};
constexpr Port zp{Axis::z, Sign::plus};

using Source = RouteSpec::Source;

Module trivial_module(uint32_t id, uint64_t z_delay) {
    Module m;
    m.id = id;
    m.delay_lengths = {z_delay};
    m.devices = {
        {"x", {Source::self, xp, 0}, {Source::east, xm, 0}},
        {"y", {Source::self, yp, 0}, {Source::south, ym, 0}},
        {"z", {Source::self, zp, z_delay}, {Source::self, zm, 0}},
    };
    m.switch_count = 0;
    return m;
}

Module rastered_module(uint32_t id, uint64_t l) {
    const uint64_t l2 = l * l;
    Module m;
    m.id = id;
    m.delay_lengths = {1, l, l2};
    m.devices = {
        {"x_local", {Source::self, xp, 1}, {Source::self, xm, 0}},
        {"x_net", {Source::self, xp, 1}, {Source::east, xm, l}},
        {"y_local", {Source::self, yp, l}, {Source::self, ym, 0}},
        {"y_net", {Source::self, yp, l}, {Source::south, ym, l2}},
        {"z", {Source::self, zp, l2}, {Source::self, zm, 0}},
    };
    m.switch_count = 4;
    return m;
}

// A/B/C/D modules share the same delays but attach the 1-delay (and L-delay)
// to whichever photon of a local fusion is produced first, which depends on
// the square's raster orientation. Network links carry no delay.
Module abcd_module(uint32_t id, char type, uint64_t l) {
    const uint64_t l2 = l * l;
    const bool flip_u = type == 'B' || type == 'D';
    const bool flip_v = type == 'C' || type == 'D';
    Module m;
    m.id = id;
    m.square_type = type;
    m.delay_lengths = {1, l, l2};
    m.devices = {
        {"x_local",
         {Source::self, xp, flip_u ? 0 : 1u},
         {Source::self, xm, flip_u ? 1 : 0u}},
        {"x_net", {Source::self, xp, 0}, {Source::east, xm, 0}},
        {"y_local",
         {Source::self, yp, flip_v ? 0 : l},
         {Source::self, ym, flip_v ? l : 0}},
        {"y_net", {Source::self, yp, 0}, {Source::south, ym, 0}},
        {"z", {Source::self, zp, l2}, {Source::self, zm, 0}},
    };
    m.switch_count = 4;
    return m;
}

Module toric_module(uint64_t msize) {
    Module m;
    m.id = 0;
    m.delay_lengths = {1, msize, msize * msize};
    m.devices = {
        {"x", {Source::self, xp, 1}, {Source::self, xm, 0}},
        {"y", {Source::self, yp, msize}, {Source::self, ym, 0}},
        {"z", {Source::self, zp, msize * msize}, {Source::self, zm, 0}},
    };
    m.switch_count = 0;
    return m;
}

struct Grid {
    uint32_t nx, ny;
    bool periodic_x, periodic_y;

    std::optional<uint32_t> neighbor(uint32_t module, GridDirection d) const {
        int64_t mx = module % nx;
        int64_t my = module / nx;
        switch (d) {
            case GridDirection::north: my -= 1; break;
            case GridDirection::south: my += 1; break;
            case GridDirection::east: mx += 1; break;
            case GridDirection::west: mx -= 1; break;
        }
        if (mx < 0 || mx >= nx) {
            if (!periodic_x) {
                return std::nullopt;
            }
            mx = (mx + nx) % nx;
        }
        if (my < 0 || my >= ny) {
            if (!periodic_y) {
                return std::nullopt;
            }
            my = (my + ny) % ny;
        }
        return uint32_t(mx) + nx * uint32_t(my);
    }

    std::optional<Source> relation(uint32_t module, uint32_t other) const {
        if (module == other) {
            return Source::self;
        }
        for (GridDirection d : {GridDirection::north, GridDirection::east,
                                GridDirection::south, GridDirection::west}) {
            if (neighbor(module, d) == other) {
                // Source names the side the photon comes from.
                return Source(uint8_t(d) + 1);
            }
        }
        return std::nullopt;
    }
};

Grid grid_of(const Scheme& scheme) {
    return {scheme.grid_x, scheme.grid_y, scheme.periodic_x, scheme.periodic_y};
}

}  // namespace

HardwareNetlist build_netlist(const Scheme& scheme) {
    if (scheme.kind == Scheme::Kind::hyper_rastered) {
        throw std::invalid_argument("hyper-rastered schemes have no concrete netlist");
    }
    if (scheme.grid_x == 0 || scheme.grid_y == 0) {
        throw std::invalid_argument("module grid must be resolved before building a netlist");
    }

    HardwareNetlist netlist;
    netlist.scheme = scheme;
    const Grid grid = grid_of(scheme);
    const uint32_t n = scheme.grid_x * scheme.grid_y;

    uint64_t west_link_delay = 0;
    uint64_t north_link_delay = 0;
    for (uint32_t id = 0; id < n; ++id) {
        switch (scheme.kind) {
            case Scheme::Kind::trivial:
                netlist.modules.push_back(trivial_module(id, 1));
                break;
            case Scheme::Kind::layered:
                netlist.modules.push_back(trivial_module(id, scheme.param));
                break;
            case Scheme::Kind::rastered:
                netlist.modules.push_back(rastered_module(id, scheme.param));
                west_link_delay = scheme.param;
                north_link_delay = uint64_t(scheme.param) * scheme.param;
                break;
            case Scheme::Kind::rastered_abcd: {
                const uint32_t sx = id % scheme.grid_x;
                const uint32_t sy = id / scheme.grid_x;
                const char type = "ABCD"[(sx % 2) + 2 * (sy % 2)];
                netlist.modules.push_back(abcd_module(id, type, scheme.param));
                break;
            }
            case Scheme::Kind::single_module_toric:
                netlist.modules.push_back(toric_module(scheme.param));
                break;
            case Scheme::Kind::hyper_rastered:
                break;  // rejected above
        }
    }

    // x- photons travel west, y- photons travel north.
    if (scheme.kind != Scheme::Kind::single_module_toric) {
        for (uint32_t id = 0; id < n; ++id) {
            if (const auto west = grid.neighbor(id, GridDirection::west)) {
                netlist.links.push_back({id, *west, GridDirection::west, west_link_delay});
            }
            if (const auto north = grid.neighbor(id, GridDirection::north)) {
                netlist.links.push_back({id, *north, GridDirection::north, north_link_delay});
            }
        }
    }
    return netlist;
}

ValidationReport validate(const HardwareNetlist& netlist, const Schedule& schedule,
                          const FusionGraph& graph) {
    ValidationReport report;
    const Grid grid = grid_of(netlist.scheme);

    // Static port coverage: every port of every module must reach a device
    // input, either locally or in the neighbor its photons are sent to.
    for (const Module& m : netlist.modules) {
        for (uint8_t p = 0; p < port_count; ++p) {
            const Port port = Port::from_index(p);
            bool covered = false;
            for (const Module& candidate : netlist.modules) {
                const auto rel = grid.relation(candidate.id, m.id);
                if (!rel.has_value()) {
                    continue;
                }
                for (const FusionDevice& dev : candidate.devices) {
                    if ((dev.in0.source == *rel && dev.in0.port == port) ||
                        (dev.in1.source == *rel && dev.in1.port == port)) {
                        covered = true;
                        break;
                    }
                }
                if (covered) {
                    break;
                }
            }
            if (!covered) {
                report.violations.push_back({Violation::Kind::unrouted_port, 0, m.id, 0, 0, 0,
                                             "port " + to_string(port) + " has no route"});
            }
        }
    }

    // (module, device, cycle) occupancy records.
    std::vector<std::pair<uint64_t, uint64_t>> occupancy;
    occupancy.reserve(graph.edges().size());

    for (uint32_t e = 0; e < graph.edges().size(); ++e) {
        const FusionEdge& edge = graph.edges()[e];
        ++report.edges_checked;
        const InterleavingCoordinate tail = schedule.coords.at(edge.tail);
        const InterleavingCoordinate head = schedule.coords.at(edge.head);
        const Port tail_port{edge.axis, Sign::plus};
        const Port head_port{edge.axis, Sign::minus};

        const Module* found_module = nullptr;
        const FusionDevice* found_device = nullptr;
        uint32_t found_device_index = 0;
        uint64_t arrival_tail = 0;
        uint64_t arrival_head = 0;

        const uint32_t candidates[2] = {tail.g, head.g};
        const int n_candidates = tail.g == head.g ? 1 : 2;
        for (int c = 0; c < n_candidates && found_device == nullptr; ++c) {
            const Module& m = netlist.modules.at(candidates[c]);
            const auto rel_tail = grid.relation(candidates[c], tail.g);
            const auto rel_head = grid.relation(candidates[c], head.g);
            if (!rel_tail.has_value() || !rel_head.has_value()) {
                continue;
            }
            for (uint32_t d = 0; d < m.devices.size(); ++d) {
                const FusionDevice& dev = m.devices[d];
                const bool direct = dev.in0.source == *rel_tail && dev.in0.port == tail_port &&
                                    dev.in1.source == *rel_head && dev.in1.port == head_port;
                const bool swapped = dev.in1.source == *rel_tail && dev.in1.port == tail_port &&
                                     dev.in0.source == *rel_head && dev.in0.port == head_port;
                if (direct || swapped) {
                    found_module = &m;
                    found_device = &dev;
                    found_device_index = d;
                    arrival_tail = tail.t + (direct ? dev.in0.delay : dev.in1.delay);
                    arrival_head = head.t + (direct ? dev.in1.delay : dev.in0.delay);
                    break;
                }
            }
        }

        if (found_device == nullptr) {
            report.violations.push_back({Violation::Kind::unrouted_fusion, e, 0, 0, 0, 0,
                                         "no fusion device accepts this edge"});
            continue;
        }
        if (arrival_tail != arrival_head) {
            report.violations.push_back(
                {Violation::Kind::arrival_mismatch, e, found_module->id, found_device_index,
                 arrival_tail, arrival_head,
                 "photons arrive at device " + found_device->name + " in different cycles"});
            continue;
        }
        occupancy.emplace_back(
            uint64_t(found_module->id) * netlist.modules[0].devices.size() + found_device_index,
            arrival_tail);
    }

    std::sort(occupancy.begin(), occupancy.end());
    for (size_t i = 1; i < occupancy.size(); ++i) {
        if (occupancy[i] == occupancy[i - 1]) {
            const uint32_t n_dev = uint32_t(netlist.modules[0].devices.size());
            report.violations.push_back({Violation::Kind::device_conflict, 0,
                                         uint32_t(occupancy[i].first / n_dev),
                                         uint32_t(occupancy[i].first % n_dev), occupancy[i].second,
                                         occupancy[i].second,
                                         "two fusions scheduled on one device in one cycle"});
        }
    }
    return report;
}

}  // namespace ilv
