#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ilv/fusion_graph.hpp"
#include "ilv/scheduler.hpp"

namespace ilv {

// Module grid compass: east = +x, south = +y (slices are drawn with y
// growing downward, matching the raster order).
enum class GridDirection : uint8_t { north = 0, east = 1, south = 2, west = 3 };

std::string to_string(GridDirection d);

// One input of a fusion device: which module the photon comes from (self or
// a grid neighbor), which resource-state port it is, and the total delay it
// accumulates between generation and measurement.
struct RouteSpec {
    enum class Source : uint8_t { self = 0, north = 1, east = 2, south = 3, west = 4 };
    Source source = Source::self;
    Port port{Axis::x, Sign::plus};
    uint64_t delay = 0;
};

std::string to_string(RouteSpec::Source s);

struct FusionDevice {
    std::string name;
    RouteSpec in0, in1;
};

struct Module {
    uint32_t id = 0;
    char square_type = 'A';  // A-D for the alternating raster variant
    std::vector<uint64_t> delay_lengths;
    std::vector<FusionDevice> devices;
    uint32_t switch_count = 0;
};

// Directed inter-module photon link. `direction` is where the photon goes,
// seen from the sending module.
struct ModuleLink {
    uint32_t from = 0;
    uint32_t to = 0;
    GridDirection direction = GridDirection::west;
    uint64_t delay = 0;
};

struct HardwareNetlist {
    Scheme scheme;  // grid fields must be resolved
    std::vector<Module> modules;
    std::vector<ModuleLink> links;
};

// Builds the module network realizing a grid scheme: trivial modules with
// one 1-delay and three fusion devices; layered modules with a k-delay;
// rastered modules with delays {1, L, L^2}, five fusion devices and four
// switches, L-delay links west and L^2-delay links north; the alternating
// A/B/C/D variant with zero-delay network links; or a single switchless
// module with delays {1, M, M^2} for the toric schedule.
// Throws std::invalid_argument for hyper-rastered schemes or unresolved
// grids.
HardwareNetlist build_netlist(const Scheme& scheme);

struct Violation {
    enum class Kind : uint8_t { arrival_mismatch, unrouted_fusion, device_conflict, unrouted_port };
    Kind kind;
    uint32_t edge = 0;       // arrival_mismatch / unrouted_fusion
    uint32_t module = 0;     // device_conflict / unrouted_port
    uint32_t device = 0;     // device_conflict
    uint64_t arrival0 = 0;
    uint64_t arrival1 = 0;
    std::string detail;
};

struct ValidationReport {
    uint64_t edges_checked = 0;
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks the netlist against a schedule: every fusion edge must route to
// exactly one fusion device with both photons arriving in the same cycle,
// no device may see two fusions in one cycle, and every port of every
// module must have at least one routing destination. Violations become
// report entries, never exceptions.
ValidationReport validate(const HardwareNetlist& netlist, const Schedule& schedule,
                          const FusionGraph& graph);

}  // namespace ilv
