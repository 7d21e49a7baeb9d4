#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ilv/fusion_graph.hpp"

namespace ilv {

// Interleaving scheme. param is k for layered, L for rastered variants and
// M for the single-module toric schedule. grid_x/grid_y describe the module
// grid; zero means "derive from the graph when assigning coordinates".
// periodic_x/periodic_y describe how the module grid is wired (the z axis is
// always open for scheduling: time cannot wrap).
struct Scheme {
    enum class Kind : uint8_t {
        trivial,
        layered,
        rastered,
        rastered_abcd,
        single_module_toric,
        hyper_rastered,
    };

    Kind kind = Kind::trivial;
    uint32_t param = 1;
    uint32_t hyper_dims = 2;
    uint32_t grid_x = 0;
    uint32_t grid_y = 0;
    bool periodic_x = true;
    bool periodic_y = true;

    static Scheme trivial();
    static Scheme layered(uint32_t k);
    static Scheme rastered(uint32_t l);
    static Scheme rastered_abcd(uint32_t l);
    static Scheme single_module_toric(uint32_t m);
    static Scheme hyper_rastered(uint32_t dims, uint32_t l);
};

std::string to_string(Scheme::Kind kind);

// (g, t): which RSG produces a resource state, and in which RSG cycle.
struct InterleavingCoordinate {
    uint32_t g = 0;
    uint64_t t = 0;
};

struct Schedule {
    Scheme scheme;  // grid fields resolved
    uint32_t rsg_count = 0;
    std::vector<InterleavingCoordinate> coords;  // indexed by vertex id
};

struct FusionClassification {
    uint64_t delta_t = 0;
    bool local = false;
    bool instantaneous() const { return delta_t == 0; }
};

// Assigns interleaving coordinates to every vertex of the graph.
//   trivial         g = ix + rx*iy,            t = iz
//   layered(k)      g = ix + rx*iy,            t = k*iz
//   rastered(L)     g = square index,          t = L^2*iz + b, with the time
//                   bin b rastering each L x L square left to right, top to
//                   bottom (top = y-, i.e. ascending iy)
//   rastered_abcd   as rastered, but B squares raster right to left, C
//                   squares bottom to top, D squares both, which makes every
//                   networked fusion instantaneous
//   toric(M)        g = 0, t = ix + M*iy + M^2*iz on the shifted torus
// Throws std::invalid_argument on divisibility or compatibility violations.
Schedule assign_coordinates(const FusionGraph& graph, const Scheme& scheme);

FusionClassification classify_fusion(const Schedule& schedule, const FusionEdge& edge);

// Maximum number of cycles a photon entering each port spends waiting for a
// local fusion partner, indexed by Port::index(). Networked routing delays
// are not part of this vector: it is the per-port delay profile the noise
// model consumes (e.g. {x-:0, y-:0, z-:0, x+:1, y+:L, z+:L^2} for rastered).
std::array<uint64_t, port_count> delay_requirements(const Schedule& schedule,
                                                    const FusionGraph& graph);

// Ratio of slice size to RSG count: L^2 for rastered variants, M^2 for the
// single-module torus, 1 for trivial and layered (layered produces k
// interleaved copies at unchanged slice size).
uint64_t interleaving_ratio(const Scheme& scheme);

// Delay lengths {L^0, L^1, ..., L^D} of a module producing a D+1-dimensional
// hypercubic fusion graph one D-dimensional slice at a time.
std::vector<uint64_t> hyper_delay_lengths(uint32_t dims, uint32_t l);

// Time coordinate of a D+1-dimensional hyper-rastered schedule: the last
// index advances one slice per L^D cycles and the leading D indices raster
// within the slice. For D = 2 this reduces to the rastered assignment.
uint64_t hyper_time_coordinate(std::span<const int64_t> pos, uint32_t l);

// t_comp = v_comp / n_rsg * t_rsg.
struct RateEstimate {
    double v_comp = 0.0;
    double n_rsg = 0.0;
    double t_rsg_s = 0.0;
    double t_comp_s = 0.0;
};

RateEstimate estimate_time(double v_comp, double n_rsg, double t_rsg_s);

// The fusion graph a scheme actually drives: x/y periodic as configured
// (helically shifted for the toric scheme) and z open.
FusionGraph compatible_graph(const Scheme& scheme, Vec3i dims);

}  // namespace ilv
