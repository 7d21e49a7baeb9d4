#include "ilv/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ilv {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string boundary_string(const Boundary& b) {
    std::string s;
    for (int a = 0; a < 3; ++a) {
        s += b[a] == AxisBoundary::periodic ? 'p' : 'o';
    }
    return s;
}

ordered_json scheme_to_json(const Scheme& scheme) {
    ordered_json j;
    j["kind"] = to_string(scheme.kind);
    j["param"] = scheme.param;
    if (scheme.kind == Scheme::Kind::hyper_rastered) {
        j["hyper_dims"] = scheme.hyper_dims;
    }
    j["grid"] = {scheme.grid_x, scheme.grid_y};
    j["periodic"] = {scheme.periodic_x, scheme.periodic_y};
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string graph_json(const FusionGraph& graph) {
    ordered_json j;
    j["dims"] = {graph.dims().x, graph.dims().y, graph.dims().z};
    j["boundary"] = boundary_string(graph.boundary());
    j["shifted_wrap"] = graph.shifted_wrap();
    j["vertices"] = graph.vertex_count();
    auto& edges = j["edges"] = ordered_json::array();
    for (const FusionEdge& e : graph.edges()) {
        edges.push_back({e.tail, e.head, to_string(e.axis)});
    }
    auto& half_edges = j["half_edges"] = ordered_json::array();
    for (const HalfEdge& h : graph.half_edges()) {
        half_edges.push_back({h.vertex, to_string(h.port)});
    }
    return j.dump(2) + "\n";
}

std::string schedule_json(const Schedule& schedule, const FusionGraph& graph) {
    ordered_json j;
    j["scheme"] = scheme_to_json(schedule.scheme);
    j["rsg_count"] = schedule.rsg_count;
    j["interleaving_ratio"] = interleaving_ratio(schedule.scheme);
    auto& coords = j["coordinates"] = ordered_json::array();
    for (const InterleavingCoordinate& c : schedule.coords) {
        coords.push_back({c.g, c.t});
    }
    auto& classes = j["classifications"] = ordered_json::array();
    for (const FusionEdge& e : graph.edges()) {
        const FusionClassification c = classify_fusion(schedule, e);
        classes.push_back({{"axis", to_string(e.axis)},
                           {"delta_t", c.delta_t},
                           {"locality", c.local ? "local" : "networked"},
                           {"timing", c.instantaneous() ? "instantaneous" : "delayed"}});
    }
    const auto bins = delay_requirements(schedule, graph);
    ordered_json delays;
    for (uint8_t p = 0; p < port_count; ++p) {
        delays[to_string(Port::from_index(p))] = bins[p];
    }
    j["delay_requirements"] = delays;
    return j.dump(2) + "\n";
}

std::string netlist_json(const HardwareNetlist& netlist) {
    ordered_json j;
    j["scheme"] = scheme_to_json(netlist.scheme);
    auto route = [](const RouteSpec& r) {
        return ordered_json{{"source", to_string(r.source)},
                            {"port", to_string(r.port)},
                            {"delay", r.delay}};
    };
    auto& modules = j["modules"] = ordered_json::array();
    for (const Module& m : netlist.modules) {
        ordered_json jm;
        jm["id"] = m.id;
        jm["type"] = std::string(1, m.square_type);
        jm["delays"] = m.delay_lengths;
        jm["switches"] = m.switch_count;
        auto& devices = jm["fusion_devices"] = ordered_json::array();
        for (const FusionDevice& d : m.devices) {
            devices.push_back(
                {{"name", d.name}, {"in0", route(d.in0)}, {"in1", route(d.in1)}});
        }
        modules.push_back(std::move(jm));
    }
    auto& links = j["links"] = ordered_json::array();
    for (const ModuleLink& l : netlist.links) {
        links.push_back({{"from", l.from},
                         {"to", l.to},
                         {"direction", to_string(l.direction)},
                         {"delay", l.delay}});
    }
    return j.dump(2) + "\n";
}

std::string validation_json(const ValidationReport& report) {
    ordered_json j;
    j["edges_checked"] = report.edges_checked;
    j["ok"] = report.ok();
    auto& violations = j["violations"] = ordered_json::array();
    for (const Violation& v : report.violations) {
        ordered_json jv;
        switch (v.kind) {
            case Violation::Kind::arrival_mismatch: jv["kind"] = "arrival_mismatch"; break;
            case Violation::Kind::unrouted_fusion: jv["kind"] = "unrouted_fusion"; break;
            case Violation::Kind::device_conflict: jv["kind"] = "device_conflict"; break;
            case Violation::Kind::unrouted_port: jv["kind"] = "unrouted_port"; break;
        }
        jv["edge"] = v.edge;
        jv["module"] = v.module;
        jv["device"] = v.device;
        jv["arrivals"] = {v.arrival0, v.arrival1};
        jv["detail"] = v.detail;
        violations.push_back(std::move(jv));
    }
    return j.dump(2) + "\n";
}

std::string syndrome_json(const SyndromeGraph& graph) {
    ordered_json j;
    j["d"] = graph.block_size();
    j["parity"] = graph.parity() == ParityClass::primal ? "primal" : "dual";
    j["vertices"] = graph.vertex_count();
    auto& cells = j["cells"] = ordered_json::array();
    for (uint32_t v = 0; v < graph.vertex_count(); ++v) {
        const Vec3i c = graph.cell_of(v);
        cells.push_back({c.x, c.y, c.z});
    }
    auto& edges = j["edges"] = ordered_json::array();
    for (uint32_t e = 0; e < graph.edge_count(); ++e) {
        edges.push_back({graph.edge_u(e), graph.edge_v(e), to_string(graph.edge_axis(e))});
    }
    auto& membranes = j["membranes"] = ordered_json::array();
    for (int m = 0; m < 3; ++m) {
        ordered_json ids = ordered_json::array();
        const auto& bits = graph.membrane(m);
        for (uint32_t e = 0; e < graph.edge_count(); ++e) {
            if ((bits[e / 64] >> (e % 64)) & 1) {
                ids.push_back(e);
            }
        }
        membranes.push_back(std::move(ids));
    }
    return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<PointResult>& points) {
    std::string out = "L,d,p_baseline,n_trials,n_failures,rate,ci_lo,ci_hi\n";
    char buf[256];
    for (const PointResult& p : points) {
        std::snprintf(buf, sizeof(buf), "%u,%u,%s,%" PRIu64 ",%" PRIu64 ",%s,%s,%s\n",
                      p.rastering_length, p.distance, format_double(p.p_baseline).c_str(),
                      p.n_trials, p.n_failures, format_double(p.rate).c_str(),
                      format_double(p.ci_lo).c_str(), format_double(p.ci_hi).c_str());
        out += buf;
    }
    return out;
}

std::vector<PointResult> parse_sweep_csv(std::string_view text) {
    std::vector<PointResult> points;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (header) {
            header = false;
            if (line.rfind("L,d,", 0) == 0) {
                continue;
            }
        }
        PointResult p;
        if (std::sscanf(line.c_str(), "%u,%u,%lf,%" SCNu64 ",%" SCNu64 ",%lf,%lf,%lf",
                        &p.rastering_length, &p.distance, &p.p_baseline, &p.n_trials,
                        &p.n_failures, &p.rate, &p.ci_lo, &p.ci_hi) != 8) {
            throw std::invalid_argument("malformed sweep CSV line: " + line);
        }
        points.push_back(p);
    }
    return points;
}

std::string threshold_json(const SweepResult& result) {
    ordered_json j;
    j["L"] = result.spec.rastering_length;
    j["p_clock"] = result.spec.p_clock;
    j["seed"] = result.spec.seed;
    j["trials_per_point"] = result.spec.trials_per_point;
    j["distances"] = result.spec.distances;
    j["threshold_ok"] = result.threshold_ok;
    auto& fits = j["fits"] = ordered_json::array();
    if (result.threshold_ok) {
        for (size_t i = 0; i < result.threshold.fits.size(); ++i) {
            const BetaCdfFit& f = result.threshold.fits[i];
            fits.push_back({{"d", result.spec.distances[i]},
                            {"p_max", f.p_max},
                            {"p_lo", f.p_lo},
                            {"w", f.w},
                            {"a", f.a},
                            {"b", f.b},
                            {"residual", f.residual}});
        }
        auto& crossings = j["crossings"] = ordered_json::array();
        for (const CurveCrossing& c : result.threshold.crossings) {
            crossings.push_back({{"d_a", result.spec.distances[c.index_a]},
                                 {"d_b", result.spec.distances[c.index_b]},
                                 {"p", c.p}});
        }
        auto& missing = j["missing_pairs"] = ordered_json::array();
        for (const auto& [a, b] : result.threshold.missing_pairs) {
            missing.push_back({result.spec.distances[a], result.spec.distances[b]});
        }
        j["threshold"] = result.threshold.threshold;
        j["bootstrap_se"] = result.threshold.bootstrap_se;
        j["bootstrap_resamples"] = result.threshold.bootstrap_resamples;
    }
    j["errors"] = result.errors;
    return j.dump(2) + "\n";
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) {
            throw std::runtime_error("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ilv
