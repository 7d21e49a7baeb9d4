#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ilv/experiment.hpp"
#include "ilv/fusion_graph.hpp"
#include "ilv/netlist.hpp"
#include "ilv/scheduler.hpp"
#include "ilv/syndrome.hpp"

namespace ilv {

// Structured-text (JSON) documents for the CLI and for cross-validation
// against external tools. All exports list entities in canonical id order.
std::string graph_json(const FusionGraph& graph);
std::string schedule_json(const Schedule& schedule, const FusionGraph& graph);
std::string netlist_json(const HardwareNetlist& netlist);
std::string validation_json(const ValidationReport& report);
std::string syndrome_json(const SyndromeGraph& graph);

// CSV table with header L,d,p_baseline,n_trials,n_failures,rate,ci_lo,ci_hi.
std::string sweep_csv(const std::vector<PointResult>& points);
std::vector<PointResult> parse_sweep_csv(std::string_view text);

// Threshold summary with fit parameters, crossings, threshold and bootstrap
// error. Distances give the curve order used by the fit indices.
std::string threshold_json(const SweepResult& result);

// Writes via a temp file + rename so interrupted runs never leave truncated
// artifacts.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace ilv
