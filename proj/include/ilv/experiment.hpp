#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ilv/fitting.hpp"
#include "ilv/noise.hpp"

namespace ilv {

// One logical-error-rate sweep: fixed rastering length, several block sizes,
// a grid of baseline-loss values. Results are a pure function of the spec
// (including the seed), independent of worker count.
struct SweepSpec {
    uint32_t rastering_length = 1;
    std::vector<uint32_t> distances = {8, 12, 16};
    std::vector<double> p_baseline_grid;
    uint32_t trials_per_point = 5000;
    double p_clock = 0.0;
    uint64_t seed = 1;
    uint32_t workers = 0;  // 0 = all hardware threads
    bool correlated_erasures = false;
    uint32_t bootstrap_resamples = 200;
};

struct PointResult {
    uint32_t rastering_length = 0;
    uint32_t distance = 0;
    double p_baseline = 0.0;
    uint64_t n_trials = 0;
    uint64_t n_failures = 0;
    double rate = 0.0;
    double ci_lo = 0.0;  // Wilson 95% score interval
    double ci_hi = 0.0;
};

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

WilsonInterval wilson_interval(uint64_t failures, uint64_t trials);

// Monte Carlo estimate of the logical error rate at one parameter point.
// Derives the per-direction erasure probabilities from the noise model,
// builds the syndrome graphs once and runs n_trials independent trials.
PointResult estimate_rate(uint32_t rastering_length, uint32_t distance, double p_baseline,
                          double p_clock, uint32_t n_trials, uint64_t seed,
                          uint32_t workers = 0, uint32_t point_id = 0,
                          bool correlated_erasures = false);

// Test hook taking explicit erasure probabilities (the physical model cannot
// reach zero erasure: a lossless boosted fusion still fails 1/4 of the time).
PointResult estimate_rate_with_probs(const DirectionalErasure& probs, uint32_t distance,
                                     uint32_t n_trials, uint64_t seed, uint32_t workers = 0,
                                     uint32_t point_id = 0, bool correlated_erasures = false,
                                     uint32_t rastering_length = 0);

struct SweepResult {
    SweepSpec spec;
    std::vector<PointResult> points;  // ordered by (distance list position, grid position)
    ThresholdEstimate threshold;      // valid when threshold_ok
    bool threshold_ok = false;
    std::vector<std::string> errors;  // fit/threshold failures; the sweep continues past them
};

// Runs every point of the sweep (parallel across points and trials), fits
// one curve per distance and extracts the threshold with a bootstrap
// standard error.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace ilv
