#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ilv/philox.hpp"

namespace ilv {

// Regularized incomplete beta function I_x(a, b) via the standard continued
// fraction (Lentz evaluation with the symmetry reduction).
double regularized_incomplete_beta(double x, double a, double b);

struct RatePoint {
    double p = 0.0;       // swept parameter value
    uint64_t trials = 0;  // Monte Carlo trials at this point
    uint64_t failures = 0;
    double rate() const { return trials == 0 ? 0.0 : double(failures) / double(trials); }
};

// rate(p) = p_max * I_reg(clamp((p - p_lo) / w, 0, 1); a, b)
struct BetaCdfFit {
    double p_max = 0.0;
    double p_lo = 0.0;
    double w = 0.0;
    double a = 2.0;
    double b = 2.0;
    double residual = 0.0;  // sqrt(sum of squared residuals)
    uint64_t evaluations = 0;

    double evaluate(double p) const;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Least-squares fit of the rescaled/shifted beta CDF by Nelder-Mead simplex
// descent from a deterministic initial guess (p_lo = first grid point,
// w = grid span, a = b = 2, p_max = max observed rate). Throws FitError when
// the data shows no transition or the optimizer fails to converge.
BetaCdfFit fit_curve(const std::vector<RatePoint>& points);

struct CurveCrossing {
    uint32_t index_a = 0;  // positions in the fitted-curve list
    uint32_t index_b = 0;
    double p = 0.0;
};

struct ThresholdEstimate {
    std::vector<BetaCdfFit> fits;
    std::vector<CurveCrossing> crossings;
    std::vector<std::pair<uint32_t, uint32_t>> missing_pairs;
    double threshold = 0.0;
    double bootstrap_se = 0.0;
    uint32_t bootstrap_resamples = 0;
};

struct ThresholdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pairwise crossings of fitted curves located by bisection of their
// difference inside [hull_lo, hull_hi]; the threshold is the mean of the
// crossings found. Pairs without a crossing are reported in missing_pairs;
// when no pair crosses, ThresholdError is thrown.
ThresholdEstimate find_threshold(const std::vector<BetaCdfFit>& fits, double hull_lo,
                                 double hull_hi);

// Parametric bootstrap of the threshold: per resample, each point's failure
// count is redrawn from Binomial(trials, observed rate), all curves are
// refitted and re-crossed. Returns the estimate for the observed data with
// bootstrap_se filled in. curves[i] holds the sweep points of one distance.
ThresholdEstimate bootstrap_threshold(const std::vector<std::vector<RatePoint>>& curves,
                                      uint32_t resamples, uint64_t seed);

// Fallback "interpolation mode": pairwise crossings of linearly interpolated
// raw rates, no fitting. Used for robustness checks of the fitted threshold.
double interpolated_threshold(const std::vector<std::vector<RatePoint>>& curves);

}  // namespace ilv
