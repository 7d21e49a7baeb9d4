#include "ilv/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace ilv {

namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0) || !(p < 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1)");
    }
}

}  // namespace

double per_bin_loss(double attenuation_db_per_km, double fiber_m_per_bin) {
    if (attenuation_db_per_km < 0.0) {
        throw std::invalid_argument("attenuation must be nonnegative");
    }
    if (!(fiber_m_per_bin > 0.0)) {
        throw std::invalid_argument("fiber length per bin must be positive");
    }
    const double db_per_bin = attenuation_db_per_km * fiber_m_per_bin * 1e-3;
    return 1.0 - std::pow(10.0, -db_per_bin / 10.0);
}

double qubit_loss(const NoiseParams& params, uint64_t n_bins) {
    check_probability(params.p_baseline, "p_baseline");
    check_probability(params.p_clock, "p_clock");
    return 1.0 - (1.0 - params.p_baseline) * std::pow(1.0 - params.p_clock, double(n_bins));
}

double physical_fusion_erasure(const NoiseParams& params, uint64_t n_bins) {
    check_probability(params.p_baseline, "p_baseline");
    check_probability(params.p_clock, "p_clock");
    const double survive_delay = std::pow(1.0 - params.p_clock, double(n_bins));
    const double survive_baseline = std::pow(1.0 - params.p_baseline, 4.0);
    return 1.0 - (1.0 - FusionModel::p_fail / 2.0) * survive_delay * survive_baseline;
}

double encoded_fusion_erasure(double p0) {
    if (!(p0 >= 0.0) || !(p0 <= 1.0)) {
        throw std::invalid_argument("p0 must lie in [0, 1]");
    }
    const double q = 1.0 - p0;
    const double repetition = 1.0 - q * q;            // both copies of one outcome lost
    const double redundancy = 1.0 - p0 * p0;          // at least one copy of the pair survives
    return (repetition * repetition + 1.0 - redundancy * redundancy) / 2.0;
}

DirectionalErasure directional_erasure(const NoiseParams& params, uint32_t rastering_length) {
    if (rastering_length < 1) {
        throw std::invalid_argument("rastering length must be >= 1");
    }
    const uint64_t l = rastering_length;
    return {encoded_fusion_erasure(physical_fusion_erasure(params, 1)),
            encoded_fusion_erasure(physical_fusion_erasure(params, l)),
            encoded_fusion_erasure(physical_fusion_erasure(params, l * l))};
}

}  // namespace ilv
