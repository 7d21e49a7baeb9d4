#pragma once

#include <cstdint>

namespace ilv {

// Photon-loss model parameters. p_baseline is the per-photon loss from
// creation, routing and measurement; p_clock is the extra loss per time bin
// spent in a fiber delay.
struct NoiseParams {
    double p_baseline = 0.0;
    double p_clock = 0.0;
    double t_bin_ns = 1.0;
};

// Boosted type-II fusion constants: an ancillary Bell pair lowers the failure
// probability to 1/4, and on failure the XX or ZZ outcome is recovered with
// equal probability, so a lossless fusion erases each outcome with
// probability p_fail / 2 = 1/8.
struct FusionModel {
    static constexpr double p_fail = 0.25;
    static constexpr int boost_photons = 2;
};

// Encoded-fusion measurement erasure probabilities by fusion direction.
struct DirectionalErasure {
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;

    double operator[](int axis) const { return axis == 0 ? p_x : (axis == 1 ? p_y : p_z); }
};

// Loss per time bin for fiber of the given attenuation, using the exact
// base-10 dB-to-transmission conversion (no small-loss linearization).
double per_bin_loss(double attenuation_db_per_km, double fiber_m_per_bin);

// p = 1 - (1 - p_baseline) (1 - p_clock)^N : total loss of a photon that
// spends N bins in fiber.
double qubit_loss(const NoiseParams& params, uint64_t n_bins);

// Physical fusion measurement erasure probability for a boosted fusion whose
// delayed photon spends N bins in fiber:
//   p0 = 1 - (7/8) (1 - p_clock)^N (1 - p_baseline)^4.
// The factor (1-p_baseline)^4 covers the prompt input photon and both
// boosting photons plus the delayed photon's baseline share; 7/8 is the
// lossless erasure survival 1 - p_fail/2.
double physical_fusion_erasure(const NoiseParams& params, uint64_t n_bins);

// Erasure probability of one encoded fusion outcome under the (2,2)-Shor
// encoding with the code variant randomized per site:
//   p_enc = ([1-(1-p0)^2]^2 + 1 - (1-p0^2)^2) / 2.
double encoded_fusion_erasure(double p0);

// Per-direction encoded erasure probabilities for rastering length L:
// delays of 1, L and L^2 bins for x, y and z fusions respectively.
DirectionalErasure directional_erasure(const NoiseParams& params, uint32_t rastering_length);

}  // namespace ilv
