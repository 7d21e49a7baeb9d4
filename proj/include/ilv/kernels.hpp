#pragma once

#include <cstddef>
#include <cstdint>

#include "ilv/philox.hpp"

namespace ilv::kernels {

// Data-parallel inner loops of the Monte Carlo sampler. Every operation has a
// scalar reference implementation and may have SIMD variants; all variants
// must produce bit-identical output (enforced by the equivalence tests), so
// backend selection never affects simulation results.
//
//   erasure_mask  bit i of out := stream word i < thresholds[i].
//                 Thresholds are 33-bit values in [0, 2^32]; 2^32 means
//                 "always", 0 means "never".
//   coin_mask     bit i of out := gate bit i AND high bit of stream word i
//                 (a fair coin restricted to gated positions).
//   and_parity    parity of popcount(a & b) over n_words words.
//
// Tail bits of the last output word (beyond bit count n) are always zero.
struct Backend {
    const char* name;
    void (*erasure_mask)(Philox4x32::Key key, StreamCtx ctx, uint32_t n,
                         const uint64_t* thresholds, uint64_t* out);
    void (*coin_mask)(Philox4x32::Key key, StreamCtx ctx, uint32_t n,
                      const uint64_t* gate, uint64_t* out);
    uint64_t (*and_parity)(const uint64_t* a, const uint64_t* b, size_t n_words);
};

const Backend& scalar();
bool avx2_available();
const Backend& avx2();  // valid only when avx2_available()

// Runtime selection: AVX2 when the CPU supports it, scalar otherwise.
// The ILV_KERNELS environment variable ("scalar" or "avx2") overrides.
const Backend& active();

// Converts an erasure probability to a threshold for erasure_mask.
// P(word < threshold) = threshold / 2^32, exact at both endpoints.
uint64_t probability_threshold(double p);

inline size_t mask_words(uint32_t n_bits) {
    return (size_t(n_bits) + 63) / 64;
}

}  // namespace ilv::kernels
