#include "ilv/kernels.hpp"

namespace ilv::kernels {

namespace {

void erasure_mask_scalar(Philox4x32::Key key, StreamCtx ctx, uint32_t n,
                         const uint64_t* thresholds, uint64_t* out) {
    const size_t n_words = mask_words(n);
    for (size_t w = 0; w < n_words; ++w) {
        const uint32_t base = uint32_t(w) * 64;
        const uint32_t lim = n - base < 64 ? n - base : 64;
        uint64_t bits = 0;
        for (uint32_t i = 0; i < lim; i += 4) {
            const auto r = stream_block(key, ctx, (base + i) / 4);
            const uint32_t lanes = lim - i < 4 ? lim - i : 4;
            for (uint32_t lane = 0; lane < lanes; ++lane) {
                if (uint64_t(r[lane]) < thresholds[base + i + lane]) {
                    bits |= uint64_t(1) << (i + lane);
                }
            }
        }
        out[w] = bits;
    }
}

void coin_mask_scalar(Philox4x32::Key key, StreamCtx ctx, uint32_t n,
                      const uint64_t* gate, uint64_t* out) {
    const size_t n_words = mask_words(n);
    for (size_t w = 0; w < n_words; ++w) {
        const uint32_t base = uint32_t(w) * 64;
        const uint32_t lim = n - base < 64 ? n - base : 64;
        uint64_t coins = 0;
        for (uint32_t i = 0; i < lim; i += 4) {
            const auto r = stream_block(key, ctx, (base + i) / 4);
            const uint32_t lanes = lim - i < 4 ? lim - i : 4;
            for (uint32_t lane = 0; lane < lanes; ++lane) {
                coins |= uint64_t(r[lane] >> 31) << (i + lane);
            }
        }
        out[w] = gate[w] & coins;
    }
}

uint64_t and_parity_scalar(const uint64_t* a, const uint64_t* b, size_t n_words) {
    uint64_t acc = 0;
    for (size_t w = 0; w < n_words; ++w) {
        acc ^= uint64_t(__builtin_popcountll(a[w] & b[w])) & 1;
    }
    return acc;
}

}  // namespace

const Backend& scalar() {
    static const Backend backend{"scalar", erasure_mask_scalar, coin_mask_scalar,
                                 and_parity_scalar};
    return backend;
}

}  // namespace ilv::kernels
