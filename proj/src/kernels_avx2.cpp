// AVX2 variants of the sampling kernels. Must stay bit-identical to the
// scalar reference implementations in kernels_scalar.cpp; the equivalence
// tests compare both backends on the same inputs.

#include <immintrin.h>

#include "ilv/kernels.hpp"

namespace ilv::kernels {

namespace {

// Four Philox4x32-10 blocks (base .. base+3) evaluated in parallel, one block
// per 64-bit lane. Results land in natural order: out[4*l + j] is word j of
// block base+l.
inline void philox4_blocks(Philox4x32::Key key, StreamCtx ctx, uint32_t base,
                           uint32_t out[16]) {
    const __m256i mask32 = _mm256_set1_epi64x(0xffffffffll);
    const __m256i m0 = _mm256_set1_epi64x(Philox4x32::mult0);
    const __m256i m1 = _mm256_set1_epi64x(Philox4x32::mult1);
    const __m256i w0 = _mm256_set1_epi64x(Philox4x32::weyl0);
    const __m256i w1 = _mm256_set1_epi64x(Philox4x32::weyl1);

    __m256i x0 = _mm256_set1_epi64x(ctx.a);
    __m256i x1 = _mm256_set1_epi64x(ctx.b);
    __m256i x2 = _mm256_set1_epi64x(ctx.purpose);
    __m256i x3 = _mm256_setr_epi64x(base, uint64_t(base) + 1, uint64_t(base) + 2,
                                    uint64_t(base) + 3);
    x3 = _mm256_and_si256(x3, mask32);
    __m256i k0 = _mm256_set1_epi64x(key[0]);
    __m256i k1 = _mm256_set1_epi64x(key[1]);

    for (int round = 0; round < 10; ++round) {
        const __m256i p0 = _mm256_mul_epu32(m0, x0);
        const __m256i p1 = _mm256_mul_epu32(m1, x2);
        const __m256i hi0 = _mm256_srli_epi64(p0, 32);
        const __m256i hi1 = _mm256_srli_epi64(p1, 32);
        const __m256i lo0 = _mm256_and_si256(p0, mask32);
        const __m256i lo1 = _mm256_and_si256(p1, mask32);
        x0 = _mm256_xor_si256(hi1, _mm256_xor_si256(x1, k0));
        x1 = lo1;
        x2 = _mm256_xor_si256(hi0, _mm256_xor_si256(x3, k1));
        x3 = lo0;
        k0 = _mm256_and_si256(_mm256_add_epi64(k0, w0), mask32);
        k1 = _mm256_and_si256(_mm256_add_epi64(k1, w1), mask32);
    }

    alignas(32) uint64_t lanes[4][4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes[0]), x0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes[1]), x1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes[2]), x2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes[3]), x3);
    for (int l = 0; l < 4; ++l) {
        for (int j = 0; j < 4; ++j) {
            out[4 * l + j] = uint32_t(lanes[j][l]);
        }
    }
}

void erasure_mask_avx2(Philox4x32::Key key, StreamCtx ctx, uint32_t n,
                       const uint64_t* thresholds, uint64_t* out) {
    const size_t n_words = mask_words(n);
    alignas(32) uint32_t tmp[16];
    for (size_t w = 0; w < n_words; ++w) {
        const uint32_t base = uint32_t(w) * 64;
        const uint32_t lim = n - base < 64 ? n - base : 64;
        uint64_t bits = 0;
        uint32_t i = 0;
        for (; i + 16 <= lim; i += 16) {
            philox4_blocks(key, ctx, (base + i) / 4, tmp);
            for (uint32_t g = 0; g < 16; g += 4) {
                const __m256i vals = _mm256_cvtepu32_epi64(
                    _mm_loadu_si128(reinterpret_cast<const __m128i*>(tmp + g)));
                const __m256i thr = _mm256_loadu_si256(
                    reinterpret_cast<const __m256i*>(thresholds + base + i + g));
                const __m256i lt = _mm256_cmpgt_epi64(thr, vals);
                const uint64_t m =
                    uint64_t(_mm256_movemask_pd(_mm256_castsi256_pd(lt)));
                bits |= m << (i + g);
            }
        }
        for (; i < lim; i += 4) {
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

void coin_mask_avx2(Philox4x32::Key key, StreamCtx ctx, uint32_t n,
                    const uint64_t* gate, uint64_t* out) {
    const size_t n_words = mask_words(n);
    alignas(32) uint32_t tmp[16];
    for (size_t w = 0; w < n_words; ++w) {
        const uint32_t base = uint32_t(w) * 64;
        const uint32_t lim = n - base < 64 ? n - base : 64;
        uint64_t coins = 0;
        uint32_t i = 0;
        for (; i + 16 <= lim; i += 16) {
            philox4_blocks(key, ctx, (base + i) / 4, tmp);
            const __m256 f0 = _mm256_castsi256_ps(
                _mm256_loadu_si256(reinterpret_cast<const __m256i*>(tmp)));
            const __m256 f1 = _mm256_castsi256_ps(
                _mm256_loadu_si256(reinterpret_cast<const __m256i*>(tmp + 8)));
            const uint64_t m = uint64_t(uint32_t(_mm256_movemask_ps(f0))) |
                               (uint64_t(uint32_t(_mm256_movemask_ps(f1))) << 8);
            coins |= m << i;
        }
        for (; i < lim; i += 4) {
            const auto r = stream_block(key, ctx, (base + i) / 4);
            const uint32_t lanes = lim - i < 4 ? lim - i : 4;
            for (uint32_t lane = 0; lane < lanes; ++lane) {
                coins |= uint64_t(r[lane] >> 31) << (i + lane);
            }
        }
        out[w] = gate[w] & coins;
    }
}

uint64_t and_parity_avx2(const uint64_t* a, const uint64_t* b, size_t n_words) {
    const __m256i nibble_lut = _mm256_setr_epi8(
        0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
        0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_nibble = _mm256_set1_epi8(0x0f);
    __m256i acc = _mm256_setzero_si256();
    size_t w = 0;
    for (; w + 4 <= n_words; w += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
        const __m256i v = _mm256_and_si256(va, vb);
        const __m256i lo = _mm256_and_si256(v, low_nibble);
        const __m256i hi = _mm256_and_si256(_mm256_srli_epi64(v, 4), low_nibble);
        const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(nibble_lut, lo),
                                            _mm256_shuffle_epi8(nibble_lut, hi));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
    }
    alignas(32) uint64_t parts[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(parts), acc);
    uint64_t total = parts[0] + parts[1] + parts[2] + parts[3];
    for (; w < n_words; ++w) {
        total += uint64_t(__builtin_popcountll(a[w] & b[w]));
    }
    return total & 1;
}

}  // namespace

const Backend& avx2() {
    static const Backend backend{"avx2", erasure_mask_avx2, coin_mask_avx2,
                                 and_parity_avx2};
    return backend;
}

}  // namespace ilv::kernels
