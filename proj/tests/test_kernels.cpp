#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ilv/kernels.hpp"

using namespace ilv;

namespace {

std::vector<uint64_t> random_thresholds(uint32_t n, uint64_t seed) {
    // deterministic mix of never / sometimes / always thresholds
    std::vector<uint64_t> thr(n);
    const auto key = key_from_seed(seed);
    for (uint32_t i = 0; i < n; ++i) {
        const uint32_t u = stream_u32(key, {1, 2, 3}, i);
        switch (u % 5) {
            case 0: thr[i] = 0; break;
            case 1: thr[i] = uint64_t(1) << 32; break;
            default: thr[i] = u; break;
        }
    }
    return thr;
}

}  // namespace

TEST_CASE("probability thresholds") {
    CHECK(kernels::probability_threshold(0.0) == 0);
    CHECK(kernels::probability_threshold(1.0) == (uint64_t(1) << 32));
    CHECK(kernels::probability_threshold(0.5) == (uint64_t(1) << 31));
    CHECK_THROWS_AS(kernels::probability_threshold(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(kernels::probability_threshold(1.1), std::invalid_argument);
}

TEST_CASE("scalar erasure mask endpoints and tail bits") {
    const auto& backend = kernels::scalar();
    const uint32_t n = 70;  // deliberately not a multiple of 64
    std::vector<uint64_t> out(kernels::mask_words(n), ~uint64_t(0));

    std::vector<uint64_t> thr(n, uint64_t(1) << 32);  // p = 1
    backend.erasure_mask(key_from_seed(1), {0, 0, 0}, n, thr.data(), out.data());
    CHECK(out[0] == ~uint64_t(0));
    CHECK(out[1] == (uint64_t(1) << 6) - 1);  // bits 64..69 set, tail clear

    thr.assign(n, 0);  // p = 0
    backend.erasure_mask(key_from_seed(1), {0, 0, 0}, n, thr.data(), out.data());
    CHECK(out[0] == 0);
    CHECK(out[1] == 0);
}

TEST_CASE("erasure mask matches binomial statistics") {
    const auto& backend = kernels::active();
    const uint32_t n = 200000;
    const double p = 0.23;
    std::vector<uint64_t> thr(n, kernels::probability_threshold(p));
    std::vector<uint64_t> out(kernels::mask_words(n));
    backend.erasure_mask(key_from_seed(99), {5, 6, 7}, n, thr.data(), out.data());
    uint64_t count = 0;
    for (const uint64_t w : out) {
        count += uint64_t(__builtin_popcountll(w));
    }
    const double sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::fabs(double(count) - n * p) < 4 * sigma);
}

TEST_CASE("coin mask flips only gated bits") {
    const auto& backend = kernels::active();
    const uint32_t n = 4096;
    std::vector<uint64_t> gate(kernels::mask_words(n));
    for (size_t w = 0; w < gate.size(); ++w) {
        gate[w] = 0xaaaaaaaaaaaaaaaaull;
    }
    std::vector<uint64_t> out(gate.size());
    backend.coin_mask(key_from_seed(3), {1, 1, 1}, n, gate.data(), out.data());
    for (size_t w = 0; w < gate.size(); ++w) {
        CHECK((out[w] & ~gate[w]) == 0);
    }
    // roughly half of the gated bits flip
    uint64_t flips = 0;
    for (const uint64_t w : out) {
        flips += uint64_t(__builtin_popcountll(w));
    }
    const double gated = n / 2.0;
    CHECK(std::fabs(double(flips) - gated / 2) < 4 * std::sqrt(gated * 0.25));
}

TEST_CASE("and_parity reference") {
    const auto& backend = kernels::scalar();
    std::vector<uint64_t> a{0b1011, 0b1, 0xffffffffffffffffull};
    std::vector<uint64_t> b{0b0011, 0b1, 0x1ull};
    // popcount(a&b) = 2 + 1 + 1 = 4 -> parity 0
    CHECK(backend.and_parity(a.data(), b.data(), 3) == 0);
    b[0] = 0b1111;  // now 3 + 1 + 1 = 5 -> parity 1
    CHECK(backend.and_parity(a.data(), b.data(), 3) == 1);
}

TEST_CASE("avx2 backend is bit-identical to scalar") {
    if (!kernels::avx2_available()) {
        MESSAGE("AVX2 unavailable, equivalence not exercised on this host");
        return;
    }
    const auto& ref = kernels::scalar();
    const auto& simd = kernels::avx2();
    const auto key = key_from_seed(0xfeedface12345678ull);

    for (const uint32_t n : {1u, 3u, 15u, 16u, 63u, 64u, 65u, 127u, 1000u, 4113u}) {
        const StreamCtx ctx{n, 42, 7};
        const auto thr = random_thresholds(n, n + 1);
        std::vector<uint64_t> out_ref(kernels::mask_words(n), ~uint64_t(0));
        std::vector<uint64_t> out_simd(kernels::mask_words(n), 0x5555555555555555ull);
        ref.erasure_mask(key, ctx, n, thr.data(), out_ref.data());
        simd.erasure_mask(key, ctx, n, thr.data(), out_simd.data());
        CHECK(out_ref == out_simd);

        std::vector<uint64_t> coin_ref(out_ref.size());
        std::vector<uint64_t> coin_simd(out_ref.size());
        ref.coin_mask(key, ctx, n, out_ref.data(), coin_ref.data());
        simd.coin_mask(key, ctx, n, out_ref.data(), coin_simd.data());
        CHECK(coin_ref == coin_simd);

        CHECK(ref.and_parity(out_ref.data(), coin_ref.data(), out_ref.size()) ==
              simd.and_parity(out_ref.data(), coin_ref.data(), out_ref.size()));
    }

    // parity equivalence across sizes that exercise the vector tail
    for (const size_t words : {1u, 3u, 4u, 5u, 8u, 33u}) {
        std::vector<uint64_t> a(words), b(words);
        for (size_t i = 0; i < words; ++i) {
            a[i] = uint64_t(stream_u32(key, {0, 1, 2}, uint32_t(2 * i))) << 32 |
                   stream_u32(key, {0, 1, 2}, uint32_t(2 * i + 1));
            b[i] = uint64_t(stream_u32(key, {0, 1, 3}, uint32_t(2 * i))) << 32 |
                   stream_u32(key, {0, 1, 3}, uint32_t(2 * i + 1));
        }
        CHECK(ref.and_parity(a.data(), b.data(), words) ==
              simd.and_parity(a.data(), b.data(), words));
    }
}

TEST_CASE("active backend resolves") {
    const auto& backend = kernels::active();
    CHECK((std::string(backend.name) == "scalar" || std::string(backend.name) == "avx2"));
}
