#include "ilv/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace ilv::kernels {

bool avx2_available() {
#if defined(ILV_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

#if !defined(ILV_HAVE_AVX2)
const Backend& avx2() {
    throw std::runtime_error("avx2 kernel backend not built on this platform");
}
#endif

const Backend& active() {
    static const Backend* chosen = [] {
        const char* env = std::getenv("ILV_KERNELS");
        if (env != nullptr) {
            if (std::strcmp(env, "scalar") == 0) {
                return &scalar();
            }
            if (std::strcmp(env, "avx2") == 0) {
                if (!avx2_available()) {
                    throw std::runtime_error("ILV_KERNELS=avx2 but AVX2 is unavailable");
                }
                return &avx2();
            }
            throw std::runtime_error("unknown ILV_KERNELS backend");
        }
        return avx2_available() ? &avx2() : &scalar();
    }();
    return *chosen;
}

uint64_t probability_threshold(double p) {
    if (!(p >= 0.0) || !(p <= 1.0)) {
        throw std::invalid_argument("probability must lie in [0, 1]");
    }
    const double scaled = std::nearbyint(p * 4294967296.0);
    if (scaled >= 4294967296.0) {
        return uint64_t(1) << 32;
    }
    return scaled <= 0.0 ? 0 : uint64_t(scaled);
}

}  // namespace ilv::kernels
