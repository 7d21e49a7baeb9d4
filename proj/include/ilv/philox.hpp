#pragma once

#include <array>
#include <cstdint>

namespace ilv {

// Philox4x32-10 counter-based generator, bit-compatible with the reference
// implementation of Salmon et al. Stateless: every 128-bit counter value maps
// to four independent uniform 32-bit words under a 64-bit key.
struct Philox4x32 {
    using Counter = std::array<uint32_t, 4>;
    using Key = std::array<uint32_t, 2>;

    static constexpr uint32_t mult0 = 0xD2511F53u;
    static constexpr uint32_t mult1 = 0xCD9E8D57u;
    static constexpr uint32_t weyl0 = 0x9E3779B9u;
    static constexpr uint32_t weyl1 = 0xBB67AE85u;

    static constexpr Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = uint64_t(mult0) * ctr[0];
            const uint64_t p1 = uint64_t(mult1) * ctr[2];
            ctr = {uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], uint32_t(p1),
                   uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], uint32_t(p0)};
            key[0] += weyl0;
            key[1] += weyl1;
        }
        return ctr;
    }
};

// Address of one random stream under a master seed. Counter words 0..2 hold
// the stream address, word 3 counts blocks within the stream, so distinct
// (a, b, purpose) triples never collide regardless of how many blocks each
// stream consumes.
struct StreamCtx {
    uint32_t a = 0;        // e.g. sweep point id, bootstrap resample id
    uint32_t b = 0;        // e.g. trial index
    uint32_t purpose = 0;  // role tag, see e.g. decoder.hpp
};

inline Philox4x32::Key key_from_seed(uint64_t seed) {
    return {uint32_t(seed), uint32_t(seed >> 32)};
}

inline Philox4x32::Counter stream_block(Philox4x32::Key key, StreamCtx ctx, uint32_t block) {
    return Philox4x32::block({ctx.a, ctx.b, ctx.purpose, block}, key);
}

// Word `index` of a stream viewed as a flat sequence of uniform u32 values.
inline uint32_t stream_u32(Philox4x32::Key key, StreamCtx ctx, uint32_t index) {
    return stream_block(key, ctx, index / 4)[index % 4];
}

}  // namespace ilv
