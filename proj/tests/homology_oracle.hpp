#pragma once

// Test-only homology oracle, independent of the peeling decoder and of the
// membrane bitsets: BFS over the erased subgraph with universal-cover
// potentials. An off-tree erased edge whose potential mismatch is an odd
// multiple of d in some dimension closes a non-contractible cycle, and by
// linearity of crossing parity the erasure then supports one; otherwise
// every cycle supported on the erasure is contractible.

#include <array>
#include <cstdint>
#include <vector>

#include "ilv/syndrome.hpp"

namespace ilv::testing {

inline bool erasure_supports_noncontractible_cycle(const SyndromeGraph& g,
                                                   const std::vector<uint64_t>& erasure) {
    const int64_t d = g.block_size();
    const uint32_t n = g.vertex_count();

    struct Arc {
        uint32_t other;
        int8_t step[3];
    };
    std::vector<std::vector<Arc>> adjacency(n);
    for (size_t w = 0; w < erasure.size(); ++w) {
        uint64_t bits = erasure[w];
        while (bits != 0) {
            const uint32_t e = uint32_t(w) * 64 + uint32_t(__builtin_ctzll(bits));
            bits &= bits - 1;
            const uint32_t u = g.edge_u(e);
            const uint32_t v = g.edge_v(e);
            const auto s = g.edge_step(e);
            adjacency[u].push_back({v, {s[0], s[1], s[2]}});
            adjacency[v].push_back({u, {int8_t(-s[0]), int8_t(-s[1]), int8_t(-s[2])}});
        }
    }

    std::vector<std::array<int64_t, 3>> pot(n);
    std::vector<uint8_t> visited(n, 0);
    std::vector<uint32_t> queue;
    for (uint32_t start = 0; start < n; ++start) {
        if (visited[start]) {
            continue;
        }
        visited[start] = 1;
        const Vec3i cell = g.cell_of(start);
        pot[start] = {cell.x, cell.y, cell.z};
        queue.clear();
        queue.push_back(start);
        for (size_t q = 0; q < queue.size(); ++q) {
            const uint32_t u = queue[q];
            for (const Arc& arc : adjacency[u]) {
                if (!visited[arc.other]) {
                    visited[arc.other] = 1;
                    pot[arc.other] = {pot[u][0] + arc.step[0], pot[u][1] + arc.step[1],
                                      pot[u][2] + arc.step[2]};
                    queue.push_back(arc.other);
                    continue;
                }
                for (int m = 0; m < 3; ++m) {
                    const int64_t mismatch = pot[u][m] + arc.step[m] - pot[arc.other][m];
                    if (((mismatch / d) & 1) != 0) {
                        return true;
                    }
                }
            }
        }
    }
    return false;
}

}  // namespace ilv::testing
