#include "ilv/decoder.hpp"

#include <cstring>

namespace ilv {

namespace {

constexpr uint32_t list_end = UINT32_MAX;
constexpr uint32_t no_parent = UINT32_MAX;

int64_t find_root(std::vector<int64_t>& parent, int64_t v) {
    int64_t root = v;
    while (parent[root] >= 0) {
        root = parent[root];
    }
    while (parent[v] >= 0) {
        const int64_t next = parent[v];
        parent[v] = root;
        v = next;
    }
    return root;
}

}  // namespace

std::vector<uint64_t> erasure_thresholds(const SyndromeGraph& graph,
                                         const DirectionalErasure& probs) {
    std::vector<uint64_t> thresholds(graph.edge_count());
    for (int a = 0; a < 3; ++a) {
        const auto [begin, end] = graph.axis_range(Axis(a));
        const uint64_t thr = kernels::probability_threshold(probs[a]);
        for (uint32_t e = begin; e < end; ++e) {
            thresholds[e] = thr;
        }
    }
    return thresholds;
}

DecoderWorkspace::DecoderWorkspace(const SyndromeGraph& graph) {
    const size_t words = graph.mask_words();
    erasure.assign(words, 0);
    error.assign(words, 0);
    correction.assign(words, 0);
    residual.assign(words, 0);
    syndrome.assign(graph.vertex_count(), 0);
    peel_bits.assign(graph.vertex_count(), 0);
    uf_parent.assign(graph.vertex_count(), -1);
    forest_head.assign(graph.vertex_count(), list_end);
    forest_next.assign(size_t(graph.vertex_count()) * 2, list_end);
    forest_edge.assign(size_t(graph.vertex_count()) * 2, 0);
    bfs_order.reserve(graph.vertex_count());
    parent_vertex.assign(graph.vertex_count(), no_parent);
    parent_edge.assign(graph.vertex_count(), 0);
    visited.assign(graph.vertex_count(), 0);
}

void PeelingDecoder::sample_erasure(const std::vector<uint64_t>& thresholds,
                                    Philox4x32::Key key, StreamCtx ctx,
                                    DecoderWorkspace& ws) const {
    kernels::active().erasure_mask(key, ctx, graph_->edge_count(), thresholds.data(),
                                   ws.erasure.data());
}

void PeelingDecoder::sample_errors(Philox4x32::Key key, StreamCtx ctx,
                                   DecoderWorkspace& ws) const {
    kernels::active().coin_mask(key, ctx, graph_->edge_count(), ws.erasure.data(),
                                ws.error.data());
}

void PeelingDecoder::syndrome_of(const std::vector<uint64_t>& error,
                                 std::vector<uint8_t>& out) const {
    out.assign(graph_->vertex_count(), 0);
    for (size_t w = 0; w < error.size(); ++w) {
        uint64_t bits = error[w];
        while (bits != 0) {
            const uint32_t e = uint32_t(w) * 64 + uint32_t(__builtin_ctzll(bits));
            bits &= bits - 1;
            out[graph_->edge_u(e)] ^= 1;
            out[graph_->edge_v(e)] ^= 1;
        }
    }
}

void PeelingDecoder::peel_decode(DecoderWorkspace& ws) const {
    const SyndromeGraph& g = *graph_;
    const uint32_t n_vertices = g.vertex_count();

    std::memset(ws.correction.data(), 0, ws.correction.size() * sizeof(uint64_t));
    std::memcpy(ws.peel_bits.data(), ws.syndrome.data(), n_vertices);
    std::fill(ws.uf_parent.begin(), ws.uf_parent.end(), int64_t(-1));
    std::fill(ws.forest_head.begin(), ws.forest_head.end(), list_end);
    ws.forest_size = 0;

    // Spanning forest of the erased subgraph; canonical edge order breaks
    // ties, so the forest is deterministic.
    for (size_t w = 0; w < ws.erasure.size(); ++w) {
        uint64_t bits = ws.erasure[w];
        while (bits != 0) {
            const uint32_t e = uint32_t(w) * 64 + uint32_t(__builtin_ctzll(bits));
            bits &= bits - 1;
            const uint32_t u = g.edge_u(e);
            const uint32_t v = g.edge_v(e);
            const int64_t ru = find_root(ws.uf_parent, u);
            const int64_t rv = find_root(ws.uf_parent, v);
            if (ru == rv) {
                continue;  // off-forest erased edge, correction stays 0
            }
            if (ws.uf_parent[ru] <= ws.uf_parent[rv]) {
                ws.uf_parent[ru] += ws.uf_parent[rv];
                ws.uf_parent[rv] = ru;
            } else {
                ws.uf_parent[rv] += ws.uf_parent[ru];
                ws.uf_parent[ru] = rv;
            }
            const uint32_t slot = ws.forest_size * 2;
            ws.forest_next[slot] = ws.forest_head[u];
            ws.forest_edge[slot] = e;
            ws.forest_head[u] = slot;
            ws.forest_next[slot + 1] = ws.forest_head[v];
            ws.forest_edge[slot + 1] = e;
            ws.forest_head[v] = slot + 1;
            ++ws.forest_size;
        }
    }

    // Root every component at its lowest vertex and order vertices by BFS.
    ws.bfs_order.clear();
    std::memset(ws.visited.data(), 0, n_vertices);
    for (uint32_t start = 0; start < n_vertices; ++start) {
        if (ws.visited[start]) {
            continue;
        }
        ws.visited[start] = 1;
        ws.parent_vertex[start] = no_parent;
        const size_t frontier_begin = ws.bfs_order.size();
        ws.bfs_order.push_back(start);
        for (size_t q = frontier_begin; q < ws.bfs_order.size(); ++q) {
            const uint32_t v = ws.bfs_order[q];
            for (uint32_t slot = ws.forest_head[v]; slot != list_end;
                 slot = ws.forest_next[slot]) {
                const uint32_t e = ws.forest_edge[slot];
                const uint32_t other = g.edge_u(e) == v ? g.edge_v(e) : g.edge_u(e);
                if (ws.visited[other]) {
                    continue;
                }
                ws.visited[other] = 1;
                ws.parent_vertex[other] = v;
                ws.parent_edge[other] = e;
                ws.bfs_order.push_back(other);
            }
        }
    }

    // Peel leaves in reverse BFS order: a lit leaf pulls its tree edge into
    // the correction and hands the flip to its parent.
    for (size_t i = ws.bfs_order.size(); i-- > 0;) {
        const uint32_t v = ws.bfs_order[i];
        if (ws.parent_vertex[v] == no_parent) {
            if (ws.peel_bits[v] != 0) {
                throw DecodeError("syndrome not realizable on the erased subgraph");
            }
            continue;
        }
        if (ws.peel_bits[v] != 0) {
            const uint32_t e = ws.parent_edge[v];
            ws.correction[e / 64] |= uint64_t(1) << (e % 64);
            ws.peel_bits[v] = 0;
            ws.peel_bits[ws.parent_vertex[v]] ^= 1;
        }
    }
}

bool PeelingDecoder::finish_trial(Philox4x32::Key key, StreamCtx error_ctx,
                                  DecoderWorkspace& ws) const {
    sample_errors(key, error_ctx, ws);
    syndrome_of(ws.error, ws.syndrome);
    peel_decode(ws);
    for (size_t w = 0; w < ws.residual.size(); ++w) {
        ws.residual[w] = ws.error[w] ^ ws.correction[w];
    }
    const auto parity = membrane_parity(*graph_, ws.residual);
    return parity[0] != 0 || parity[1] != 0 || parity[2] != 0;
}

TrialOutcome run_trial(const TrialContext& ctx, Philox4x32::Key key, uint32_t point_id,
                       uint32_t trial, DecoderWorkspace& primal_ws,
                       DecoderWorkspace& dual_ws) {
    const PeelingDecoder primal(*ctx.primal);
    const PeelingDecoder dual(*ctx.dual);

    primal.sample_erasure(*ctx.primal_thresholds, key,
                          {point_id, trial, uint32_t(TrialStream::primal_erasure)}, primal_ws);
    if (ctx.correlated_erasures) {
        dual_ws.erasure = primal_ws.erasure;
    } else {
        dual.sample_erasure(*ctx.dual_thresholds, key,
                            {point_id, trial, uint32_t(TrialStream::dual_erasure)}, dual_ws);
    }

    TrialOutcome outcome;
    outcome.primal_fail = primal.finish_trial(
        key, {point_id, trial, uint32_t(TrialStream::primal_error)}, primal_ws);
    outcome.dual_fail = dual.finish_trial(
        key, {point_id, trial, uint32_t(TrialStream::dual_error)}, dual_ws);
    return outcome;
}

}  // namespace ilv
