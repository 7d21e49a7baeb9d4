#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ilv/kernels.hpp"
#include "ilv/noise.hpp"
#include "ilv/philox.hpp"
#include "ilv/syndrome.hpp"

namespace ilv {

// Stream purposes within one trial (StreamCtx::purpose). Primal and dual
// decoding use independent sub-streams of the trial's random stream.
enum class TrialStream : uint32_t {
    primal_erasure = 0,
    primal_error = 1,
    dual_erasure = 2,
    dual_error = 3,
};

struct TrialOutcome {
    bool primal_fail = false;
    bool dual_fail = false;
    bool fail() const { return primal_fail || dual_fail; }
};

// Raised when a syndrome is not realizable by any error supported on the
// erasure (a precondition violation of peel_decode).
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-edge erasure thresholds for one parameter point, precomputed once and
// shared by all trials at that point.
std::vector<uint64_t> erasure_thresholds(const SyndromeGraph& graph,
                                         const DirectionalErasure& probs);

// Scratch buffers reused across trials by a single worker. Bitsets are sized
// for the graph the workspace was built for.
struct DecoderWorkspace {
    explicit DecoderWorkspace(const SyndromeGraph& graph);

    std::vector<uint64_t> erasure, error, correction, residual;
    std::vector<uint8_t> syndrome;

    // peeling scratch
    std::vector<uint8_t> peel_bits;
    std::vector<int64_t> uf_parent;       // negative component size at roots
    std::vector<uint32_t> forest_head;    // per-vertex adjacency list head
    std::vector<uint32_t> forest_next;    // linked list over forest half-edges
    std::vector<uint32_t> forest_edge;    // edge id per forest half-edge
    uint32_t forest_size = 0;
    std::vector<uint32_t> bfs_order;
    std::vector<uint32_t> parent_vertex;
    std::vector<uint32_t> parent_edge;
    std::vector<uint8_t> visited;
};

// Peeling decoder for the erasure channel on a syndrome graph.
class PeelingDecoder {
  public:
    explicit PeelingDecoder(const SyndromeGraph& graph) : graph_(&graph) {}

    // Each edge erased independently with the threshold probability of its
    // direction class; writes ws.erasure.
    void sample_erasure(const std::vector<uint64_t>& thresholds, Philox4x32::Key key,
                        StreamCtx ctx, DecoderWorkspace& ws) const;

    // Each erased edge flips with probability 1/2; unerased edges never
    // flip. Writes ws.error.
    void sample_errors(Philox4x32::Key key, StreamCtx ctx, DecoderWorkspace& ws) const;

    // Vertex bit = parity of incident flipped edges.
    void syndrome_of(const std::vector<uint64_t>& error, std::vector<uint8_t>& out) const;

    // Spanning-forest peeling: restricts to the erased subgraph (ws.erasure),
    // builds a forest per connected component (union-find over edges in
    // canonical order; off-forest erased edges get correction 0), then peels
    // leaves, including a leaf edge exactly when the leaf vertex's syndrome
    // bit (ws.syndrome) is set. Writes ws.correction, which is supported on
    // the erasure and reproduces the syndrome. Throws DecodeError when the
    // syndrome is unrealizable.
    void peel_decode(DecoderWorkspace& ws) const;

    // erasure must already be in ws (see run_trial). Samples errors, computes
    // the syndrome, decodes, and classifies the residual error ^ correction;
    // returns true when the residual wraps some periodic dimension an odd
    // number of times.
    bool finish_trial(Philox4x32::Key key, StreamCtx error_ctx, DecoderWorkspace& ws) const;

    const SyndromeGraph& graph() const { return *graph_; }

  private:
    const SyndromeGraph* graph_;
};

struct TrialContext {
    const SyndromeGraph* primal;
    const SyndromeGraph* dual;
    const std::vector<uint64_t>* primal_thresholds;
    const std::vector<uint64_t>* dual_thresholds;
    // When set, the dual graph reuses the primal erasure mask (comonotone
    // coupling): a sensitivity toggle for the physically correlated loss of
    // both outcomes of one fusion. Off by default, matching the independent
    // per-outcome sampling of the reference model.
    bool correlated_erasures = false;
};

// One Monte Carlo trial. point_id/trial index the random stream, making the
// outcome a pure function of (key, point_id, trial) regardless of worker
// count and scheduling.
TrialOutcome run_trial(const TrialContext& ctx, Philox4x32::Key key, uint32_t point_id,
                       uint32_t trial, DecoderWorkspace& primal_ws, DecoderWorkspace& dual_ws);

}  // namespace ilv
