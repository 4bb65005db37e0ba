#pragma once

#include <cstddef>
#include <vector>

#include "gnnbench/graph.hpp"
#include "gnnbench/ledger.hpp"
#include "gnnbench/tensor.hpp"

namespace gnnbench {

enum class AggregatorKind { Sum, Mean, Max, WeightedSum };

enum class AggregationScheme { Coo, Csr };

/// One coefficient per edge, aligned with the CooGraph edge order. The
/// reservation is set when a ledger tracked the allocation (attention
/// coefficients); normalization coefficients are small and untracked.
struct EdgeWeights {
    std::vector<float> coeff;
    LedgerReservation reservation;
};

/// Gather-scatter aggregation over one column-range view. Materializes an
/// E x width message buffer (registered Transient with the ledger; this
/// buffer is the peak-memory driver), then reduces messages into their
/// destination rows in ascending edge order.
///
/// out[v] = reduce over edges e with dst[e] = v of (coeff[e] *) f[src[e]].
/// Mean divides the sum by in-degree; Sum/Mean/Max of an empty
/// neighborhood all yield the zero vector. weights must be present
/// exactly when kind is WeightedSum.
FeatureMatrix scatter_aggregate_coo(const CooGraph& g, const FeatureView& f,
                                    AggregatorKind kind, const EdgeWeights* weights,
                                    MemoryLedger& ledger);

/// Segment-reduce aggregation over a destination-indexed CSR (build with
/// coo_to_csr(reversed(g))). Accumulates each destination's segment
/// directly, so no message buffer exists; only the V x width output is
/// registered. Same result as scatter_aggregate_coo.
FeatureMatrix segment_aggregate_csr(const CsrGraph& dst_csr, const FeatureView& f,
                                    AggregatorKind kind, const EdgeWeights* weights,
                                    MemoryLedger& ledger);

/// Symmetric normalization coefficients on a self-looped graph:
/// coeff[e] = 1 / sqrt(in_degree[src[e]] * in_degree[dst[e]]).
/// Degrees must come from the same self-looped graph, so every degree
/// is at least 1.
EdgeWeights gcn_norm_coeffs(const CooGraph& g, const DegreeVector& deg);

/// Single-head attention coefficients on the post-combination features
/// (full width; only the weighted aggregation afterwards is chunked).
/// score[e] = leaky_relu(attn_src . f[src[e]] + attn_dst . f[dst[e]]),
/// then a per-destination softmax with max-subtraction. Coefficients
/// into each destination sum to 1; a vertex with no in-edges contributes
/// none. The E-float score buffer is registered Transient, the returned
/// coefficients Persistent.
EdgeWeights gat_attention_coeffs(const CooGraph& g, const FeatureMatrix& f_combined,
                                 const LayerWeights& w, MemoryLedger& ledger);

/// Feature-decomposition driver: runs the selected per-chunk aggregation
/// for each chunk of the plan, writing each chunk's columns straight into
/// the full-width output (the concatenation step). A chunk's message
/// buffer is released before the next chunk starts, so the transient peak
/// is E * chunk_width * 4 bytes rather than E * total_width * 4.
///
/// With the same scheme, the result is bit-identical to the monolithic
/// (single chunk) run: every output element sees the same additions in
/// the same ascending-edge-index order either way.
///
/// dst_csr is required for the Csr scheme and ignored otherwise. weights
/// (if any) must have been computed on the full-width features before
/// this call.
FeatureMatrix decomposed_aggregate(const CooGraph& g, const CsrGraph* dst_csr,
                                   const FeatureMatrix& f, const ChunkPlan& plan,
                                   AggregatorKind kind, const EdgeWeights* weights,
                                   AggregationScheme scheme, MemoryLedger& ledger);

} // namespace gnnbench
