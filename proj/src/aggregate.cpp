#include "gnnbench/aggregate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

namespace gnnbench {

namespace {

constexpr float kNegInf = -std::numeric_limits<float>::infinity();

void check_weights(AggregatorKind kind, const EdgeWeights* weights, std::size_t num_edges) {
    if (kind == AggregatorKind::WeightedSum) {
        if (weights == nullptr)
            throw ValueError("weighted aggregation requires edge weights");
        if (weights->coeff.size() != num_edges)
            throw DimensionError("edge weight count does not match edge count");
    } else if (weights != nullptr) {
        throw ValueError("edge weights are only valid for weighted aggregation");
    }
}

std::vector<std::uint32_t> count_in_degrees(const CooGraph& g) {
    std::vector<std::uint32_t> deg(g.num_vertices, 0);
    for (VertexId v : g.dst)
        ++deg[v];
    return deg;
}

// Gather-scatter for one column slice. msg holds E x width floats; out
// rows are strided by the full output width so chunks land directly in
// their final columns. Scatter runs in ascending edge index order, the
// reduction order every path in the engine shares.
void coo_chunk(const CooGraph& g, const FeatureView& f, AggregatorKind kind,
               const float* coeff, const std::uint32_t* in_deg, float* msg,
               float* out, std::size_t stride) {
    const std::size_t w = f.width;
    const std::size_t num_edges = g.num_edges();
    const bool is_max = kind == AggregatorKind::Max;

    for (std::size_t e = 0; e < num_edges; ++e) {
        const float* srow = f.row(g.src[e]);
        float* mrow = msg + e * w;
        if (coeff != nullptr) {
            float c = coeff[e];
            for (std::size_t j = 0; j < w; ++j)
                mrow[j] = c * srow[j];
        } else {
            std::memcpy(mrow, srow, w * sizeof(float));
        }
    }

    for (std::size_t v = 0; v < g.num_vertices; ++v)
        std::fill_n(out + v * stride, w, is_max ? kNegInf : 0.0f);

    for (std::size_t e = 0; e < num_edges; ++e) {
        float* orow = out + static_cast<std::size_t>(g.dst[e]) * stride;
        const float* mrow = msg + e * w;
        if (is_max) {
            for (std::size_t j = 0; j < w; ++j)
                orow[j] = std::max(orow[j], mrow[j]);
        } else {
            for (std::size_t j = 0; j < w; ++j)
                orow[j] += mrow[j];
        }
    }

    if (kind == AggregatorKind::Mean) {
        for (std::size_t v = 0; v < g.num_vertices; ++v) {
            if (in_deg[v] == 0)
                continue;
            float d = static_cast<float>(in_deg[v]);
            float* orow = out + v * stride;
            for (std::size_t j = 0; j < w; ++j)
                orow[j] /= d;
        }
    } else if (is_max) {
        // empty neighborhoods yield 0, not -inf
        for (std::size_t v = 0; v < g.num_vertices; ++v)
            if (in_deg[v] == 0)
                std::fill_n(out + v * stride, w, 0.0f);
    }
}

// Segment reduce for one column slice over a destination-indexed CSR.
// Within a row, slots are in ascending original edge order (stable
// conversion), so per-element additions match the COO path exactly.
void csr_chunk(const CsrGraph& csr, const FeatureView& f, AggregatorKind kind,
               const float* coeff, float* out, std::size_t stride) {
    const std::size_t w = f.width;
    const bool is_max = kind == AggregatorKind::Max;

    for (std::size_t v = 0; v < csr.num_vertices; ++v) {
        float* orow = out + v * stride;
        const std::uint64_t begin = csr.row_ptr[v];
        const std::uint64_t end = csr.row_ptr[v + 1];
        if (is_max && begin == end) {
            std::fill_n(orow, w, 0.0f);
            continue;
        }
        std::fill_n(orow, w, is_max ? kNegInf : 0.0f);
        for (std::uint64_t s = begin; s < end; ++s) {
            const float* srow = f.row(csr.col_idx[s]);
            if (coeff != nullptr) {
                float c = coeff[csr.edge_ids[s]];
                for (std::size_t j = 0; j < w; ++j)
                    orow[j] += c * srow[j];
            } else if (is_max) {
                for (std::size_t j = 0; j < w; ++j)
                    orow[j] = std::max(orow[j], srow[j]);
            } else {
                for (std::size_t j = 0; j < w; ++j)
                    orow[j] += srow[j];
            }
        }
        if (kind == AggregatorKind::Mean && end > begin) {
            float d = static_cast<float>(end - begin);
            for (std::size_t j = 0; j < w; ++j)
                orow[j] /= d;
        }
    }
}

void check_view(const FeatureView& f, VertexId num_vertices) {
    if (f.matrix == nullptr)
        throw ValueError("aggregation input view is empty");
    if (f.rows() != num_vertices)
        throw DimensionError("feature rows do not match vertex count");
    if (f.col_begin + f.width > f.matrix->cols())
        throw DimensionError("feature view exceeds matrix width");
}

const float* coeff_ptr(AggregatorKind kind, const EdgeWeights* weights) {
    return kind == AggregatorKind::WeightedSum ? weights->coeff.data() : nullptr;
}

} // namespace

FeatureMatrix scatter_aggregate_coo(const CooGraph& g, const FeatureView& f,
                                    AggregatorKind kind, const EdgeWeights* weights,
                                    MemoryLedger& ledger) {
    check_view(f, g.num_vertices);
    check_weights(kind, weights, g.num_edges());

    FeatureMatrix out = FeatureMatrix::tracked(g.num_vertices, f.width, ledger, "agg_output");
    std::vector<std::uint32_t> deg;
    if (kind == AggregatorKind::Mean || kind == AggregatorKind::Max)
        deg = count_in_degrees(g);

    LedgerReservation msg_res(ledger, g.num_edges() * f.width * sizeof(float), "message",
                              BufferClass::Transient);
    std::vector<float> msg(g.num_edges() * f.width);
    coo_chunk(g, f, kind, coeff_ptr(kind, weights), deg.data(), msg.data(), out.row(0),
              out.cols());
    return out;
}

FeatureMatrix segment_aggregate_csr(const CsrGraph& dst_csr, const FeatureView& f,
                                    AggregatorKind kind, const EdgeWeights* weights,
                                    MemoryLedger& ledger) {
    check_view(f, dst_csr.num_vertices);
    check_weights(kind, weights, dst_csr.num_edges());

    FeatureMatrix out =
        FeatureMatrix::tracked(dst_csr.num_vertices, f.width, ledger, "agg_output");
    csr_chunk(dst_csr, f, kind, coeff_ptr(kind, weights), out.row(0), out.cols());
    return out;
}

EdgeWeights gcn_norm_coeffs(const CooGraph& g, const DegreeVector& deg) {
    if (deg.in_degree.size() != g.num_vertices)
        throw DimensionError("degree vector does not match vertex count");
    EdgeWeights w;
    w.coeff.resize(g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        std::uint32_t ds = deg.in_degree[g.src[e]];
        std::uint32_t dd = deg.in_degree[g.dst[e]];
        // self-loop precondition guarantees positive degrees
        assert(ds > 0 && dd > 0);
        w.coeff[e] = 1.0f / std::sqrt(static_cast<float>(ds) * static_cast<float>(dd));
    }
    return w;
}

EdgeWeights gat_attention_coeffs(const CooGraph& g, const FeatureMatrix& f_combined,
                                 const LayerWeights& w, MemoryLedger& ledger) {
    const std::size_t width = f_combined.cols();
    if (f_combined.rows() != g.num_vertices)
        throw DimensionError("feature rows do not match vertex count");
    if (w.attn_src.size() != width || w.attn_dst.size() != width)
        throw DimensionError("attention vector length does not match feature width");

    const std::size_t num_edges = g.num_edges();

    // per-vertex halves of the score; edge e scores proj_src[src] + proj_dst[dst]
    std::vector<float> proj_src(g.num_vertices, 0.0f);
    std::vector<float> proj_dst(g.num_vertices, 0.0f);
    for (std::size_t v = 0; v < g.num_vertices; ++v) {
        const float* row = f_combined.row(v);
        float a = 0.0f;
        float b = 0.0f;
        for (std::size_t j = 0; j < width; ++j) {
            a += w.attn_src[j] * row[j];
            b += w.attn_dst[j] * row[j];
        }
        proj_src[v] = a;
        proj_dst[v] = b;
    }

    EdgeWeights out;
    out.reservation = LedgerReservation(ledger, num_edges * sizeof(float), "edge_coeffs");
    out.coeff.resize(num_edges);

    {
        LedgerReservation score_res(ledger, num_edges * sizeof(float), "gat_scores",
                                    BufferClass::Transient);
        std::vector<float> score(num_edges);
        for (std::size_t e = 0; e < num_edges; ++e) {
            float s = proj_src[g.src[e]] + proj_dst[g.dst[e]];
            score[e] = s > 0.0f ? s : w.leaky_slope * s;
        }

        // per-destination softmax, max-subtracted for stability
        std::vector<float> vmax(g.num_vertices, kNegInf);
        std::vector<float> vsum(g.num_vertices, 0.0f);
        for (std::size_t e = 0; e < num_edges; ++e)
            vmax[g.dst[e]] = std::max(vmax[g.dst[e]], score[e]);
        for (std::size_t e = 0; e < num_edges; ++e) {
            float x = std::exp(score[e] - vmax[g.dst[e]]);
            out.coeff[e] = x;
            vsum[g.dst[e]] += x;
        }
        for (std::size_t e = 0; e < num_edges; ++e)
            out.coeff[e] /= vsum[g.dst[e]];
    }
    return out;
}

FeatureMatrix decomposed_aggregate(const CooGraph& g, const CsrGraph* dst_csr,
                                   const FeatureMatrix& f, const ChunkPlan& plan,
                                   AggregatorKind kind, const EdgeWeights* weights,
                                   AggregationScheme scheme, MemoryLedger& ledger) {
    if (f.rows() != g.num_vertices)
        throw DimensionError("feature rows do not match vertex count");
    check_weights(kind, weights, g.num_edges());
    if (scheme == AggregationScheme::Csr) {
        if (dst_csr == nullptr)
            throw ValueError("csr scheme requires a destination-indexed csr graph");
        if (dst_csr->num_vertices != g.num_vertices || dst_csr->num_edges() != g.num_edges())
            throw DimensionError("csr graph does not match the coo graph");
    }

    std::vector<FeatureView> views = chunk_features(f, plan);
    FeatureMatrix out =
        FeatureMatrix::tracked(g.num_vertices, plan.total_width, ledger, "agg_output");

    std::vector<std::uint32_t> deg;
    if (scheme == AggregationScheme::Coo
        && (kind == AggregatorKind::Mean || kind == AggregatorKind::Max))
        deg = count_in_degrees(g);

    const float* coeff = coeff_ptr(kind, weights);
    for (std::size_t p = 0; p < views.size(); ++p) {
        float* out_base = out.row(0) + plan.offsets[p];
        if (scheme == AggregationScheme::Coo) {
            // per-chunk message buffer, released before the next chunk
            LedgerReservation msg_res(ledger, g.num_edges() * views[p].width * sizeof(float),
                                      "message", BufferClass::Transient);
            std::vector<float> msg(g.num_edges() * views[p].width);
            coo_chunk(g, views[p], kind, coeff, deg.data(), msg.data(), out_base, out.cols());
        } else {
            csr_chunk(*dst_csr, views[p], kind, coeff, out_base, out.cols());
        }
    }
    return out;
}

} // namespace gnnbench
