#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnnbench/aggregate.hpp"
#include "gnnbench/graph.hpp"
#include "gnnbench/ledger.hpp"
#include "gnnbench/tensor.hpp"

namespace gnnbench {

enum class ModelKind { Gcn, Gsc, Gat };

struct ModelConfig {
    ModelKind model = ModelKind::Gcn;
    std::size_t num_layers = 2;
    std::size_t hidden_dim = 32;
    std::size_t chunk_width = 32;
    AggregationScheme scheme = AggregationScheme::Coo;
};

/// num_layers >= 1, hidden_dim >= 1, 1 <= chunk_width <= hidden_dim.
void validate_config(const ModelConfig& cfg);

/// Wall time of one layer's phases, in milliseconds. concat_ms covers the
/// post-aggregation update step (bias add, or the concat-and-project
/// update); the chunk concatenation itself is realized as in-place column
/// writes and costs nothing separately.
struct PhaseTimes {
    double comb_ms = 0.0;
    double coeff_ms = 0.0;
    double agg_ms = 0.0;
    double concat_ms = 0.0;
};

/// Per-run graph state: the effective graph (self-loops added for GCN),
/// its degrees, the destination-indexed CSR when the scheme needs one,
/// and the cached normalization coefficients. Graph arrays are registered
/// with the run's ledger; the ledger must outlive this object.
struct PreparedGraph {
    CooGraph graph;
    DegreeVector degrees;
    CsrGraph dst_csr;
    bool has_csr = false;
    double conversion_ms = 0.0;
    std::optional<EdgeWeights> gcn_cache;
    LedgerReservation graph_res;
    LedgerReservation csr_res;
};

/// Builds the effective graph for a config. For the Csr scheme the
/// reversal plus conversion is timed into conversion_ms.
PreparedGraph prepare_graph(CooGraph g, const ModelConfig& cfg, MemoryLedger& ledger);

/// One message-passing layer. Combination (dense matmul) runs first in
/// every model; then edge coefficients (GCN: cached normalization, GAT:
/// attention on the full-width combined features, GSC: none, Mean
/// aggregator); then the chunked aggregation; then the update (bias add,
/// or for GSC the [combined || aggregated] concat through the root
/// weight). Phase wall times land in *times when given.
FeatureMatrix layer_forward(PreparedGraph& pg, const FeatureMatrix& f,
                            const LayerWeights& w, const ModelConfig& cfg,
                            MemoryLedger& ledger, PhaseTimes* times = nullptr);

/// num_layers applications of layer_forward with relu between layers and
/// none after the last.
FeatureMatrix network_forward(PreparedGraph& pg, const FeatureMatrix& f0,
                              const std::vector<LayerWeights>& weights,
                              const ModelConfig& cfg, MemoryLedger& ledger,
                              std::vector<PhaseTimes>* times = nullptr);

/// Convenience overload that prepares the graph internally.
FeatureMatrix network_forward(const CooGraph& g, const FeatureMatrix& f0,
                              const std::vector<LayerWeights>& weights,
                              const ModelConfig& cfg, MemoryLedger& ledger,
                              std::vector<PhaseTimes>* times = nullptr);

/// Deterministic uniform [-0.1, 0.1] weights; a given seed reproduces
/// identical bytes on every platform. Layer k draws from rng streams
/// tagged (seed, k*8 + slot) with fixed slot order: weight matrix, bias,
/// root matrix (GSC), attention vectors (GAT). Layer input width equals
/// hidden_dim, so all weight matrices are hidden x hidden.
std::vector<LayerWeights> init_weights(const ModelConfig& cfg, std::uint64_t seed);

/// One binary file per matrix/vector (vectors as 1 x N), plus a manifest
/// listing the file paths in layer order, newline separated, relative to
/// the manifest's directory. save then load round-trips bit-identically.
void save_weights(const std::vector<LayerWeights>& weights, const ModelConfig& cfg,
                  const std::string& manifest_path);
std::vector<LayerWeights> load_weights(const ModelConfig& cfg,
                                       const std::string& manifest_path);

const char* model_name(ModelKind m);
const char* scheme_name(AggregationScheme s);
std::optional<ModelKind> parse_model(const std::string& s);
std::optional<AggregationScheme> parse_scheme(const std::string& s);

} // namespace gnnbench
