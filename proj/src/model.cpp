#include "gnnbench/model.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "gnnbench/rng.hpp"

namespace gnnbench {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, XorShift64 rng) {
    FeatureMatrix m(rows, cols);
    for (float& v : m.data())
        v = rng.next_float(-0.1f, 0.1f);
    return m;
}

std::vector<float> random_vector(std::size_t n, XorShift64 rng) {
    std::vector<float> v(n);
    for (float& x : v)
        x = rng.next_float(-0.1f, 0.1f);
    return v;
}

std::vector<float> as_vector(FeatureMatrix m, const std::string& path) {
    if (m.rows() != 1)
        throw FormatError("expected a 1-row vector file: " + path);
    return std::vector<float>(m.data().begin(), m.data().end());
}

FeatureMatrix from_vector(const std::vector<float>& v) {
    FeatureMatrix m(1, v.size());
    std::copy(v.begin(), v.end(), m.data().begin());
    return m;
}

} // namespace

void validate_config(const ModelConfig& cfg) {
    if (cfg.num_layers < 1)
        throw ValueError("num_layers must be at least 1");
    if (cfg.hidden_dim < 1)
        throw ValueError("hidden_dim must be at least 1");
    if (cfg.chunk_width < 1 || cfg.chunk_width > cfg.hidden_dim)
        throw ValueError("chunk_width must be in [1, hidden_dim]");
}

PreparedGraph prepare_graph(CooGraph g, const ModelConfig& cfg, MemoryLedger& ledger) {
    validate_config(cfg);
    PreparedGraph pg;
    pg.graph = cfg.model == ModelKind::Gcn ? add_self_loops(g) : std::move(g);
    pg.graph_res = LedgerReservation(ledger, pg.graph.byte_size(), "graph");
    pg.degrees = compute_degrees(pg.graph);
    if (cfg.scheme == AggregationScheme::Csr) {
        auto t0 = Clock::now();
        pg.dst_csr = coo_to_csr(reversed(pg.graph));
        pg.conversion_ms = ms_since(t0);
        pg.has_csr = true;
        pg.csr_res = LedgerReservation(ledger, pg.dst_csr.byte_size(), "csr_graph");
    }
    return pg;
}

FeatureMatrix layer_forward(PreparedGraph& pg, const FeatureMatrix& f,
                            const LayerWeights& w, const ModelConfig& cfg,
                            MemoryLedger& ledger, PhaseTimes* times) {
    const std::size_t num_vertices = pg.graph.num_vertices;
    const std::size_t hidden = cfg.hidden_dim;
    if (f.rows() != num_vertices)
        throw DimensionError("feature rows do not match vertex count");
    if (f.cols() != w.w_matrix.rows() || w.w_matrix.cols() != hidden)
        throw DimensionError("layer weight shape does not match configuration");
    if (w.bias.size() != hidden)
        throw DimensionError("bias length does not match configuration");
    PhaseTimes t;

    auto t0 = Clock::now();
    FeatureMatrix combined = FeatureMatrix::tracked(num_vertices, hidden, ledger, "combined");
    matmul_into(f, w.w_matrix, combined);
    t.comb_ms = ms_since(t0);

    t0 = Clock::now();
    std::optional<EdgeWeights> attn_coeffs;
    const EdgeWeights* coeffs = nullptr;
    AggregatorKind kind = AggregatorKind::WeightedSum;
    switch (cfg.model) {
    case ModelKind::Gcn:
        if (!pg.gcn_cache)
            pg.gcn_cache = gcn_norm_coeffs(pg.graph, pg.degrees);
        coeffs = &*pg.gcn_cache;
        break;
    case ModelKind::Gat:
        attn_coeffs = gat_attention_coeffs(pg.graph, combined, w, ledger);
        coeffs = &*attn_coeffs;
        break;
    case ModelKind::Gsc:
        kind = AggregatorKind::Mean;
        break;
    }
    t.coeff_ms = ms_since(t0);

    t0 = Clock::now();
    ChunkPlan plan(hidden, std::min(cfg.chunk_width, hidden));
    FeatureMatrix agg = decomposed_aggregate(pg.graph, pg.has_csr ? &pg.dst_csr : nullptr,
                                             combined, plan, kind, coeffs, cfg.scheme, ledger);
    t.agg_ms = ms_since(t0);

    t0 = Clock::now();
    FeatureMatrix out;
    if (cfg.model == ModelKind::Gsc) {
        if (w.root_matrix.rows() != 2 * hidden || w.root_matrix.cols() != hidden)
            throw DimensionError("root weight shape does not match configuration");
        FeatureMatrix cat = FeatureMatrix::tracked(num_vertices, 2 * hidden, ledger,
                                                   "update_concat");
        for (std::size_t i = 0; i < num_vertices; ++i) {
            std::memcpy(cat.row(i), combined.row(i), hidden * sizeof(float));
            std::memcpy(cat.row(i) + hidden, agg.row(i), hidden * sizeof(float));
        }
        out = FeatureMatrix::tracked(num_vertices, hidden, ledger, "update_out");
        matmul_into(cat, w.root_matrix, out);
        add_bias_inplace(out, w.bias);
    } else {
        add_bias_inplace(agg, w.bias);
        out = std::move(agg);
    }
    t.concat_ms = ms_since(t0);

    if (times != nullptr)
        *times = t;
    return out;
}

FeatureMatrix network_forward(PreparedGraph& pg, const FeatureMatrix& f0,
                              const std::vector<LayerWeights>& weights,
                              const ModelConfig& cfg, MemoryLedger& ledger,
                              std::vector<PhaseTimes>* times) {
    validate_config(cfg);
    if (weights.size() != cfg.num_layers)
        throw DimensionError("weight count does not match layer count");
    if (times != nullptr)
        times->assign(cfg.num_layers, PhaseTimes{});

    const FeatureMatrix* cur = &f0;
    FeatureMatrix owned;
    for (std::size_t k = 0; k < cfg.num_layers; ++k) {
        PhaseTimes t;
        FeatureMatrix next = layer_forward(pg, *cur, weights[k], cfg, ledger, &t);
        if (k + 1 < cfg.num_layers)
            relu_inplace(next);
        if (times != nullptr)
            (*times)[k] = t;
        owned = std::move(next);
        cur = &owned;
    }
    return owned;
}

FeatureMatrix network_forward(const CooGraph& g, const FeatureMatrix& f0,
                              const std::vector<LayerWeights>& weights,
                              const ModelConfig& cfg, MemoryLedger& ledger,
                              std::vector<PhaseTimes>* times) {
    PreparedGraph pg = prepare_graph(g, cfg, ledger);
    return network_forward(pg, f0, weights, cfg, ledger, times);
}

std::vector<LayerWeights> init_weights(const ModelConfig& cfg, std::uint64_t seed) {
    validate_config(cfg);
    const std::size_t hidden = cfg.hidden_dim;
    std::vector<LayerWeights> out;
    out.reserve(cfg.num_layers);
    for (std::size_t k = 0; k < cfg.num_layers; ++k) {
        LayerWeights w;
        w.w_matrix = random_matrix(hidden, hidden, XorShift64::stream(seed, k * 8 + 0));
        w.bias = random_vector(hidden, XorShift64::stream(seed, k * 8 + 1));
        if (cfg.model == ModelKind::Gsc)
            w.root_matrix =
                random_matrix(2 * hidden, hidden, XorShift64::stream(seed, k * 8 + 2));
        if (cfg.model == ModelKind::Gat) {
            w.attn_src = random_vector(hidden, XorShift64::stream(seed, k * 8 + 3));
            w.attn_dst = random_vector(hidden, XorShift64::stream(seed, k * 8 + 4));
        }
        out.push_back(std::move(w));
    }
    return out;
}

void save_weights(const std::vector<LayerWeights>& weights, const ModelConfig& cfg,
                  const std::string& manifest_path) {
    namespace fs = std::filesystem;
    fs::path dir = fs::path(manifest_path).parent_path();
    std::ofstream manifest(manifest_path, std::ios::trunc);
    if (!manifest)
        throw IoError("cannot open manifest for writing: " + manifest_path);

    auto emit = [&](const FeatureMatrix& m, const std::string& name) {
        save_feature_file(m, (dir / name).string());
        manifest << name << "\n";
    };
    for (std::size_t k = 0; k < weights.size(); ++k) {
        std::string prefix = "layer" + std::to_string(k) + "_";
        emit(weights[k].w_matrix, prefix + "w.bin");
        emit(from_vector(weights[k].bias), prefix + "bias.bin");
        if (cfg.model == ModelKind::Gsc)
            emit(weights[k].root_matrix, prefix + "root.bin");
        if (cfg.model == ModelKind::Gat) {
            emit(from_vector(weights[k].attn_src), prefix + "attn_src.bin");
            emit(from_vector(weights[k].attn_dst), prefix + "attn_dst.bin");
        }
    }
    if (!manifest)
        throw IoError("write failed: " + manifest_path);
}

std::vector<LayerWeights> load_weights(const ModelConfig& cfg,
                                       const std::string& manifest_path) {
    namespace fs = std::filesystem;
    validate_config(cfg);
    fs::path dir = fs::path(manifest_path).parent_path();
    std::ifstream manifest(manifest_path);
    if (!manifest)
        throw IoError("cannot open manifest: " + manifest_path);

    std::vector<std::string> paths;
    std::string line;
    while (std::getline(manifest, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            paths.push_back((dir / line).string());
    }

    std::size_t per_layer = 2;
    if (cfg.model == ModelKind::Gsc)
        per_layer = 3;
    if (cfg.model == ModelKind::Gat)
        per_layer = 4;
    if (paths.size() != cfg.num_layers * per_layer)
        throw FormatError("manifest lists " + std::to_string(paths.size())
                          + " files, expected " + std::to_string(cfg.num_layers * per_layer));

    std::vector<LayerWeights> out;
    out.reserve(cfg.num_layers);
    std::size_t i = 0;
    for (std::size_t k = 0; k < cfg.num_layers; ++k) {
        LayerWeights w;
        w.w_matrix = load_feature_file(paths[i++]);
        w.bias = as_vector(load_feature_file(paths[i]), paths[i]);
        ++i;
        if (cfg.model == ModelKind::Gsc) {
            w.root_matrix = load_feature_file(paths[i++]);
        }
        if (cfg.model == ModelKind::Gat) {
            w.attn_src = as_vector(load_feature_file(paths[i]), paths[i]);
            ++i;
            w.attn_dst = as_vector(load_feature_file(paths[i]), paths[i]);
            ++i;
        }
        out.push_back(std::move(w));
    }
    return out;
}

const char* model_name(ModelKind m) {
    switch (m) {
    case ModelKind::Gcn: return "gcn";
    case ModelKind::Gsc: return "gsc";
    case ModelKind::Gat: return "gat";
    }
    return "?";
}

const char* scheme_name(AggregationScheme s) {
    return s == AggregationScheme::Coo ? "coo" : "csr";
}

std::optional<ModelKind> parse_model(const std::string& s) {
    if (s == "gcn") return ModelKind::Gcn;
    if (s == "gsc") return ModelKind::Gsc;
    if (s == "gat") return ModelKind::Gat;
    return std::nullopt;
}

std::optional<AggregationScheme> parse_scheme(const std::string& s) {
    if (s == "coo") return AggregationScheme::Coo;
    if (s == "csr") return AggregationScheme::Csr;
    return std::nullopt;
}

} // namespace gnnbench
