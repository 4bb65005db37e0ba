#include "gnnbench/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "gnnbench/rng.hpp"

namespace gnnbench {

namespace {

// rng stream tags; weight init uses small per-layer tags (see init_weights)
constexpr std::uint64_t kStreamFeatures = 0x1000;
constexpr std::uint64_t kStreamGraph = 0x1001;

std::string fmt_ms(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt_hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<LayerTimings> median_timings(const std::vector<std::vector<PhaseTimes>>& reps) {
    std::size_t num_layers = reps.front().size();
    std::vector<LayerTimings> out(num_layers);
    for (std::size_t k = 0; k < num_layers; ++k) {
        std::vector<double> comb, coeff, agg, concat;
        for (const auto& rep : reps) {
            comb.push_back(rep[k].comb_ms);
            coeff.push_back(rep[k].coeff_ms);
            agg.push_back(rep[k].agg_ms);
            concat.push_back(rep[k].concat_ms);
        }
        out[k].layer = k;
        out[k].phases.comb_ms = median(comb);
        out[k].phases.coeff_ms = median(coeff);
        out[k].phases.agg_ms = median(agg);
        out[k].phases.concat_ms = median(concat);
    }
    return out;
}

void write_csv(const std::vector<RunRecord>& records, std::ostream& os) {
    os << "model,scheme,V,E,hidden,chunk_width,layer,comb_ms,coeff_ms,agg_ms,"
          "concat_ms,conversion_ms,peak_bytes,outcome\n";
    for (const RunRecord& r : records) {
        std::string base = std::string(model_name(r.cfg.model)) + ","
                         + scheme_name(r.cfg.scheme) + "," + std::to_string(r.num_vertices)
                         + "," + std::to_string(r.num_edges) + ","
                         + std::to_string(r.cfg.hidden_dim) + ","
                         + std::to_string(r.cfg.chunk_width) + ",";
        std::string conv = r.conversion_ms ? fmt_ms(*r.conversion_ms) : std::string();
        if (r.outcome == "oom") {
            os << base << ",,,,,," << r.peak_bytes << ",oom\n";
            continue;
        }
        for (const LayerTimings& lt : r.layers) {
            os << base << lt.layer << "," << fmt_ms(lt.phases.comb_ms) << ","
               << fmt_ms(lt.phases.coeff_ms) << "," << fmt_ms(lt.phases.agg_ms) << ","
               << fmt_ms(lt.phases.concat_ms) << "," << conv << "," << r.peak_bytes
               << "," << r.outcome << "\n";
        }
    }
}

void write_json(const std::vector<RunRecord>& records, std::ostream& os) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const RunRecord& r : records) {
        nlohmann::ordered_json j;
        j["model"] = model_name(r.cfg.model);
        j["scheme"] = scheme_name(r.cfg.scheme);
        j["V"] = r.num_vertices;
        j["E"] = r.num_edges;
        j["hidden"] = r.cfg.hidden_dim;
        j["chunk_width"] = r.cfg.chunk_width;
        j["layers"] = nlohmann::ordered_json::array();
        for (const LayerTimings& lt : r.layers) {
            j["layers"].push_back({{"layer", lt.layer},
                                   {"comb_ms", lt.phases.comb_ms},
                                   {"coeff_ms", lt.phases.coeff_ms},
                                   {"agg_ms", lt.phases.agg_ms},
                                   {"concat_ms", lt.phases.concat_ms}});
        }
        if (r.conversion_ms)
            j["conversion_ms"] = *r.conversion_ms;
        else
            j["conversion_ms"] = nullptr;
        j["peak_bytes"] = r.peak_bytes;
        j["transient_peak_bytes"] = r.transient_peak_bytes;
        j["checksum"] = fmt_hex64(r.checksum);
        j["outcome"] = r.outcome;
        j["graph"] = r.graph_id;
        j["seed"] = r.seed;
        arr.push_back(std::move(j));
    }
    os << arr.dump(2) << "\n";
}

} // namespace

GraphSource GraphSource::parse(const std::string& spec) {
    GraphSource s;
    s.spec = spec;
    if (spec == "pubmed-like") {
        s.kind = Kind::Synthetic;
        s.num_vertices = 20000;
        s.avg_degree = 4.5;
        return s;
    }
    if (spec == "reddit-like") {
        s.kind = Kind::Synthetic;
        s.num_vertices = 50000;
        s.avg_degree = 200.0;
        return s;
    }
    const std::string prefix = "synthetic:";
    if (spec.rfind(prefix, 0) == 0) {
        std::string rest = spec.substr(prefix.size());
        std::size_t comma = rest.find(',');
        if (comma == std::string::npos)
            throw ValueError("synthetic graph spec must be synthetic:V,deg");
        const char* vb = rest.data();
        std::size_t vertices = 0;
        auto [vp, vec] = std::from_chars(vb, vb + comma, vertices);
        if (vec != std::errc() || vp != vb + comma || vertices == 0)
            throw ValueError("bad vertex count in graph spec: " + spec);
        std::size_t pos = 0;
        double deg = 0.0;
        std::string deg_str = rest.substr(comma + 1);
        try {
            deg = std::stod(deg_str, &pos);
        } catch (const std::exception&) {
            throw ValueError("bad average degree in graph spec: " + spec);
        }
        if (pos != deg_str.size() || deg < 0.0 || !std::isfinite(deg))
            throw ValueError("bad average degree in graph spec: " + spec);
        s.kind = Kind::Synthetic;
        s.num_vertices = vertices;
        s.avg_degree = deg;
        return s;
    }
    s.kind = Kind::File;
    s.path = spec;
    return s;
}

CooGraph gen_synthetic(std::size_t num_vertices, double avg_degree, std::uint64_t seed) {
    if (num_vertices < 1)
        throw ValueError("synthetic graph needs at least one vertex");
    if (num_vertices > std::numeric_limits<VertexId>::max())
        throw ValueError("synthetic graph exceeds the vertex index range");
    if (avg_degree < 0.0 || !std::isfinite(avg_degree))
        throw ValueError("average degree must be finite and non-negative");

    std::size_t num_edges =
        static_cast<std::size_t>(std::llround(static_cast<double>(num_vertices) * avg_degree));
    CooGraph g;
    g.num_vertices = static_cast<VertexId>(num_vertices);
    g.src.reserve(num_edges);
    g.dst.reserve(num_edges);
    XorShift64 rng = XorShift64::stream(seed, kStreamGraph);
    auto bound = static_cast<std::uint32_t>(num_vertices);
    for (std::size_t e = 0; e < num_edges; ++e) {
        g.src.push_back(rng.next_below(bound));
        g.dst.push_back(rng.next_below(bound));
    }
    return g;
}

CooGraph load_graph(const GraphSource& source, std::uint64_t seed) {
    if (source.kind == GraphSource::Kind::File)
        return load_edge_list(source.path);
    return gen_synthetic(source.num_vertices, source.avg_degree, seed);
}

RunRecord run_benchmark(const RunOptions& opt) {
    validate_config(opt.cfg);
    if (opt.reps < 1)
        throw ValueError("reps must be at least 1");

    RunRecord rec;
    rec.cfg = opt.cfg;
    rec.graph_id = opt.source.spec;
    rec.seed = opt.seed;

    MemoryLedger ledger;
    if (opt.budget_bytes)
        ledger.set_budget(*opt.budget_bytes);

    CooGraph g = load_graph(opt.source, opt.seed);
    rec.num_vertices = g.num_vertices;
    rec.num_edges = g.num_edges();

    try {
        PreparedGraph pg = prepare_graph(std::move(g), opt.cfg, ledger);

        FeatureMatrix feats = FeatureMatrix::tracked(rec.num_vertices, opt.cfg.hidden_dim,
                                                     ledger, "features");
        {
            XorShift64 rng = XorShift64::stream(opt.seed, kStreamFeatures);
            for (float& v : feats.data())
                v = rng.next_float(-1.0f, 1.0f);
        }

        std::vector<LayerWeights> weights = init_weights(opt.cfg, opt.seed);
        std::size_t weight_bytes = 0;
        for (const LayerWeights& w : weights)
            weight_bytes += w.byte_size();
        LedgerReservation weight_res(ledger, weight_bytes, "weights");

        // warm-up, untimed; also populates the normalization cache
        network_forward(pg, feats, weights, opt.cfg, ledger, nullptr);

        std::vector<std::vector<PhaseTimes>> all_reps(opt.reps);
        for (std::size_t r = 0; r < opt.reps; ++r) {
            FeatureMatrix out =
                network_forward(pg, feats, weights, opt.cfg, ledger, &all_reps[r]);
            rec.checksum = fnv1a64(out.data().data(), out.byte_size());
        }
        rec.layers = median_timings(all_reps);
        if (pg.has_csr)
            rec.conversion_ms = pg.conversion_ms;
        rec.outcome = "ok";
    } catch (const BudgetExceeded&) {
        rec.outcome = "oom";
        rec.layers.clear();
        rec.conversion_ms.reset();
        rec.checksum = 0;
    }
    rec.peak_bytes = ledger.peak_bytes();
    rec.transient_peak_bytes = ledger.transient_peak_bytes();
    return rec;
}

void emit_report(const std::vector<RunRecord>& records, ReportFormat format,
                 std::ostream& os) {
    if (records.empty())
        throw ValueError("emit_report needs at least one record");
    if (format == ReportFormat::Csv)
        write_csv(records, os);
    else
        write_json(records, os);
}

void emit_report(const std::vector<RunRecord>& records, ReportFormat format,
                 const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open report file for writing: " + path);
    emit_report(records, format, out);
    if (!out)
        throw IoError("write failed: " + path);
}

std::string format_avg_degree(double avg) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", avg);
    std::string s = buf;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, ".0") == 0)
        s.erase(s.size() - 2);
    return s;
}

std::size_t estimate_fixed_overhead(const ModelConfig& cfg, std::size_t num_vertices,
                                    std::size_t num_edges_effective) {
    const std::size_t fb = sizeof(float);
    const std::size_t hidden = cfg.hidden_dim;
    std::size_t bytes = num_edges_effective * 2 * sizeof(VertexId); // coo arrays
    if (cfg.scheme == AggregationScheme::Csr)
        bytes += (num_vertices + 1) * sizeof(std::uint64_t)
               + num_edges_effective * 2 * sizeof(std::uint32_t); // row_ptr, col_idx, edge_ids
    bytes += num_vertices * hidden * fb; // input features
    std::size_t per_layer = hidden * hidden * fb + hidden * fb;
    if (cfg.model == ModelKind::Gsc)
        per_layer += 2 * hidden * hidden * fb;
    if (cfg.model == ModelKind::Gat)
        per_layer += 2 * hidden * fb;
    bytes += cfg.num_layers * per_layer; // weights
    if (cfg.model == ModelKind::Gat)
        bytes += num_edges_effective * fb; // attention coefficients, live during aggregation
    bytes += num_vertices * hidden * fb;   // combined features
    bytes += num_vertices * hidden * fb;   // aggregation output
    if (cfg.num_layers >= 2)
        bytes += num_vertices * hidden * fb; // previous layer's output
    return bytes;
}

std::optional<std::size_t> plan_run_width(const ModelConfig& cfg, std::size_t num_vertices,
                                          std::size_t num_edges_effective,
                                          std::size_t budget_bytes) {
    std::size_t fixed = estimate_fixed_overhead(cfg, num_vertices, num_edges_effective);
    std::optional<std::size_t> w = plan_chunk_width(budget_bytes, num_edges_effective,
                                                    cfg.hidden_dim, sizeof(float), fixed);
    if (!w)
        return std::nullopt;
    if (cfg.model == ModelKind::Gsc) {
        // the concat-and-project update holds V*2H + V*H extra floats
        // after the message buffer is gone; width does not help there
        std::size_t update_moment =
            fixed + 3 * num_vertices * cfg.hidden_dim * sizeof(float);
        if (update_moment > budget_bytes)
            return std::nullopt;
    }
    return w;
}

} // namespace gnnbench
