// Acceptance gate: one pass/fail line per shipped guarantee, nonzero exit
// on any failure. Tolerances are pinned here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gnnbench/aggregate.hpp"
#include "gnnbench/bench.hpp"
#include "gnnbench/graph.hpp"
#include "gnnbench/ledger.hpp"
#include "gnnbench/model.hpp"
#include "gnnbench/rng.hpp"
#include "gnnbench/tensor.hpp"

using namespace gnnbench;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& desc, const std::string& detail = "") {
    std::printf("criterion %d %s: %s%s%s\n", n, ok ? "PASS" : "FAIL", desc.c_str(),
                detail.empty() ? "" : " ", detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool bits_equal(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    std::size_t count = a.rows() * a.cols();
    return count == 0
           || std::memcmp(a.data().data(), b.data().data(), count * sizeof(float)) == 0;
}

bool close(float a, float b, double tol) {
    return std::fabs(static_cast<double>(a) - static_cast<double>(b))
           <= tol * std::max(1.0, std::fabs(static_cast<double>(b)));
}

CooGraph random_graph(XorShift64& rng, std::size_t max_v, std::size_t max_e) {
    CooGraph g;
    g.num_vertices = static_cast<VertexId>(1 + rng.next_below(static_cast<std::uint32_t>(max_v)));
    std::size_t e = rng.next_below(static_cast<std::uint32_t>(max_e + 1));
    g.src.reserve(e);
    g.dst.reserve(e);
    for (std::size_t i = 0; i < e; ++i) {
        g.src.push_back(rng.next_below(g.num_vertices));
        g.dst.push_back(rng.next_below(g.num_vertices));
    }
    return g;
}

FeatureMatrix random_features(XorShift64& rng, std::size_t rows, std::size_t cols) {
    FeatureMatrix f(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            f.at(i, j) = rng.next_float(-1.0f, 1.0f);
    return f;
}

// Full forward pass at one chunk width; the result outlives the run ledger.
FeatureMatrix forward_at_width(const CooGraph& g, const FeatureMatrix& f,
                               const std::vector<LayerWeights>& weights, ModelConfig cfg,
                               std::size_t width) {
    cfg.chunk_width = width;
    MemoryLedger ledger;
    FeatureMatrix out = network_forward(g, f, weights, cfg, ledger);
    return out.clone();
}

// criterion 1: chunked aggregation must reproduce the monolithic forward
// pass bit for bit, whatever the model, scheme or width.
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    XorShift64 rng(101);
    bool ok = true;
    std::string detail;
    for (int c = 0; c < 200 && ok; ++c) {
        ModelConfig cfg;
        cfg.model = c % 3 == 0 ? ModelKind::Gcn : c % 3 == 1 ? ModelKind::Gsc : ModelKind::Gat;
        cfg.hidden_dim = (c / 3) % 2 == 0 ? 8 : 32;
        cfg.chunk_width = cfg.hidden_dim;
        cfg.scheme = (c / 6) % 2 == 0 ? AggregationScheme::Coo : AggregationScheme::Csr;
        cfg.num_layers = 2;
        CooGraph g = random_graph(rng, 1000, 10000);
        FeatureMatrix f = random_features(rng, g.num_vertices, cfg.hidden_dim);
        std::vector<LayerWeights> weights = init_weights(cfg, 1000 + c);
        FeatureMatrix base = forward_at_width(g, f, weights, cfg, cfg.hidden_dim);
        for (std::size_t w : {std::size_t{1}, std::size_t{3}, std::size_t{8}}) {
            if (w >= cfg.hidden_dim)
                continue;
            FeatureMatrix out = forward_at_width(g, f, weights, cfg, w);
            if (!bits_equal(out, base)) {
                ok = false;
                detail = "(mismatch at case " + std::to_string(c) + " width "
                         + std::to_string(w) + ")";
                break;
            }
        }
    }
    double dt = seconds_since(t0);
    if (ok && dt >= 120.0) {
        ok = false;
        detail = "(overran the 120s budget)";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.1fs)", dt);
    report(1, ok,
           "200 randomized forward passes are bit-identical to their monolithic runs",
           detail.empty() ? buf : detail);
}

// criterion 2: both aggregation kernels match a brute-force per-vertex
// oracle within 1e-5 relative, and each other within 1e-5.
void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    XorShift64 rng(202);
    bool ok = true;
    std::string detail;
    for (int c = 0; c < 100 && ok; ++c) {
        CooGraph g = random_graph(rng, 300, 3000);
        std::size_t width = std::size_t{1} << rng.next_below(5); // 1..16
        FeatureMatrix f = random_features(rng, g.num_vertices, width);
        auto kind = static_cast<AggregatorKind>(c % 4);
        EdgeWeights ew;
        const EdgeWeights* wptr = nullptr;
        if (kind == AggregatorKind::WeightedSum) {
            for (std::size_t e = 0; e < g.num_edges(); ++e)
                ew.coeff.push_back(rng.next_float(-1.0f, 1.0f));
            wptr = &ew;
        }

        // brute force: scan all edges per destination, ascending
        std::vector<std::size_t> deg(g.num_vertices, 0);
        for (std::size_t e = 0; e < g.num_edges(); ++e)
            ++deg[g.dst[e]];
        FeatureMatrix want(g.num_vertices, width);
        for (std::size_t v = 0; v < g.num_vertices; ++v) {
            for (std::size_t j = 0; j < width; ++j) {
                float acc = kind == AggregatorKind::Max
                                ? -std::numeric_limits<float>::infinity()
                                : 0.0f;
                for (std::size_t e = 0; e < g.num_edges(); ++e) {
                    if (g.dst[e] != v)
                        continue;
                    float x = f.at(g.src[e], j);
                    if (kind == AggregatorKind::Max)
                        acc = std::max(acc, x);
                    else if (kind == AggregatorKind::WeightedSum)
                        acc += ew.coeff[e] * x;
                    else
                        acc += x;
                }
                if (kind == AggregatorKind::Max && deg[v] == 0)
                    acc = 0.0f;
                if (kind == AggregatorKind::Mean && deg[v] > 0)
                    acc /= static_cast<float>(deg[v]);
                want.at(v, j) = acc;
            }
        }

        MemoryLedger ledger;
        FeatureMatrix coo = scatter_aggregate_coo(g, full_view(f), kind, wptr, ledger);
        CsrGraph csr = coo_to_csr(reversed(g));
        FeatureMatrix seg = segment_aggregate_csr(csr, full_view(f), kind, wptr, ledger);
        for (std::size_t v = 0; v < g.num_vertices && ok; ++v) {
            for (std::size_t j = 0; j < width; ++j) {
                if (!close(coo.at(v, j), want.at(v, j), 1e-5)
                    || !close(seg.at(v, j), want.at(v, j), 1e-5)
                    || !close(coo.at(v, j), seg.at(v, j), 1e-5)) {
                    ok = false;
                    detail = "(instance " + std::to_string(c) + " diverges at vertex "
                             + std::to_string(v) + ")";
                    break;
                }
            }
        }
    }
    double dt = seconds_since(t0);
    if (ok && dt >= 60.0) {
        ok = false;
        detail = "(overran the 60s budget)";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.1fs)", dt);
    report(2, ok, "both kernels match the brute-force oracle within 1e-5 on 100 instances",
           detail.empty() ? buf : detail);
}

// criterion 3: the transient peak is exactly E*w*4 bytes, so halving w
// halves it and the monolithic/chunked ratio is L/w.
void criterion_3() {
    bool ok = true;
    std::string detail;
    CooGraph g = gen_synthetic(10000, 100.0, 3);
    const std::size_t e = g.num_edges();
    if (e != 1000000) {
        report(3, false, "transient peak equals E*w*4 with ratio L/w",
               "(expected 1000000 edges, got " + std::to_string(e) + ")");
        return;
    }
    const std::size_t total = 32;
    XorShift64 rng(303);
    FeatureMatrix f = random_features(rng, g.num_vertices, total);

    auto transient_at = [&](std::size_t w) {
        MemoryLedger ledger;
        ChunkPlan plan(total, w);
        FeatureMatrix out = decomposed_aggregate(g, nullptr, f, plan, AggregatorKind::Sum,
                                                 nullptr, AggregationScheme::Coo, ledger);
        return ledger.transient_peak_bytes();
    };

    std::size_t mono = transient_at(total);
    if (mono != e * total * 4)
        ok = false, detail = "(monolithic transient " + std::to_string(mono) + ")";
    std::size_t w8 = transient_at(8);
    std::size_t expect8 = e * 8 * 4;
    if (w8 > expect8 + 1024 || w8 < expect8)
        ok = false, detail = "(w=8 transient " + std::to_string(w8) + ")";
    double ratio8 = static_cast<double>(mono) / static_cast<double>(w8);
    if (std::fabs(ratio8 - 4.0) > 0.01 * 4.0)
        ok = false, detail = "(w=8 ratio " + std::to_string(ratio8) + ")";
    std::size_t w1 = transient_at(1);
    double ratio1 = static_cast<double>(mono) / static_cast<double>(w1);
    if (std::fabs(ratio1 - 32.0) > 0.01 * 32.0)
        ok = false, detail = "(w=1 ratio " + std::to_string(ratio1) + ")";
    for (std::size_t w : {std::size_t{2}, std::size_t{5}, std::size_t{16}}) {
        double ratio = static_cast<double>(mono) / static_cast<double>(transient_at(w));
        double want = static_cast<double>(total) / static_cast<double>(w);
        if (std::fabs(ratio - want) > 0.01 * want) {
            ok = false;
            detail = "(w=" + std::to_string(w) + " ratio " + std::to_string(ratio) + ")";
        }
    }
    report(3, ok,
           "on E=10^6, L=32 the transient peak is exactly E*w*4 (ratio L/w within 1%)",
           detail);
}

// criterion 4: a budget below the monolithic need makes the monolithic
// run oom deterministically, while the planner's width finishes with the
// unbudgeted checksum.
void criterion_4() {
    bool ok = true;
    std::string detail;
    ModelConfig cfg;
    cfg.model = ModelKind::Gsc;
    cfg.num_layers = 2;
    cfg.hidden_dim = 32;
    cfg.chunk_width = 32;
    const std::string graph = "synthetic:2000,100";

    RunOptions opt;
    opt.cfg = cfg;
    opt.source = GraphSource::parse(graph);
    opt.seed = 13;
    opt.reps = 1;

    RunRecord fre = run_benchmark(opt);
    const std::size_t e = fre.num_edges;
    if (fre.outcome != "ok" || e != 200000) {
        report(4, false, "budget forces monolithic oom; planner width matches unbudgeted run",
               "(reference run failed)");
        return;
    }
    std::size_t fixed = fre.peak_bytes - fre.transient_peak_bytes;
    if (fixed != estimate_fixed_overhead(cfg, fre.num_vertices, e))
        ok = false, detail = "(fixed-overhead estimate drifted)";
    std::size_t budget = fixed + e * cfg.hidden_dim * 4 * 6 / 10; // 0.6 of the monolithic message

    RunOptions mono = opt;
    mono.budget_bytes = budget;
    RunRecord mrec = run_benchmark(mono);
    if (mrec.outcome != "oom")
        ok = false, detail = "(monolithic run survived the budget)";
    RunRecord mrec2 = run_benchmark(mono);
    if (mrec2.outcome != mrec.outcome || mrec2.peak_bytes != mrec.peak_bytes)
        ok = false, detail = "(oom not deterministic)";

    auto width = plan_run_width(cfg, fre.num_vertices, e, budget);
    if (!width || *width >= cfg.hidden_dim) {
        report(4, false, "budget forces monolithic oom; planner width matches unbudgeted run",
               "(planner returned no usable width)");
        return;
    }
    RunOptions planned = mono;
    planned.cfg.chunk_width = *width;
    RunRecord prec = run_benchmark(planned);
    if (prec.outcome != "ok")
        ok = false, detail = "(planned width " + std::to_string(*width) + " still oomed)";
    else if (prec.checksum != fre.checksum)
        ok = false, detail = "(planned-width checksum differs)";
    RunRecord prec2 = run_benchmark(planned);
    if (prec2.checksum != prec.checksum)
        ok = false, detail = "(planned run not deterministic)";

    report(4, ok,
           "0.6x budget: monolithic ooms, planner width passes with the unbudgeted checksum",
           detail);
}

// criterion 5: the planner never exceeds the budget it was given, and no
// wider chunk would have fit.
void criterion_5() {
    XorShift64 rng(505);
    bool ok = true;
    std::string detail;
    for (int c = 0; c < 100 && ok; ++c) {
        std::size_t e = 1 + rng.next_below(5000);
        std::size_t total = 1 + rng.next_below(64);
        std::size_t fixed = rng.next_below(100000);
        std::size_t budget = rng.next_below(2000000);
        auto w = plan_chunk_width(budget, e, total, 4, fixed);
        if (w.has_value()) {
            MemoryLedger ledger(budget);
            try {
                ledger.track_alloc(fixed, "fixed");
                ledger.track_alloc(e * *w * 4, "message", BufferClass::Transient);
            } catch (const BudgetExceeded&) {
                ok = false;
                detail = "(width " + std::to_string(*w) + " exceeded budget at case "
                         + std::to_string(c) + ")";
                break;
            }
            if (*w < total && fixed + e * (*w + 1) * 4 <= budget) {
                ok = false;
                detail = "(width " + std::to_string(*w) + " not maximal at case "
                         + std::to_string(c) + ")";
            }
        } else if (budget > fixed && fixed + e * 4 <= budget) {
            ok = false;
            detail = "(planner refused a feasible case " + std::to_string(c) + ")";
        }
    }

    // and against the real aggregation path
    for (int c = 0; c < 5 && ok; ++c) {
        CooGraph g = random_graph(rng, 200, 2000);
        if (g.num_edges() == 0)
            continue;
        std::size_t total = 8 + rng.next_below(25);
        FeatureMatrix f = random_features(rng, g.num_vertices, total);
        std::size_t fixed = g.num_vertices * total * 4; // the tracked output
        std::size_t budget = fixed + g.num_edges() * (1 + rng.next_below(static_cast<std::uint32_t>(total))) * 4;
        auto w = plan_chunk_width(budget, g.num_edges(), total, 4, fixed);
        if (!w.has_value()) {
            ok = false;
            detail = "(planner refused a budget that fits width 1)";
            break;
        }
        MemoryLedger ledger(budget);
        try {
            ChunkPlan plan(total, *w);
            decomposed_aggregate(g, nullptr, f, plan, AggregatorKind::Sum, nullptr,
                                 AggregationScheme::Coo, ledger);
        } catch (const BudgetExceeded&) {
            ok = false;
            detail = "(planned width oomed on a real aggregation)";
        }
    }
    report(5, ok, "planned widths never trip the budget and are maximal on 100 triples",
           detail);
}

// criterion 6: with average degree 200 the aggregation phase costs more
// than the combination phase in every layer.
void criterion_6() {
    RunOptions opt;
    opt.cfg.model = ModelKind::Gcn;
    opt.cfg.num_layers = 2;
    opt.cfg.hidden_dim = 32;
    opt.cfg.chunk_width = 32;
    opt.source = GraphSource::parse("synthetic:3000,200");
    opt.seed = 2;
    opt.reps = 3;
    RunRecord rec = run_benchmark(opt);
    bool ok = rec.outcome == "ok" && !rec.layers.empty();
    std::string detail;
    std::ostringstream ratios;
    for (const LayerTimings& lt : rec.layers) {
        if (lt.phases.agg_ms <= lt.phases.comb_ms) {
            ok = false;
            detail = "(layer " + std::to_string(lt.layer) + ": agg "
                     + std::to_string(lt.phases.agg_ms) + "ms vs comb "
                     + std::to_string(lt.phases.comb_ms) + "ms)";
        }
        if (lt.phases.comb_ms > 0.0) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%s%.1fx", ratios.str().empty() ? "" : ", ",
                          lt.phases.agg_ms / lt.phases.comb_ms);
            ratios << buf;
        }
    }
    report(6, ok, "aggregation outweighs combination in every layer at average degree 200",
           detail.empty() ? "(agg/comb " + ratios.str() + ")" : detail);
}

// criterion 7: csr runs report a positive, separately timed conversion.
void criterion_7() {
    RunOptions opt;
    opt.cfg.model = ModelKind::Gcn;
    opt.cfg.num_layers = 2;
    opt.cfg.hidden_dim = 32;
    opt.cfg.chunk_width = 32;
    opt.cfg.scheme = AggregationScheme::Csr;
    opt.source = GraphSource::parse("synthetic:3000,200");
    opt.seed = 2;
    opt.reps = 1;
    RunRecord rec = run_benchmark(opt);
    bool ok = rec.outcome == "ok" && rec.conversion_ms.has_value() && *rec.conversion_ms > 0.0;
    std::string detail;
    if (rec.conversion_ms.has_value()) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "(conversion %.3fms)", *rec.conversion_ms);
        detail = buf;
    }
    report(7, ok, "csr runs carry a positive conversion_ms field", detail);
}

// criterion 8: the stats pipeline reports V, E and average degree exactly,
// for an edge-list file shaped like Pubmed and for both presets.
void criterion_8() {
    bool ok = true;
    std::string detail;

    CooGraph pubmed = gen_synthetic(19717, 88676.0 / 19717.0, 8);
    const std::string path = "acceptance_pubmed_edges.txt";
    save_edge_list(pubmed, path);
    CooGraph loaded = load_graph(GraphSource::parse(path), 1);
    GraphStats st = graph_stats(loaded);
    std::ostringstream line;
    line << st.num_vertices << " " << st.num_edges << " " << format_avg_degree(st.avg_degree);
    if (line.str() != "19717 88676 4.5")
        ok = false, detail = "(file stats line \"" + line.str() + "\")";
    std::remove(path.c_str());

    GraphStats pm = graph_stats(load_graph(GraphSource::parse("pubmed-like"), 1));
    if (pm.num_vertices != 20000 || pm.num_edges != 90000
        || format_avg_degree(pm.avg_degree) != "4.5")
        ok = false, detail = "(pubmed-like preset drifted)";
    GraphStats rd = graph_stats(load_graph(GraphSource::parse("reddit-like"), 1));
    if (rd.num_vertices != 50000 || rd.num_edges != 10000000
        || format_avg_degree(rd.avg_degree) != "200")
        ok = false, detail = "(reddit-like preset drifted)";

    report(8, ok, "stats report V, E and average degree exactly for files and presets",
           detail);
}

// criterion 9: chunk/concat round-trips and ledger conservation hold over
// 1000 randomized iterations each.
void criterion_9() {
    auto t0 = std::chrono::steady_clock::now();
    XorShift64 rng(909);
    bool ok = true;
    std::string detail;

    for (int c = 0; c < 1000 && ok; ++c) {
        std::size_t total = 1 + rng.next_below(64);
        std::size_t w = 1 + rng.next_below(static_cast<std::uint32_t>(total));
        std::size_t rows = 1 + rng.next_below(50);
        FeatureMatrix f = random_features(rng, rows, total);
        ChunkPlan plan(total, w);
        std::vector<FeatureView> views = chunk_features(f, plan);
        std::vector<FeatureMatrix> parts;
        for (const FeatureView& view : views) {
            FeatureMatrix part(rows, view.width);
            for (std::size_t i = 0; i < rows; ++i)
                std::memcpy(part.row(i), view.row(i), view.width * sizeof(float));
            parts.push_back(std::move(part));
        }
        FeatureMatrix back = concat_chunks(parts, plan);
        if (!bits_equal(back, f)) {
            ok = false;
            detail = "(chunk/concat mismatch at iteration " + std::to_string(c) + ")";
        }
    }

    for (int c = 0; c < 1000 && ok; ++c) {
        MemoryLedger ledger;
        std::vector<std::pair<std::size_t, BufferClass>> live;
        std::size_t current = 0, peak = 0;
        for (int step = 0; step < 40; ++step) {
            bool do_alloc = live.empty() || rng.next_below(2) == 0;
            if (do_alloc) {
                std::size_t bytes = rng.next_below(10000);
                auto cls = rng.next_below(2) == 0 ? BufferClass::Persistent
                                                  : BufferClass::Transient;
                ledger.track_alloc(bytes, "x", cls);
                live.emplace_back(bytes, cls);
                current += bytes;
                peak = std::max(peak, current);
            } else {
                std::size_t pick = rng.next_below(static_cast<std::uint32_t>(live.size()));
                ledger.track_free(live[pick].first, "x", live[pick].second);
                current -= live[pick].first;
                live.erase(live.begin() + static_cast<std::ptrdiff_t>(pick));
            }
            if (ledger.current_bytes() != current || ledger.peak_bytes() != peak) {
                ok = false;
                detail = "(ledger drifted at iteration " + std::to_string(c) + ")";
                break;
            }
        }
        for (auto& [bytes, cls] : live)
            ledger.track_free(bytes, "x", cls);
        if (ledger.current_bytes() != 0 || ledger.transient_current_bytes() != 0) {
            ok = false;
            detail = "(ledger not conserved at iteration " + std::to_string(c) + ")";
        }
    }

    double dt = seconds_since(t0);
    if (ok && dt >= 60.0) {
        ok = false;
        detail = "(overran the 60s budget)";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.1fs)", dt);
    report(9, ok,
           "1000-iteration chunk/concat identity and ledger conservation suites hold",
           detail.empty() ? buf : detail);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
