#include <cstdio>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gnnbench/bench.hpp"

namespace {

using namespace gnnbench;

ReportFormat parse_format(const std::string& s) {
    if (s == "csv")
        return ReportFormat::Csv;
    if (s == "json")
        return ReportFormat::Json;
    throw ValueError("unknown report format: " + s);
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// flags shared by run and sweep
struct CommonArgs {
    std::string model = "gcn";
    std::string graph;
    std::size_t hidden = 32;
    std::size_t layers = 2;
    std::string scheme = "coo";
    std::optional<std::size_t> budget;
    std::size_t reps = 3;
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string format = "csv";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--model", model, "model: gcn, gsc or gat");
        cmd->add_option("--graph", graph,
                        "edge-list path, synthetic:V,deg, pubmed-like or reddit-like")
            ->required();
        cmd->add_option("--hidden", hidden, "hidden dimension (also the input width)");
        cmd->add_option("--layers", layers, "layer count");
        cmd->add_option("--scheme", scheme, "aggregation scheme: coo or csr");
        cmd->add_option("--budget-bytes", budget, "hard memory budget for tracked buffers");
        cmd->add_option("--reps", reps, "timed repetitions after one warm-up");
        cmd->add_option("--seed", seed, "seed for graph, features and weights");
        cmd->add_option("--out", out, "report path, - for stdout");
        cmd->add_option("--format", format, "report format: csv or json");
    }

    RunOptions make_options(std::size_t chunk_width) const {
        RunOptions o;
        auto m = parse_model(model);
        if (!m)
            throw ValueError("unknown model: " + model);
        auto s = parse_scheme(scheme);
        if (!s)
            throw ValueError("unknown scheme: " + scheme);
        o.cfg.model = *m;
        o.cfg.scheme = *s;
        o.cfg.num_layers = layers;
        o.cfg.hidden_dim = hidden;
        o.cfg.chunk_width = chunk_width;
        o.source = GraphSource::parse(graph);
        o.seed = seed;
        o.reps = reps;
        o.budget_bytes = budget;
        return o;
    }
};

void emit(const std::vector<RunRecord>& records, const CommonArgs& args) {
    ReportFormat fmt = parse_format(args.format);
    if (args.out == "-") {
        emit_report(records, fmt, std::cout);
        return;
    }
    emit_report(records, fmt, args.out);
    for (const RunRecord& r : records) {
        std::cout << "chunk_width " << r.cfg.chunk_width << " outcome " << r.outcome;
        if (r.outcome == "ok")
            std::cout << " checksum " << hex64(r.checksum);
        std::cout << " peak_bytes " << r.peak_bytes << " transient_peak_bytes "
                  << r.transient_peak_bytes << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"memory-budgeted GNN inference benchmark"};
    app.require_subcommand(1);

    CommonArgs run_args;
    std::size_t chunk_width = 0; // 0 means monolithic (hidden width)
    CLI::App* run_cmd = app.add_subcommand("run", "one benchmark run");
    run_args.add_to(run_cmd);
    run_cmd->add_option("--chunk-width", chunk_width,
                        "feature-axis chunk width, default hidden (monolithic)");

    CommonArgs sweep_args;
    std::vector<std::size_t> widths;
    bool parallel = false;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "one run per chunk width");
    sweep_args.add_to(sweep_cmd);
    sweep_cmd->add_option("--chunk-widths", widths, "comma-separated chunk widths")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_flag("--parallel", parallel, "run widths on separate threads");

    std::string stats_graph;
    std::uint64_t stats_seed = 1;
    CLI::App* stats_cmd = app.add_subcommand("stats", "print V, E and average degree");
    stats_cmd->add_option("--graph", stats_graph, "graph path or synthetic spec")->required();
    stats_cmd->add_option("--seed", stats_seed, "seed for synthetic graphs");

    std::string plan_graph;
    std::string plan_model = "gcn";
    std::string plan_scheme = "coo";
    std::size_t plan_budget = 0;
    std::size_t plan_hidden = 32;
    std::size_t plan_layers = 2;
    std::uint64_t plan_seed = 1;
    CLI::App* plan_cmd = app.add_subcommand("plan", "chunk width for a byte budget");
    plan_cmd->add_option("--budget-bytes", plan_budget, "hard memory budget")->required();
    plan_cmd->add_option("--graph", plan_graph, "graph path or synthetic spec")->required();
    plan_cmd->add_option("--hidden", plan_hidden, "hidden dimension");
    plan_cmd->add_option("--model", plan_model, "model: gcn, gsc or gat");
    plan_cmd->add_option("--layers", plan_layers, "layer count");
    plan_cmd->add_option("--scheme", plan_scheme, "aggregation scheme: coo or csr");
    plan_cmd->add_option("--seed", plan_seed, "seed for synthetic graphs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            std::size_t w = chunk_width == 0 ? run_args.hidden : chunk_width;
            RunRecord rec = run_benchmark(run_args.make_options(w));
            emit({rec}, run_args);
        } else if (sweep_cmd->parsed()) {
            std::vector<RunRecord> records;
            if (parallel) {
                std::vector<std::future<RunRecord>> futures;
                futures.reserve(widths.size());
                for (std::size_t w : widths) {
                    RunOptions o = sweep_args.make_options(w);
                    futures.push_back(std::async(std::launch::async,
                                                 [o] { return run_benchmark(o); }));
                }
                for (auto& f : futures)
                    records.push_back(f.get());
            } else {
                for (std::size_t w : widths)
                    records.push_back(run_benchmark(sweep_args.make_options(w)));
            }
            emit(records, sweep_args);
        } else if (stats_cmd->parsed()) {
            CooGraph g = load_graph(GraphSource::parse(stats_graph), stats_seed);
            GraphStats st = graph_stats(g);
            std::cout << st.num_vertices << " " << st.num_edges << " "
                      << format_avg_degree(st.avg_degree) << "\n";
        } else if (plan_cmd->parsed()) {
            ModelConfig cfg;
            auto m = parse_model(plan_model);
            if (!m)
                throw ValueError("unknown model: " + plan_model);
            auto s = parse_scheme(plan_scheme);
            if (!s)
                throw ValueError("unknown scheme: " + plan_scheme);
            cfg.model = *m;
            cfg.scheme = *s;
            cfg.hidden_dim = plan_hidden;
            cfg.num_layers = plan_layers;
            cfg.chunk_width = plan_hidden;
            CooGraph g = load_graph(GraphSource::parse(plan_graph), plan_seed);
            CooGraph eff = cfg.model == ModelKind::Gcn ? add_self_loops(g) : std::move(g);
            std::size_t fixed =
                estimate_fixed_overhead(cfg, eff.num_vertices, eff.num_edges());
            std::optional<std::size_t> w =
                plan_run_width(cfg, eff.num_vertices, eff.num_edges(), plan_budget);
            std::cout << "fixed_overhead_bytes " << fixed << "\n";
            if (!w) {
                std::cout << "infeasible\n";
            } else {
                ChunkPlan plan(cfg.hidden_dim, *w);
                std::cout << "chunk_width " << *w << "\n"
                          << "num_chunks " << plan.num_chunks << "\n";
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
