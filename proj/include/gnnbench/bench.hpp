#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gnnbench/graph.hpp"
#include "gnnbench/model.hpp"

namespace gnnbench {

/// Graph argument of the CLI: an edge-list file path, "synthetic:V,deg",
/// or one of the presets "pubmed-like" (V=20000, deg 4.5) and
/// "reddit-like" (V=50000, deg 200).
struct GraphSource {
    enum class Kind { File, Synthetic };
    Kind kind = Kind::Synthetic;
    std::string spec;            // the original argument, used as graph id
    std::string path;            // File only
    std::size_t num_vertices = 0;
    double avg_degree = 0.0;

    static GraphSource parse(const std::string& spec);
};

/// round(V * avg_degree) directed edges with endpoints uniform over the
/// vertices, reproducible from the seed. Self-loops and duplicate edges
/// may occur (multigraph semantics).
CooGraph gen_synthetic(std::size_t num_vertices, double avg_degree, std::uint64_t seed);

CooGraph load_graph(const GraphSource& source, std::uint64_t seed);

struct RunOptions {
    ModelConfig cfg;
    GraphSource source;
    std::uint64_t seed = 1;
    std::size_t reps = 3;
    std::optional<std::size_t> budget_bytes;
};

struct LayerTimings {
    std::size_t layer = 0;
    PhaseTimes phases;
};

struct RunRecord {
    ModelConfig cfg;
    std::string graph_id;
    std::uint64_t seed = 0;
    std::size_t num_vertices = 0;
    std::size_t num_edges = 0;           // as loaded, before any self-loops
    std::vector<LayerTimings> layers;    // empty when outcome is oom
    std::optional<double> conversion_ms; // csr runs only
    std::size_t peak_bytes = 0;
    std::size_t transient_peak_bytes = 0;
    std::uint64_t checksum = 0;          // fnv1a64 over the result bytes
    std::string outcome;                 // "ok" | "oom"
};

/// One untimed warm-up pass, then `reps` timed forward passes; per-phase
/// times are medians across the timed passes. Graph features and weights
/// are generated from the seed. A BudgetExceeded anywhere in the run
/// becomes outcome "oom" with empty layer timings, never a crash.
RunRecord run_benchmark(const RunOptions& opt);

enum class ReportFormat { Csv, Json };

/// CSV: fixed header, one row per layer, a single row with empty layer
/// and timing fields for an oom run. JSON mirrors the rows and adds the
/// remaining run-record fields. Identical records serialize to identical
/// bytes.
void emit_report(const std::vector<RunRecord>& records, ReportFormat format,
                 std::ostream& os);
void emit_report(const std::vector<RunRecord>& records, ReportFormat format,
                 const std::string& path);

/// One decimal place with a trailing ".0" dropped: 4.4975 -> "4.5",
/// 200.0 -> "200".
std::string format_avg_degree(double avg);

/// Persistent bytes the engine holds while a layer's aggregation runs,
/// given the effective (post-self-loop) graph size. This is the
/// fixed_overhead term the chunk-width planner subtracts from the budget.
std::size_t estimate_fixed_overhead(const ModelConfig& cfg, std::size_t num_vertices,
                                    std::size_t num_edges_effective);

/// Widest chunk width that keeps a whole run inside budget_bytes, or
/// nullopt when no width does.
std::optional<std::size_t> plan_run_width(const ModelConfig& cfg, std::size_t num_vertices,
                                          std::size_t num_edges_effective,
                                          std::size_t budget_bytes);

} // namespace gnnbench
