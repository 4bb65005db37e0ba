#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gnnbench/error.hpp"

namespace gnnbench {

using VertexId = std::uint32_t;

/// Directed graph as parallel edge arrays (coordinate form).
///
/// Edge order is significant everywhere: it fixes the floating-point
/// reduction order of every aggregation, which is what makes chunked and
/// monolithic runs bit-comparable. No operation reorders edges.
/// Duplicate edges are allowed and each contributes one message.
struct CooGraph {
    VertexId num_vertices = 0;
    std::vector<VertexId> src;
    std::vector<VertexId> dst;

    std::size_t num_edges() const { return src.size(); }

    /// Bytes of the two edge arrays, for ledger registration.
    std::size_t byte_size() const { return (src.size() + dst.size()) * sizeof(VertexId); }
};

/// Compressed sparse row form keyed by the source vertex of each edge.
/// Within a row, entries keep the relative order the edges had in the
/// CooGraph; edge_ids maps each slot back to its original edge index so
/// per-edge coefficient arrays stay aligned after conversion.
struct CsrGraph {
    VertexId num_vertices = 0;
    std::vector<std::uint64_t> row_ptr;  // length V+1
    std::vector<VertexId> col_idx;       // length E
    std::vector<std::uint32_t> edge_ids; // length E, slot -> COO edge index

    std::size_t num_edges() const { return col_idx.size(); }

    std::size_t byte_size() const {
        return row_ptr.size() * sizeof(std::uint64_t)
             + col_idx.size() * sizeof(VertexId)
             + edge_ids.size() * sizeof(std::uint32_t);
    }
};

struct DegreeVector {
    std::vector<std::uint32_t> in_degree;
    std::vector<std::uint32_t> out_degree;
};

struct GraphStats {
    VertexId num_vertices = 0;
    std::size_t num_edges = 0;
    double avg_degree = 0.0;
};

/// Reads the "V E" header plus E "u v" lines. Malformed content raises
/// ParseError with the offending 1-based line number; an index >= V
/// raises IndexOutOfRange. Exactly E edge lines are consumed.
CooGraph load_edge_list(const std::string& path);

/// Writes a graph in the load_edge_list text format.
void save_edge_list(const CooGraph& g, const std::string& path);

/// Stable counting sort by source vertex, O(V+E). Within-row order equals
/// the edge order of g, so conversion is reproducible bit for bit.
CsrGraph coo_to_csr(const CooGraph& g);

/// Same graph with every edge direction flipped; edge order preserved.
/// coo_to_csr(reversed(g)) yields the destination-indexed form the
/// segment-reduce aggregation path consumes.
CooGraph reversed(const CooGraph& g);

CooGraph reversed(CooGraph&& g);

DegreeVector compute_degrees(const CooGraph& g);

/// V, E and E/V. Raises EmptyGraphError for V = 0.
GraphStats graph_stats(const CooGraph& g);

/// Appends (v, v) for every vertex without a self-loop, after all existing
/// edges, in ascending vertex order.
CooGraph add_self_loops(const CooGraph& g);

} // namespace gnnbench
