#include "gnnbench/graph.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <utility>

namespace gnnbench {

namespace {

// Parses an unsigned decimal token starting at pos; advances pos past it.
bool parse_u64(const std::string& line, std::size_t& pos, std::uint64_t& out) {
    const char* begin = line.data() + pos;
    const char* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr == begin) {
        return false;
    }
    pos += static_cast<std::size_t>(ptr - begin);
    return true;
}

// "u v": two decimal fields, one space, nothing else.
bool parse_pair(const std::string& line, std::uint64_t& a, std::uint64_t& b) {
    std::size_t pos = 0;
    if (!parse_u64(line, pos, a)) return false;
    if (pos >= line.size() || line[pos] != ' ') return false;
    ++pos;
    if (!parse_u64(line, pos, b)) return false;
    return pos == line.size();
}

bool read_line(std::istream& is, std::string& line) {
    if (!std::getline(is, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

} // namespace

CooGraph load_edge_list(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot open " + path);
    }

    std::string line;
    if (!read_line(is, line)) {
        throw ParseError(1, "missing header");
    }
    std::uint64_t v = 0, e = 0;
    if (!parse_pair(line, v, e)) {
        throw ParseError(1, "expected header \"V E\"");
    }
    if (v > 0x7FFFFFFFULL) {
        throw ParseError(1, "vertex count out of supported range");
    }

    CooGraph g;
    g.num_vertices = static_cast<VertexId>(v);
    g.src.reserve(e);
    g.dst.reserve(e);

    for (std::uint64_t i = 0; i < e; ++i) {
        std::size_t line_no = static_cast<std::size_t>(i) + 2;
        if (!read_line(is, line)) {
            throw ParseError(line_no, "expected edge line");
        }
        std::uint64_t u = 0, w = 0;
        if (!parse_pair(line, u, w)) {
            throw ParseError(line_no, "expected edge \"u v\"");
        }
        if (u >= v || w >= v) {
            throw IndexOutOfRange("edge (" + std::to_string(u) + ", " + std::to_string(w)
                                  + ") at line " + std::to_string(line_no)
                                  + " references a vertex >= " + std::to_string(v));
        }
        g.src.push_back(static_cast<VertexId>(u));
        g.dst.push_back(static_cast<VertexId>(w));
    }
    return g;
}

void save_edge_list(const CooGraph& g, const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        throw IoError("cannot write " + path);
    }
    os << g.num_vertices << ' ' << g.num_edges() << '\n';
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        os << g.src[i] << ' ' << g.dst[i] << '\n';
    }
    if (!os) {
        throw IoError("write failed for " + path);
    }
}

CsrGraph coo_to_csr(const CooGraph& g) {
    const std::size_t e = g.num_edges();
    CsrGraph csr;
    csr.num_vertices = g.num_vertices;
    csr.row_ptr.assign(static_cast<std::size_t>(g.num_vertices) + 1, 0);
    csr.col_idx.resize(e);
    csr.edge_ids.resize(e);

    for (std::size_t i = 0; i < e; ++i) {
        ++csr.row_ptr[g.src[i] + 1];
    }
    for (std::size_t v = 0; v < g.num_vertices; ++v) {
        csr.row_ptr[v + 1] += csr.row_ptr[v];
    }
    std::vector<std::uint64_t> next(csr.row_ptr.begin(), csr.row_ptr.end() - 1);
    for (std::size_t i = 0; i < e; ++i) {
        std::uint64_t slot = next[g.src[i]]++;
        csr.col_idx[slot] = g.dst[i];
        csr.edge_ids[slot] = static_cast<std::uint32_t>(i);
    }
    return csr;
}

CooGraph reversed(const CooGraph& g) {
    CooGraph r;
    r.num_vertices = g.num_vertices;
    r.src = g.dst;
    r.dst = g.src;
    return r;
}

CooGraph reversed(CooGraph&& g) {
    std::swap(g.src, g.dst);
    return std::move(g);
}

DegreeVector compute_degrees(const CooGraph& g) {
    DegreeVector deg;
    deg.in_degree.assign(g.num_vertices, 0);
    deg.out_degree.assign(g.num_vertices, 0);
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        ++deg.out_degree[g.src[i]];
        ++deg.in_degree[g.dst[i]];
    }
    return deg;
}

GraphStats graph_stats(const CooGraph& g) {
    if (g.num_vertices == 0) {
        throw EmptyGraphError("graph has no vertices");
    }
    GraphStats s;
    s.num_vertices = g.num_vertices;
    s.num_edges = g.num_edges();
    s.avg_degree = static_cast<double>(s.num_edges) / static_cast<double>(s.num_vertices);
    return s;
}

CooGraph add_self_loops(const CooGraph& g) {
    std::vector<bool> has_loop(g.num_vertices, false);
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        if (g.src[i] == g.dst[i]) {
            has_loop[g.src[i]] = true;
        }
    }
    CooGraph out = g;
    for (VertexId v = 0; v < g.num_vertices; ++v) {
        if (!has_loop[v]) {
            out.src.push_back(v);
            out.dst.push_back(v);
        }
    }
    return out;
}

} // namespace gnnbench
