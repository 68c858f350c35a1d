#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cubehom {

using VertexId = std::uint32_t;

using Edge = std::pair<VertexId, VertexId>;

/// Finite reflexive graph on the dense vertex set [0, num_vertices).
///
/// Every vertex is adjacent to itself; loops are never listed in edge input
/// or output but always appear in neighbors(v). Adjacency is symmetric.
/// Instances are immutable once built.
class Graph {
public:
    Graph() = default;

    /// Symmetric, reflexive closure of `edges`; duplicates and explicit loops
    /// are absorbed. Throws InputError if an endpoint is out of range.
    static Graph from_edge_list(std::size_t num_vertices, std::span<const Edge> edges);

    std::size_t num_vertices() const noexcept { return neighbors_.size(); }

    /// Number of distinct non-loop edges.
    std::size_t num_edges() const noexcept { return num_edges_; }

    /// N(v), sorted ascending, including v itself.
    std::span<const VertexId> neighbors(VertexId v) const { return neighbors_[v]; }

    /// Number of neighbours other than v.
    std::size_t degree(VertexId v) const { return neighbors_[v].size() - 1; }

    bool adjacent(VertexId v, VertexId w) const noexcept {
        return (adjacency_[v * words_per_row_ + (w >> 6)] >> (w & 63)) & 1U;
    }

    /// Non-loop edges (u, w) with u < w in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph& a, const Graph& b) { return a.neighbors_ == b.neighbors_; }

private:
    std::vector<std::vector<VertexId>> neighbors_;
    std::vector<std::uint64_t> adjacency_;
    std::size_t words_per_row_ = 0;
    std::size_t num_edges_ = 0;
};

/// G □ H with (g, h) flattened to g * |H| + h.
Graph box_product(const Graph& g, const Graph& h);

/// One vertex per class (in the given order); classes are adjacent iff some
/// pair of members is. Throws InputError unless `classes` partitions the
/// vertex set.
Graph quotient(const Graph& g, const std::vector<std::vector<VertexId>>& classes);

/// Induced subgraph on `keep` (relabelled densely in the given order).
Graph induced_subgraph(const Graph& g, std::span<const VertexId> keep);

/// I_n: the path 0 - 1 - ... - n (n + 1 vertices).
Graph path_graph(std::size_t n);
/// C_n as I_n with 0 and n identified.
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
/// The discrete n-cube; vertices are bit strings, adjacent iff one bit differs.
Graph hypercube_graph(std::size_t n);
/// Apex 0, upper ring 1..4, lower ring 5..8, bottom 9.
Graph greene_sphere();
/// C_5 on 0..4 with apex 5 + i glued over the edge {i, i + 1 mod 5}.
Graph c5_star();
/// I_5^{□3} with the three wraparound identifications; vertex (i, j, k) is 25i + 5j + k.
Graph torus3();

/// Parses a builtin graph name: c5, k10, greene_sphere, c5_star, torus3,
/// path:N, cycle:N, complete:N, hypercube:N. Throws InputError otherwise.
Graph standard_graph(std::string_view name);

/// Text format: "v <n>" header then "e <u> <w>" lines, '#' comments.
/// JSON format: {"vertices": n, "edges": [[u, w], ...]}.
Graph parse_graph_text(std::string_view text);
Graph parse_graph_json(std::string_view text);
std::string format_graph_text(const Graph& g);
std::string format_graph_json(const Graph& g);

/// Reads either format, choosing JSON when the first non-space byte is '{'.
Graph read_graph(const std::filesystem::path& path);
void write_graph(const Graph& g, const std::filesystem::path& path);

} // namespace cubehom
