#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cubehom/graph.hpp"

namespace cubehom {

inline constexpr std::int64_t removed_vertex = -1;

struct ReductionTrace {
    /// (v, w) in original labels, in removal order; N(v) was a subset of N(w)
    /// when v was removed.
    std::vector<std::pair<VertexId, VertexId>> removed;
    /// Original vertex -> reduced vertex, or removed_vertex.
    std::vector<std::int64_t> survivor_map;
};

/// The lexicographically least (v, w), v != w, with N(v) a subset of N(w).
std::optional<std::pair<VertexId, VertexId>> find_removable(const Graph& g);

struct Reduction {
    Graph graph;
    ReductionTrace trace;
};

/// Removes removable vertices one at a time, rescanning from scratch after
/// each removal, until none is left.
Reduction reduce(const Graph& g);

} // namespace cubehom
