#include "cubehom/preprocess.hpp"

#include <algorithm>

namespace cubehom {

std::optional<std::pair<VertexId, VertexId>> find_removable(const Graph& g) {
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto nv = g.neighbors(v);
        // v lies in N(v), so any witness w must be a neighbour of v.
        for (VertexId w : nv) {
            if (w == v) continue;
            const auto nw = g.neighbors(w);
            if (std::includes(nw.begin(), nw.end(), nv.begin(), nv.end())) return std::pair{v, w};
        }
    }
    return std::nullopt;
}

Reduction reduce(const Graph& g) {
    Reduction out{g, {}};
    std::vector<VertexId> labels(g.num_vertices());
    for (VertexId v = 0; v < labels.size(); ++v) labels[v] = v;
    while (auto hit = find_removable(out.graph)) {
        const auto [v, w] = *hit;
        out.trace.removed.emplace_back(labels[v], labels[w]);
        std::vector<VertexId> keep;
        keep.reserve(labels.size() - 1);
        for (VertexId u = 0; u < labels.size(); ++u)
            if (u != v) keep.push_back(u);
        out.graph = induced_subgraph(out.graph, keep);
        labels.erase(labels.begin() + v);
    }
    out.trace.survivor_map.assign(g.num_vertices(), removed_vertex);
    for (VertexId u = 0; u < labels.size(); ++u) out.trace.survivor_map[labels[u]] = u;
    return out;
}

} // namespace cubehom
