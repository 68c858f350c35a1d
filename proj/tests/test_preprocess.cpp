#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cubehom/pipeline.hpp"
#include "cubehom/preprocess.hpp"
#include "oracle.hpp"

using namespace cubehom;

namespace {

bool contained(const Graph& g, VertexId v, VertexId w, const std::set<VertexId>& alive) {
    for (VertexId x : g.neighbors(v))
        if (alive.count(x) && !g.adjacent(w, x)) return false;
    return true;
}

// Replays the trace on the original labels and checks every removal.
void check_trace(const Graph& g, const Reduction& r) {
    std::set<VertexId> alive;
    for (VertexId v = 0; v < g.num_vertices(); ++v) alive.insert(v);
    for (const auto& [v, w] : r.trace.removed) {
        REQUIRE(v != w);
        REQUIRE(alive.count(v));
        REQUIRE(alive.count(w));
        REQUIRE(contained(g, v, w, alive));
        alive.erase(v);
    }
    REQUIRE(r.trace.survivor_map.size() == g.num_vertices());
    std::vector<VertexId> keep(r.graph.num_vertices());
    std::int64_t next = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto target = r.trace.survivor_map[v];
        if (alive.count(v)) {
            REQUIRE(target == next);
            keep[static_cast<std::size_t>(target)] = v;
            ++next;
        } else {
            REQUIRE(target == removed_vertex);
        }
    }
    REQUIRE(static_cast<std::size_t>(next) == r.graph.num_vertices());
    CHECK(induced_subgraph(g, keep) == r.graph);
}

Graph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
    std::bernoulli_distribution edge(p);
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId w = u + 1; w < n; ++w)
            if (edge(rng)) edges.emplace_back(u, w);
    return Graph::from_edge_list(n, edges);
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("find_removable examples") {
    const auto k10 = find_removable(complete_graph(10));
    REQUIRE(k10);
    CHECK(*k10 == std::pair<VertexId, VertexId>{0, 1});
    CHECK_FALSE(find_removable(cycle_graph(5)));
    CHECK_FALSE(find_removable(complete_graph(1)));

    const auto star = c5_star();
    const auto hit = find_removable(star);
    REQUIRE(hit);
    const auto [v, w] = *hit;
    CHECK(v >= 5);
    CHECK(w < 5);
    // The apex over {x, y} has N = {apex, x, y}, contained in N(x) because x ~ y.
    for (VertexId x : star.neighbors(v)) CHECK(star.adjacent(w, x));

    const auto path = find_removable(path_graph(3));
    REQUIRE(path);
    CHECK(*path == std::pair<VertexId, VertexId>{0, 1});
}

TEST_CASE("find_removable is the lexicographic minimum") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_graph(rng, 2 + rng() % 8, 0.4);
        std::optional<std::pair<VertexId, VertexId>> best;
        std::set<VertexId> all;
        for (VertexId v = 0; v < g.num_vertices(); ++v) all.insert(v);
        for (VertexId v = 0; v < g.num_vertices() && !best; ++v)
            for (VertexId w = 0; w < g.num_vertices() && !best; ++w)
                if (v != w && contained(g, v, w, all)) best = std::pair{v, w};
        CHECK(find_removable(g) == best);
    }
}

TEST_CASE("reduce examples") {
    const auto k10 = reduce(complete_graph(10));
    CHECK(k10.graph.num_vertices() == 1);
    CHECK(k10.trace.removed.size() == 9);

    const auto star = reduce(c5_star());
    CHECK(star.graph.num_vertices() == 5);
    CHECK(oracle::isomorphic(star.graph, cycle_graph(5)));

    const auto c5 = reduce(cycle_graph(5));
    CHECK(c5.graph == cycle_graph(5));
    CHECK(c5.trace.removed.empty());

    CHECK(reduce(path_graph(6)).graph.num_vertices() == 1);
    CHECK(reduce(greene_sphere()).graph.num_vertices() == 10);
}

TEST_CASE("reduce is idempotent and its trace is valid") {
    std::mt19937_64 rng(31);
    std::vector<Graph> graphs;
    for (const auto& [name, g] : oracle::connected_graphs(5)) graphs.push_back(g);
    for (int trial = 0; trial < 100; ++trial) graphs.push_back(random_graph(rng, 3 + rng() % 8, 0.35));
    for (const auto* name : {"k10", "c5_star", "greene_sphere", "torus3"}) graphs.push_back(standard_graph(name));
    for (const auto& g : graphs) {
        const auto r = reduce(g);
        check_trace(g, r);
        CHECK(r.trace.removed.size() + r.graph.num_vertices() == g.num_vertices());
        CHECK(r.graph.num_vertices() >= 1);
        CHECK_FALSE(find_removable(r.graph));
        CHECK(reduce(r.graph).trace.removed.empty());
    }
}

TEST_CASE("reduction preserves the Betti profile on the corpus") {
    HomologyOptions on, off;
    off.preprocess = false;
    for (const auto& [name, g] : oracle::connected_graphs(5)) {
        CAPTURE(name);
        CHECK(betti_profile(reduce(g).graph, 2, off) == betti_profile(g, 2, off));
        CHECK(betti_profile(g, 2, on) == betti_profile(g, 2, off));
    }
}

}
