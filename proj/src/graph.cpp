#include "cubehom/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cubehom/errors.hpp"

namespace cubehom {

Graph Graph::from_edge_list(std::size_t num_vertices, std::span<const Edge> edges) {
    Graph g;
    g.neighbors_.assign(num_vertices, {});
    for (std::size_t v = 0; v < num_vertices; ++v) g.neighbors_[v].push_back(static_cast<VertexId>(v));
    for (const auto& [u, w] : edges) {
        if (u >= num_vertices || w >= num_vertices) {
            throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(w) +
                             ") has an endpoint outside [0, " + std::to_string(num_vertices) + ")");
        }
        if (u == w) continue;
        g.neighbors_[u].push_back(w);
        g.neighbors_[w].push_back(u);
    }
    g.words_per_row_ = (num_vertices + 63) / 64;
    g.adjacency_.assign(num_vertices * g.words_per_row_, 0);
    std::size_t degree_sum = 0;
    for (std::size_t v = 0; v < num_vertices; ++v) {
        auto& nb = g.neighbors_[v];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        degree_sum += nb.size() - 1;
        for (VertexId w : nb) g.adjacency_[v * g.words_per_row_ + (w >> 6)] |= std::uint64_t{1} << (w & 63);
    }
    g.num_edges_ = degree_sum / 2;
    return g;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (std::size_t v = 0; v < neighbors_.size(); ++v) {
        for (VertexId w : neighbors_[v]) {
            if (w > v) out.emplace_back(static_cast<VertexId>(v), w);
        }
    }
    return out;
}

Graph box_product(const Graph& g, const Graph& h) {
    const std::size_t nh = h.num_vertices();
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < g.num_vertices(); ++a) {
        for (std::size_t b = 0; b < nh; ++b) {
            const auto self = static_cast<VertexId>(a * nh + b);
            for (VertexId b2 : h.neighbors(static_cast<VertexId>(b))) {
                if (b2 > b) edges.emplace_back(self, static_cast<VertexId>(a * nh + b2));
            }
            for (VertexId a2 : g.neighbors(static_cast<VertexId>(a))) {
                if (a2 > a) edges.emplace_back(self, static_cast<VertexId>(a2 * nh + b));
            }
        }
    }
    return Graph::from_edge_list(g.num_vertices() * nh, edges);
}

Graph quotient(const Graph& g, const std::vector<std::vector<VertexId>>& classes) {
    constexpr auto unassigned = static_cast<VertexId>(-1);
    std::vector<VertexId> class_of(g.num_vertices(), unassigned);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (classes[c].empty()) throw InputError("quotient: empty class " + std::to_string(c));
        for (VertexId v : classes[c]) {
            if (v >= g.num_vertices()) throw InputError("quotient: vertex " + std::to_string(v) + " out of range");
            if (class_of[v] != unassigned) throw InputError("quotient: vertex " + std::to_string(v) + " in two classes");
            class_of[v] = static_cast<VertexId>(c);
        }
    }
    if (std::find(class_of.begin(), class_of.end(), unassigned) != class_of.end()) {
        throw InputError("quotient: classes do not cover every vertex");
    }
    std::vector<Edge> edges;
    for (const auto& [u, w] : g.edges()) edges.emplace_back(class_of[u], class_of[w]);
    return Graph::from_edge_list(classes.size(), edges);
}

Graph induced_subgraph(const Graph& g, std::span<const VertexId> keep) {
    constexpr auto dropped = static_cast<VertexId>(-1);
    std::vector<VertexId> relabel(g.num_vertices(), dropped);
    for (std::size_t i = 0; i < keep.size(); ++i) relabel[keep[i]] = static_cast<VertexId>(i);
    std::vector<Edge> edges;
    for (const auto& [u, w] : g.edges()) {
        if (relabel[u] != dropped && relabel[w] != dropped) edges.emplace_back(relabel[u], relabel[w]);
    }
    return Graph::from_edge_list(keep.size(), edges);
}

Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
    return Graph::from_edge_list(n + 1, edges);
}

Graph cycle_graph(std::size_t n) {
    if (n == 0) throw InputError("cycle graph needs at least one vertex");
    std::vector<std::vector<VertexId>> classes(n);
    for (std::size_t i = 0; i < n; ++i) classes[i].push_back(static_cast<VertexId>(i));
    classes[0].push_back(static_cast<VertexId>(n));
    return quotient(path_graph(n), classes);
}

Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
    return Graph::from_edge_list(n, edges);
}

Graph hypercube_graph(std::size_t n) {
    const std::size_t count = std::size_t{1} << n;
    std::vector<Edge> edges;
    for (std::size_t v = 0; v < count; ++v)
        for (std::size_t k = 0; k < n; ++k)
            if (!(v >> k & 1U)) edges.emplace_back(static_cast<VertexId>(v), static_cast<VertexId>(v | (std::size_t{1} << k)));
    return Graph::from_edge_list(count, edges);
}

Graph greene_sphere() {
    // a = 0, b1..b4 = 1..4, c1..c4 = 5..8, d = 9
    const std::vector<Edge> edges = {
        {0, 1}, {0, 2}, {0, 3}, {0, 4},
        {1, 5}, {1, 6}, {2, 5}, {2, 7}, {3, 6}, {3, 8}, {4, 7}, {4, 8},
        {5, 9}, {6, 9}, {7, 9}, {8, 9},
    };
    return Graph::from_edge_list(10, edges);
}

Graph c5_star() {
    std::vector<Edge> edges;
    for (VertexId i = 0; i < 5; ++i) {
        const VertexId next = (i + 1) % 5;
        edges.emplace_back(i, next);
        edges.emplace_back(5 + i, i);
        edges.emplace_back(5 + i, next);
    }
    return Graph::from_edge_list(10, edges);
}

Graph torus3() {
    const Graph i5 = path_graph(5);
    const Graph cube = box_product(box_product(i5, i5), i5);
    std::vector<std::vector<VertexId>> classes(125);
    for (VertexId i = 0; i < 6; ++i)
        for (VertexId j = 0; j < 6; ++j)
            for (VertexId k = 0; k < 6; ++k)
                classes[(i % 5) * 25 + (j % 5) * 5 + (k % 5)].push_back(i * 36 + j * 6 + k);
    return quotient(cube, classes);
}

namespace {

std::size_t parse_size(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw InputError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

} // namespace

Graph standard_graph(std::string_view name) {
    if (name == "c5") return cycle_graph(5);
    if (name == "k10") return complete_graph(10);
    if (name == "greene_sphere") return greene_sphere();
    if (name == "c5_star") return c5_star();
    if (name == "torus3") return torus3();
    const auto colon = name.find(':');
    if (colon != std::string_view::npos) {
        const auto family = name.substr(0, colon);
        const auto size = parse_size(name.substr(colon + 1), "graph size");
        if (family == "path") return path_graph(size);
        if (family == "cycle") {
            if (size < 1) throw InputError("cycle:N needs N >= 1");
            return cycle_graph(size);
        }
        if (family == "complete") {
            if (size < 1) throw InputError("complete:N needs N >= 1");
            return complete_graph(size);
        }
        if (family == "hypercube") return hypercube_graph(size);
    }
    throw InputError("unknown builtin graph '" + std::string(name) +
                     "' (expected c5, k10, greene_sphere, c5_star, torus3, path:N, cycle:N, complete:N, hypercube:N)");
}

Graph parse_graph_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t n = 0;
    std::vector<Edge> edges;
    auto fail = [&](const std::string& msg) { throw InputError("line " + std::to_string(line_no) + ": " + msg); };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string tag;
        if (!(fields >> tag) || tag[0] == '#') continue;
        std::vector<std::string> args;
        for (std::string a; fields >> a;) args.push_back(a);
        try {
            if (tag == "v") {
                if (have_header) fail("duplicate 'v' header");
                if (args.size() != 1) fail("expected 'v <num_vertices>'");
                n = parse_size(args[0], "vertex count");
                have_header = true;
            } else if (tag == "e") {
                if (!have_header) fail("edge before 'v' header");
                if (args.size() != 2) fail("expected 'e <u> <w>'");
                const auto u = parse_size(args[0], "vertex id");
                const auto w = parse_size(args[1], "vertex id");
                if (u >= n || w >= n) fail("edge " + args[0] + " " + args[1] + " out of range for " + std::to_string(n) + " vertices");
                edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(w));
            } else {
                fail("unknown record '" + tag + "'");
            }
        } catch (const InputError& e) {
            const std::string what = e.what();
            if (what.rfind("line ", 0) == 0) throw;
            fail(what);
        }
    }
    if (!have_header) throw InputError("missing 'v <num_vertices>' header");
    return Graph::from_edge_list(n, edges);
}

Graph parse_graph_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("graph JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_number_unsigned()) {
        throw InputError("graph JSON must be an object with an unsigned 'vertices' field");
    }
    const auto n = doc["vertices"].get<std::size_t>();
    std::vector<Edge> edges;
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) throw InputError("graph JSON 'edges' must be an array");
        for (const auto& e : doc["edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
                throw InputError("graph JSON edge must be a pair of unsigned ids: " + e.dump());
            }
            edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
        }
    }
    return Graph::from_edge_list(n, edges);
}

std::string format_graph_text(const Graph& g) {
    std::string out = "v " + std::to_string(g.num_vertices()) + "\n";
    for (const auto& [u, w] : g.edges()) out += "e " + std::to_string(u) + " " + std::to_string(w) + "\n";
    return out;
}

std::string format_graph_json(const Graph& g) {
    nlohmann::ordered_json doc;
    doc["vertices"] = g.num_vertices();
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [u, w] : g.edges()) edges.push_back({u, w});
    doc["edges"] = std::move(edges);
    return doc.dump() + "\n";
}

Graph read_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_graph_json(text);
    return parse_graph_text(text);
}

void write_graph(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write graph file " + path.string());
    out << format_graph_text(g);
}

} // namespace cubehom
