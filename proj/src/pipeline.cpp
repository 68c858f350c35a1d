#include "cubehom/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "cubehom/boundary.hpp"
#include "cubehom/cube_template.hpp"
#include "cubehom/errors.hpp"
#include "cubehom/preprocess.hpp"

namespace cubehom {

namespace {

using Clock = std::chrono::steady_clock;

class Timings {
public:
    void add(const std::string& phase, Clock::time_point since) {
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - since).count();
        for (auto& [name, total] : entries_) {
            if (name == phase) {
                total += ms;
                return;
            }
        }
        entries_.emplace_back(phase, ms);
    }
    std::vector<std::pair<std::string, double>> take() { return std::move(entries_); }

private:
    std::vector<std::pair<std::string, double>> entries_;
};

struct RunResult {
    std::vector<CellCount> counts;
    /// ranks[d] = rank d_d; ranks[0] = 0. Entries not computed stay 0.
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> kept;
    bool shortcircuit = false;
};

void check_dimension(int n) {
    if (n < 0) throw InputError("dimension must be non-negative");
    if (n + 1 > max_template_dimension) {
        throw InputError("dimension " + std::to_string(n) + " needs cube templates beyond dimension " +
                         std::to_string(max_template_dimension));
    }
}

std::string mib(long double bytes) {
    std::ostringstream s;
    s.precision(1);
    s << std::fixed << bytes / (1024.0L * 1024.0L) << " MiB";
    return s.str();
}

// Projects the size of dimension d from the growth ratio of the two previous
// dimensions and refuses when storing it would exceed the budget.
void guard_projection(int d, const std::vector<CellCount>& counts, std::uint64_t budget, long double bytes_per_item,
                      const char* what) {
    if (d < 2 || counts.size() < 2) return;
    const long double a = static_cast<long double>(counts[counts.size() - 2].total);
    const long double b = static_cast<long double>(counts.back().total);
    if (a <= 0) return;
    const long double projected = b * (b / a);
    const long double bytes = projected * bytes_per_item;
    if (bytes > static_cast<long double>(budget)) {
        std::ostringstream msg;
        msg.precision(0);
        msg << std::fixed << "resource guard: projected " << projected << ' ' << what << " in dimension " << d
            << " (growth " << a << " -> " << b << ") need about " << mib(bytes) << ", over the budget of "
            << mib(static_cast<long double>(budget));
        throw ResourceError(msg.str());
    }
}

void guard_dictionary(int d, std::size_t kept, std::size_t group, std::uint64_t budget) {
    const long double width = static_cast<long double>(std::size_t{1} << d);
    const long double bytes = static_cast<long double>(kept) * static_cast<long double>(group) * (4 * width + 24);
    if (bytes > static_cast<long double>(budget)) {
        throw ResourceError("resource guard: coordinate dictionary for " + std::to_string(kept) +
                            " classes in dimension " + std::to_string(d) + " needs about " + mib(bytes) +
                            ", over the budget of " + mib(static_cast<long double>(budget)));
    }
}

long double class_bytes(int d) {
    const long double width = static_cast<long double>(std::size_t{1} << d);
    return 2 * 4 * width + 64;
}

std::vector<CubeClass> generate_classes(const std::vector<CubeClass>& prev, int d, const Graph& g,
                                        const std::vector<CellCount>& counts, const HomologyOptions& opts) {
    guard_projection(d, counts, opts.memory_budget, class_bytes(d), "classes");
    return next_dimension_classes(prev, g, cube_template(d - 1)->action, cube_template(d)->action, opts.threads);
}

void dump(const HomologyOptions& opts, int d, const SparseRationalMatrix& m) {
    if (!opts.dump_prefix) return;
    auto path = *opts.dump_prefix;
    path += "_d" + std::to_string(d) + ".mtx";
    write_matrix_market(m, path);
}

RankOptions rank_options(const HomologyOptions& opts, std::optional<std::size_t> bound) {
    RankOptions r;
    r.update = opts.update;
    r.rank_bound = bound;
    return r;
}

// Streams the top matrix into a rank computation, materialising it only when
// it has to be dumped.
template <class Stream>
std::size_t streamed_rank(const HomologyOptions& opts, int d, std::size_t rows, std::size_t bound, Stream&& stream) {
    if (opts.dump_prefix) {
        MatrixSink sink(rows);
        stream(sink, false);
        dump(opts, d, sink.matrix());
        return rank(sink.matrix(), rank_options(opts, bound));
    }
    RankSink sink(rows, rank_options(opts, bound));
    stream(sink, true);
    return sink.rank();
}

RunResult run_quotient(const Graph& g, int top, bool all_ranks, const HomologyOptions& opts, Timings& timings) {
    RunResult r;
    r.ranks.assign(top + 2, 0);
    std::vector<CubeClass> all = zero_classes(g);
    std::vector<CubeClass> kept = all;
    r.counts.push_back({0, all.size(), kept.size()});
    r.kept.push_back(kept.size());
    for (int d = 1; d <= top; ++d) {
        auto start = Clock::now();
        auto next_all = generate_classes(all, d, g, r.counts, opts);
        auto next_kept = remove_semi_degenerate(next_all, cube_template(d)->action);
        timings.add("classes", start);
        r.counts.push_back({d, next_all.size(), next_kept.size()});
        r.kept.push_back(next_kept.size());
        if (all_ranks || d == top) {
            start = Clock::now();
            const auto lower = cube_template(d - 1);
            guard_dictionary(d - 1, kept.size(), lower->action.size(), opts.memory_budget);
            const auto dict = build_dictionary(kept, lower->action);
            const auto m = build_matrix(next_kept, dict, cube_template(d)->faces, kept.size());
            timings.add("boundary", start);
            dump(opts, d, m);
            start = Clock::now();
            const std::size_t bound = r.kept[d - 1] - r.ranks[d - 1];
            r.ranks[d] = rank(m, rank_options(opts, bound));
            timings.add("rank", start);
        }
        all = std::move(next_all);
        kept = std::move(next_kept);
    }
    auto start = Clock::now();
    const auto lower = cube_template(top);
    const auto upper = cube_template(top + 1);
    guard_dictionary(top, kept.size(), lower->action.size(), opts.memory_budget);
    const auto dict = build_dictionary(kept, lower->action);
    timings.add("boundary", start);
    r.shortcircuit = top >= 1 && (top + 1 <= 3 || opts.assume_conjecture);
    const std::size_t bound = r.kept[top] - r.ranks[top];
    start = Clock::now();
    r.ranks[top + 1] = streamed_rank(opts, top + 1, kept.size(), bound, [&](ColumnSink& sink, bool stop) {
        stream_top(all, dict, g, *lower, *upper, {r.shortcircuit, opts.threads, stop}, sink);
    });
    timings.add("stream", start);
    return r;
}

RunResult run_plain(const Graph& g, int top, bool all_ranks, const HomologyOptions& opts, Timings& timings) {
    RunResult r;
    r.ranks.assign(top + 2, 0);
    std::vector<SingularCube> cubes = zero_cubes(g);
    r.counts.push_back({0, cubes.size(), cubes.size()});
    r.kept.push_back(cubes.size());
    auto nondegenerate = [](const std::vector<SingularCube>& c) {
        return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](const auto& x) { return !x.is_degenerate(); }));
    };
    for (int d = 1; d <= top; ++d) {
        auto start = Clock::now();
        guard_projection(d, r.counts, opts.memory_budget, static_cast<long double>((std::size_t{4} << d) + 48), "cubes");
        auto next = next_dimension(cubes, g, opts.threads);
        timings.add("cubes", start);
        r.counts.push_back({d, next.size(), nondegenerate(next)});
        r.kept.push_back(r.counts.back().kept);
        if (all_ranks || d == top) {
            start = Clock::now();
            const auto dict = build_plain_dictionary(cubes);
            const auto m = build_plain_matrix(next, dict, cube_template(d)->faces, r.kept[d - 1]);
            timings.add("boundary", start);
            dump(opts, d, m);
            start = Clock::now();
            r.ranks[d] = rank(m, rank_options(opts, r.kept[d - 1] - r.ranks[d - 1]));
            timings.add("rank", start);
        }
        cubes = std::move(next);
    }
    auto start = Clock::now();
    const auto dict = build_plain_dictionary(cubes);
    const auto upper = cube_template(top + 1);
    const std::size_t bound = r.kept[top] - r.ranks[top];
    r.ranks[top + 1] = streamed_rank(opts, top + 1, r.kept[top], bound, [&](ColumnSink& sink, bool stop) {
        stream_top_plain(cubes, dict, g, upper->faces, {false, opts.threads, stop}, sink);
    });
    timings.add("stream", start);
    return r;
}

// Oracle helpers: faces by direct bit insertion and ordered-map indexing,
// sharing nothing with the template machinery.
std::vector<VertexId> naive_face(const std::vector<VertexId>& cube, int i, unsigned bit_value) {
    std::vector<VertexId> face(cube.size() / 2);
    const std::size_t low_mask = (std::size_t{1} << (i - 1)) - 1;
    for (std::size_t j = 0; j < face.size(); ++j) {
        const std::size_t index = (j & low_mask) | (static_cast<std::size_t>(bit_value) << (i - 1)) | ((j & ~low_mask) << 1);
        face[j] = cube[index];
    }
    return face;
}

SparseRationalMatrix naive_matrix(const std::vector<SingularCube>& hi, const std::vector<SingularCube>& lo, int d) {
    std::map<std::vector<VertexId>, std::uint32_t> index;
    for (const auto& c : lo)
        if (!c.is_degenerate()) index.emplace(c.vertices, static_cast<std::uint32_t>(index.size()));
    SparseRationalMatrix m(index.size());
    for (const auto& c : hi) {
        if (c.is_degenerate()) continue;
        SparseColumn col;
        for (int i = 1; i <= d; ++i) {
            const int s = (i % 2 == 0) ? 1 : -1;
            if (auto it = index.find(naive_face(c.vertices, i, 0)); it != index.end()) col.push_back({it->second, Rational(s)});
            if (auto it = index.find(naive_face(c.vertices, i, 1)); it != index.end()) col.push_back({it->second, Rational(-s)});
        }
        m.push_column(std::move(col));
    }
    return m;
}

// Refuses before enumerating when the largest dimension is over the cap or
// cannot fit the budget. Maps are bounded by |V| (max degree + 1)^(2^d - 1).
void guard_naive(const Graph& g, int d, const HomologyOptions& opts) {
    const long double size = static_cast<long double>(std::size_t{1} << d);
    const long double v = static_cast<long double>(g.num_vertices());
    if (std::pow(v, size) > static_cast<long double>(opts.naive_cap)) {
        throw InputError("naive enumeration of " + std::to_string(g.num_vertices()) + "^" +
                         std::to_string(std::size_t{1} << d) + " vertex assignments exceeds the cap of " +
                         std::to_string(opts.naive_cap) + "; use the pairing pipeline instead");
    }
    std::size_t max_degree = 0;
    for (VertexId x = 0; x < g.num_vertices(); ++x) max_degree = std::max(max_degree, g.degree(x));
    const long double maps = std::min(std::pow(v, size), v * std::pow(static_cast<long double>(max_degree + 1), size - 1));
    const long double bytes = maps * (4 * size + 48);
    if (bytes > static_cast<long double>(opts.memory_budget)) {
        std::ostringstream msg;
        msg.precision(0);
        msg << std::fixed << "resource guard: up to " << maps << " graph maps in dimension " << d << " need about "
            << mib(bytes) << ", over the budget of " << mib(static_cast<long double>(opts.memory_budget));
        throw ResourceError(msg.str());
    }
}

RunResult run_naive(const Graph& g, int top, const HomologyOptions& opts, Timings& timings) {
    guard_naive(g, top + 1, opts);
    RunResult r;
    r.ranks.assign(top + 2, 0);
    std::vector<SingularCube> lo;
    for (int d = 0; d <= top + 1; ++d) {
        auto start = Clock::now();
        auto hi = naive_maps(g, d, opts.naive_cap);
        timings.add("cubes", start);
        const std::size_t nondeg =
            static_cast<std::size_t>(std::count_if(hi.begin(), hi.end(), [](const auto& c) { return !c.is_degenerate(); }));
        if (d <= top) {
            r.counts.push_back({d, hi.size(), nondeg});
            r.kept.push_back(nondeg);
        }
        if (d >= 1) {
            start = Clock::now();
            const auto m = naive_matrix(hi, lo, d);
            timings.add("boundary", start);
            dump(opts, d, m);
            start = Clock::now();
            r.ranks[d] = rank(m, rank_options(opts, std::nullopt));
            timings.add("rank", start);
        }
        lo = std::move(hi);
    }
    return r;
}

struct Prepared {
    Graph graph;
    GraphSummary summary;
};

Prepared prepare(const Graph& g, const HomologyOptions& opts, Timings& timings) {
    const auto start = Clock::now();
    Prepared p{opts.preprocess ? reduce(g).graph : g, {}};
    p.summary = {g.num_vertices(), g.num_edges(), p.graph.num_vertices(), p.graph.num_edges()};
    timings.add("preprocess", start);
    return p;
}

RunResult run(const Graph& g, int top, bool all_ranks, const HomologyOptions& opts, Timings& timings) {
    switch (opts.method()) {
    case Method::naive: return run_naive(g, top, opts, timings);
    case Method::plain: return run_plain(g, top, all_ranks, opts, timings);
    case Method::quotient: break;
    }
    return run_quotient(g, top, all_ranks, opts, timings);
}

} // namespace

HomologyResult homology(const Graph& g, int n, const HomologyOptions& opts) {
    check_dimension(n);
    const auto start = Clock::now();
    Timings timings;
    const auto prepared = prepare(g, opts, timings);
    const auto r = run(prepared.graph, n, false, opts, timings);
    HomologyResult out;
    out.graph = prepared.summary;
    out.dimension = n;
    out.kernel_dim = r.kept[n] - r.ranks[n];
    out.image_rank = r.ranks[n + 1];
    if (out.image_rank > out.kernel_dim) throw InvariantError("image rank exceeds kernel dimension");
    out.betti = out.kernel_dim - out.image_rank;
    out.counts = r.counts;
    out.options = opts;
    out.shortcircuit = r.shortcircuit;
    timings.add("total", start);
    out.timings_ms = timings.take();
    return out;
}

ProfileResult profile(const Graph& g, int max_n, const HomologyOptions& opts) {
    check_dimension(max_n);
    const auto start = Clock::now();
    Timings timings;
    const auto prepared = prepare(g, opts, timings);
    const auto r = run(prepared.graph, max_n, true, opts, timings);
    ProfileResult out;
    out.graph = prepared.summary;
    out.max_dimension = max_n;
    for (int d = 0; d <= max_n; ++d) {
        const std::size_t ker = r.kept[d] - r.ranks[d];
        if (r.ranks[d + 1] > ker) throw InvariantError("image rank exceeds kernel dimension");
        out.betti.push_back(ker - r.ranks[d + 1]);
    }
    out.counts = r.counts;
    out.options = opts;
    out.shortcircuit = r.shortcircuit;
    timings.add("total", start);
    out.timings_ms = timings.take();
    return out;
}

std::vector<std::size_t> betti_profile(const Graph& g, int max_n, const HomologyOptions& opts) {
    return profile(g, max_n, opts).betti;
}

std::size_t naive_homology(const Graph& g, int n, std::uint64_t cap) {
    check_dimension(n);
    HomologyOptions opts;
    opts.preprocess = false;
    opts.naive = true;
    opts.naive_cap = cap;
    return homology(g, n, opts).betti;
}

VerifyResult verify_shortcircuit(const Graph& g, int n, unsigned threads, std::uint64_t memory_budget) {
    if (n < 1) throw InputError("verify needs dimension >= 1");
    check_dimension(n - 1);
    HomologyOptions opts;
    opts.threads = threads;
    opts.memory_budget = memory_budget;
    std::vector<CellCount> counts;
    std::vector<CubeClass> all = zero_classes(g);
    std::vector<CubeClass> kept = all;
    counts.push_back({0, all.size(), kept.size()});
    std::size_t bound = kept.size();
    for (int d = 1; d <= n - 1; ++d) {
        auto next_all = generate_classes(all, d, g, counts, opts);
        auto next_kept = remove_semi_degenerate(next_all, cube_template(d)->action);
        counts.push_back({d, next_all.size(), next_kept.size()});
        if (d == n - 1) {
            const auto lower = cube_template(d - 1);
            const auto dict = build_dictionary(kept, lower->action);
            const auto m = build_matrix(next_kept, dict, cube_template(d)->faces, kept.size());
            bound = next_kept.size() - rank(m);
        }
        all = std::move(next_all);
        kept = std::move(next_kept);
    }
    const auto lower = cube_template(n - 1);
    const auto upper = cube_template(n);
    guard_dictionary(n - 1, kept.size(), lower->action.size(), memory_budget);
    const auto dict = build_dictionary(kept, lower->action);
    auto streamed = [&](bool shortcircuit) {
        RankOptions ro;
        ro.rank_bound = bound;
        RankSink sink(kept.size(), ro);
        stream_top(all, dict, g, *lower, *upper, {shortcircuit, threads, true}, sink);
        return sink.rank();
    };
    VerifyResult out;
    out.dimension = n;
    out.rank_bound = bound;
    out.rank_full = streamed(false);
    out.rank_short = streamed(true);
    out.equal = out.rank_full == out.rank_short;
    return out;
}

namespace {

nlohmann::ordered_json graph_json(const GraphSummary& s) {
    return {{"vertices", s.vertices},
            {"edges", s.edges},
            {"reduced_vertices", s.reduced_vertices},
            {"reduced_edges", s.reduced_edges}};
}

const char* method_name(Method m) {
    switch (m) {
    case Method::naive: return "naive";
    case Method::plain: return "plain";
    case Method::quotient: break;
    }
    return "quotient";
}

nlohmann::ordered_json counts_json(const std::vector<CellCount>& counts, Method m) {
    const char* kept_name = m == Method::quotient ? "non_semi_degenerate" : "non_degenerate";
    auto out = nlohmann::ordered_json::array();
    for (const auto& c : counts) out.push_back({{"dimension", c.dimension}, {"total", c.total}, {kept_name, c.kept}});
    return out;
}

nlohmann::ordered_json options_json(const HomologyOptions& o, bool shortcircuit) {
    return {{"method", method_name(o.method())},
            {"preprocess", o.preprocess},
            {"use_quotient", o.use_quotient},
            {"assume_conjecture", o.assume_conjecture},
            {"shortcircuit", shortcircuit},
            {"update", o.update == EliminationUpdate::rational ? "rational" : "fraction_free"}};
}

nlohmann::ordered_json timings_json(const std::vector<std::pair<std::string, double>>& t) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [name, ms] : t) out[name] = std::round(ms * 1000.0) / 1000.0;
    return out;
}

} // namespace

nlohmann::ordered_json to_json(const HomologyResult& r, bool include_timings) {
    const Method m = r.options.method();
    nlohmann::ordered_json j;
    j["graph"] = graph_json(r.graph);
    j["dimension"] = r.dimension;
    j["betti"] = r.betti;
    j["kernel_dim"] = r.kernel_dim;
    j["image_rank"] = r.image_rank;
    j[m == Method::quotient ? "class_counts" : "cube_counts"] = counts_json(r.counts, m);
    if (include_timings) j["timings_ms"] = timings_json(r.timings_ms);
    j["options"] = options_json(r.options, r.shortcircuit);
    return j;
}

nlohmann::ordered_json to_json(const ProfileResult& r, bool include_timings) {
    const Method m = r.options.method();
    nlohmann::ordered_json j;
    j["graph"] = graph_json(r.graph);
    j["max_dimension"] = r.max_dimension;
    j["betti"] = r.betti;
    j[m == Method::quotient ? "class_counts" : "cube_counts"] = counts_json(r.counts, m);
    if (include_timings) j["timings_ms"] = timings_json(r.timings_ms);
    j["options"] = options_json(r.options, r.shortcircuit);
    return j;
}

nlohmann::ordered_json to_json(const VerifyResult& r) {
    return {{"dimension", r.dimension},
            {"rank_full", r.rank_full},
            {"rank_short", r.rank_short},
            {"equal", r.equal},
            {"rank_bound", r.rank_bound}};
}

} // namespace cubehom
