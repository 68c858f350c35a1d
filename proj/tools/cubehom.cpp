#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubehom/bench.hpp"
#include "cubehom/errors.hpp"
#include "cubehom/graph.hpp"
#include "cubehom/pipeline.hpp"
#include "cubehom/preprocess.hpp"

using namespace cubehom;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_mismatch = 1;
constexpr int exit_usage = 2;
constexpr int exit_resource = 3;
constexpr int exit_internal = 4;

Graph load_graph(const std::string& spec) {
    constexpr std::string_view prefix = "builtin:";
    if (spec.rfind(prefix, 0) == 0) return standard_graph(std::string_view(spec).substr(prefix.size()));
    return read_graph(spec);
}

unsigned default_threads() {
    const char* env = std::getenv("CUBEHOM_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) throw InputError(std::string("CUBEHOM_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<unsigned>(v);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void print_counts(const std::vector<CellCount>& counts) {
    for (const auto& c : counts) std::cout << "  dim " << c.dimension << ": " << c.total << " total, " << c.kept << " kept\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete cubical homology of reflexive graphs over Q"};
    app.require_subcommand(1);

    unsigned threads = 1;
    try {
        threads = default_threads();
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }

    // homology
    auto* hom = app.add_subcommand("homology", "Betti numbers of a graph");
    std::string hom_graph;
    int hom_dim = -1;
    int hom_max_dim = -1;
    bool no_preprocess = false, no_quotient = false, assume_conjecture = false, naive = false;
    bool hom_json = false, no_timings = false, fraction_free = false;
    std::string dump_prefix;
    double budget_mib = 3072;
    std::uint64_t naive_cap = default_naive_cap;
    hom->add_option("--graph", hom_graph, "Graph file or builtin:NAME")->required();
    auto* dim_opt = hom->add_option("--dim", hom_dim, "Dimension n")->check(CLI::NonNegativeNumber);
    auto* max_opt = hom->add_option("--max-dim", hom_max_dim, "Compute b_0..b_N")->check(CLI::NonNegativeNumber);
    dim_opt->excludes(max_opt);
    hom->add_flag("--no-preprocess", no_preprocess, "Skip removal of homotopically removable vertices");
    hom->add_flag("--no-quotient", no_quotient, "Use the plain non-degenerate complex");
    hom->add_flag("--assume-conjecture", assume_conjecture, "Short-circuit streaming beyond d_3");
    hom->add_flag("--naive", naive, "Full set-map enumeration (slow oracle)");
    hom->add_option("--threads", threads, "Worker threads (default $CUBEHOM_THREADS or 1)")->check(CLI::PositiveNumber);
    hom->add_option("--dump-matrix", dump_prefix, "Write boundary matrices to PREFIX_d<k>.mtx");
    hom->add_flag("--json", hom_json, "JSON output");
    hom->add_flag("--no-timings", no_timings, "Omit timings from JSON output");
    hom->add_flag("--fraction-free", fraction_free, "Fraction-free elimination updates");
    hom->add_option("--memory-budget", budget_mib, "Resource guard budget in MiB")->check(CLI::PositiveNumber);
    hom->add_option("--naive-cap", naive_cap, "Largest |V|^(2^n) the naive path accepts");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a benchmark suite against the expected Betti table");
    std::string suite = "quick";
    std::string expect_file;
    bool bench_json = false;
    bench->add_option("--suite", suite, "quick, standard or extended")
        ->check(CLI::IsMember({"quick", "standard", "extended"}));
    bench->add_option("--expect", expect_file, "JSON expectation table overriding the builtin one");
    bench->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    bench->add_flag("--json", bench_json, "JSON output");
    bench->add_flag("--no-timings", no_timings, "Omit timings from JSON output");

    // reduce
    auto* red = app.add_subcommand("reduce", "Remove homotopically removable vertices");
    std::string red_graph, red_out, red_trace;
    bool red_json_graph = false;
    red->add_option("--graph", red_graph, "Graph file or builtin:NAME")->required();
    red->add_option("--output,-o", red_out, "Write the reduced graph here (default: stdout)");
    red->add_option("--trace", red_trace, "Write the JSON removal trace here (default: stderr)");
    red->add_flag("--json-graph", red_json_graph, "Write the reduced graph in JSON format");

    // verify
    auto* ver = app.add_subcommand("verify", "Compare rank of d_n with and without the short-circuit");
    std::string ver_graph;
    int ver_dim = 0;
    bool ver_preprocess = false, ver_json = false;
    ver->add_option("--graph", ver_graph, "Graph file or builtin:NAME")->required();
    ver->add_option("--dim", ver_dim, "Boundary index n >= 1")->required()->check(CLI::PositiveNumber);
    ver->add_flag("--preprocess", ver_preprocess, "Reduce the graph first");
    ver->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    ver->add_flag("--json", ver_json, "JSON output");

    // gen
    auto* gen = app.add_subcommand("gen", "Write a builtin graph to a file");
    std::string gen_name, gen_out;
    bool gen_json = false;
    gen->add_option("name", gen_name, "Builtin name, with or without the builtin: prefix")->required();
    gen->add_option("output", gen_out, "Destination file (default: stdout)");
    gen->add_flag("--json", gen_json, "JSON format");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*hom) {
            if (hom_dim < 0 && hom_max_dim < 0) throw InputError("homology needs --dim or --max-dim");
            HomologyOptions opts;
            opts.preprocess = !no_preprocess;
            opts.use_quotient = !no_quotient;
            opts.naive = naive;
            opts.assume_conjecture = assume_conjecture;
            opts.threads = threads;
            opts.naive_cap = naive_cap;
            opts.memory_budget = static_cast<std::uint64_t>(budget_mib * 1024.0 * 1024.0);
            opts.update = fraction_free ? EliminationUpdate::fraction_free : EliminationUpdate::rational;
            if (!dump_prefix.empty()) opts.dump_prefix = dump_prefix;
            const Graph g = load_graph(hom_graph);
            if (hom_dim >= 0) {
                const auto r = homology(g, hom_dim, opts);
                if (hom_json) {
                    std::cout << to_json(r, !no_timings).dump(2) << '\n';
                } else {
                    std::cout << "b_" << r.dimension << " = " << r.betti << "  (ker " << r.kernel_dim << ", im "
                              << r.image_rank << ")\n";
                    std::cout << "graph: " << r.graph.vertices << " vertices";
                    if (opts.preprocess) std::cout << ", " << r.graph.reduced_vertices << " after reduction";
                    std::cout << '\n';
                    print_counts(r.counts);
                }
            } else {
                const auto r = profile(g, hom_max_dim, opts);
                if (hom_json) {
                    std::cout << to_json(r, !no_timings).dump(2) << '\n';
                } else {
                    for (std::size_t d = 0; d < r.betti.size(); ++d) std::cout << "b_" << d << " = " << r.betti[d] << '\n';
                    print_counts(r.counts);
                }
            }
            return exit_ok;
        }
        if (*bench) {
            ExpectationTable expected = expect_file.empty() ? builtin_expectations() : parse_expectations(read_file(expect_file));
            HomologyOptions opts;
            opts.threads = threads;
            const auto report = run_bench(suite, opts, expected, [&](const BenchRow& row) {
                if (!bench_json)
                    std::cerr << row.bench.graph << " n=" << row.bench.dimension << " betti=" << row.betti << '\n';
            });
            if (bench_json) {
                std::cout << to_json(report, !no_timings).dump(2) << '\n';
            } else {
                std::cout << format_table(report);
            }
            if (!report.all_match()) {
                for (const auto& r : report.rows)
                    if (!r.matches())
                        std::cerr << "mismatch: " << r.bench.graph << " n=" << r.bench.dimension << " expected "
                                  << *r.expected << " got " << r.betti << '\n';
                return exit_mismatch;
            }
            return exit_ok;
        }
        if (*red) {
            const Graph g = load_graph(red_graph);
            const auto r = reduce(g);
            nlohmann::ordered_json trace;
            trace["original_vertices"] = g.num_vertices();
            trace["reduced_vertices"] = r.graph.num_vertices();
            auto removed = nlohmann::ordered_json::array();
            for (const auto& [v, w] : r.trace.removed) removed.push_back({{"vertex", v}, {"witness", w}});
            trace["removed"] = removed;
            trace["survivor_map"] = r.trace.survivor_map;
            const std::string graph_text = red_json_graph ? format_graph_json(r.graph) : format_graph_text(r.graph);
            if (red_out.empty()) {
                std::cout << graph_text;
            } else {
                std::ofstream out(red_out);
                if (!out) throw InputError("cannot write " + red_out);
                out << graph_text;
            }
            if (red_trace.empty()) {
                std::cerr << trace.dump(2) << '\n';
            } else {
                std::ofstream out(red_trace);
                if (!out) throw InputError("cannot write " + red_trace);
                out << trace.dump(2) << '\n';
            }
            return exit_ok;
        }
        if (*ver) {
            Graph g = load_graph(ver_graph);
            if (ver_preprocess) g = reduce(g).graph;
            const auto r = verify_shortcircuit(g, ver_dim, threads);
            if (ver_json) {
                std::cout << to_json(r).dump(2) << '\n';
            } else {
                std::cout << "rank_full=" << r.rank_full << " rank_short=" << r.rank_short
                          << " equal=" << (r.equal ? "true" : "false") << '\n';
            }
            return exit_ok;
        }
        if (*gen) {
            constexpr std::string_view prefix = "builtin:";
            std::string_view name = gen_name;
            if (name.rfind(prefix, 0) == 0) name.remove_prefix(prefix.size());
            const Graph g = standard_graph(name);
            const std::string text = gen_json ? format_graph_json(g) : format_graph_text(g);
            if (gen_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(gen_out);
                if (!out) throw InputError("cannot write " + gen_out);
                out << text;
            }
            return exit_ok;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_resource;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_ok;
}
