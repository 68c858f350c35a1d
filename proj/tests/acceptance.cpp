// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails. Set CUBEHOM_ACCEPTANCE_EXTENDED=1 to also run the
// out-of-desk-scale rows of criterion 10.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cubehom/bench.hpp"
#include "cubehom/boundary.hpp"
#include "cubehom/cube_template.hpp"
#include "cubehom/enumeration.hpp"
#include "cubehom/errors.hpp"
#include "cubehom/pipeline.hpp"
#include "oracle.hpp"

using namespace cubehom;

namespace {

using Betti = std::vector<std::size_t>;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string show(const Betti& b) {
    std::string s = "[";
    for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
    return s + "]";
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

HomologyOptions raw() {
    HomologyOptions o;
    o.preprocess = false;
    return o;
}

std::vector<std::vector<CubeClass>> class_levels(const Graph& g, int n) {
    std::vector<std::vector<CubeClass>> all{zero_classes(g)};
    for (int d = 1; d <= n; ++d)
        all.push_back(next_dimension_classes(all.back(), g, cube_template(d - 1)->action, cube_template(d)->action));
    return all;
}

std::pair<int, std::string> run_cli(const std::string& args) {
    const std::string cmd = "'" CUBEHOM_CLI_PATH "' " + args + " 2>/dev/null";
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int raw_status = pclose(pipe);
    return {WIFEXITED(raw_status) ? WEXITSTATUS(raw_status) : -1, out};
}

void betti_tables(Outcome& o) {
    struct Row {
        const char* graph;
        int max_n;
        Betti expected;
        double target_s;
    };
    const std::vector<Row> rows = {
        {"c5", 3, {1, 1, 0, 0}, 300},
        {"greene_sphere", 3, {1, 0, 1, 0}, 1800},
        {"torus3", 2, {1, 3, 3}, 3600},
        {"k10", 4, {1, 0, 0, 0, 0}, 10},
        {"c5_star", 3, {1, 1, 0, 0}, 300},
    };
    for (const auto& r : rows) {
        const auto start = Clock::now();
        const auto got = betti_profile(standard_graph(r.graph), r.max_n);
        const double s = seconds_since(start);
        o.detail << ' ' << r.graph << '=' << show(got) << " (" << s << " s)";
        o.expect(got == r.expected, std::string(r.graph) + " expected " + show(r.expected));
        o.expect(s < r.target_s, std::string(r.graph) + " over its time target");
    }
}

void oracle_equivalence(Outcome& o) {
    const auto corpus = oracle::connected_graphs(5);
    std::size_t checks = 0;
    for (const auto& [name, g] : corpus)
        for (int n = 0; n <= 2; ++n) {
            const auto fast = homology(g, n).betti;
            const auto naive = naive_homology(g, n);
            o.expect(fast == naive, name + " n=" + std::to_string(n));
            ++checks;
        }
    o.detail << ' ' << corpus.size() << " graphs, " << checks << " comparisons";
}

void quotient_soundness(Outcome& o) {
    const auto corpus = oracle::connected_graphs(5);
    HomologyOptions plain = raw();
    plain.use_quotient = false;
    for (const auto& [name, g] : corpus)
        o.expect(betti_profile(g, 2, raw()) == betti_profile(g, 2, plain), name);
    o.detail << ' ' << corpus.size() << " graphs, n = 0..2";
}

void chain_property(Outcome& o) {
    const auto corpus = oracle::connected_graphs(5);
    std::size_t products = 0;
    for (const auto& [name, g] : corpus) {
        const auto all = class_levels(g, 3);
        std::vector<std::vector<CubeClass>> kept;
        for (int d = 0; d <= 3; ++d) kept.push_back(remove_semi_degenerate(all[d], cube_template(d)->action));
        std::vector<SparseRationalMatrix> m(4);
        for (int d = 1; d <= 3; ++d) {
            const auto dict = build_dictionary(kept[d - 1], cube_template(d - 1)->action);
            m[d] = build_matrix(kept[d], dict, cube_template(d)->faces, kept[d - 1].size());
        }
        for (int n = 1; n <= 2; ++n) {
            const auto p = multiply(m[n], m[n + 1]);
            bool zero = true;
            for (const auto& c : p.columns()) zero &= c.empty();
            o.expect(zero, name + " n=" + std::to_string(n));
            ++products;
        }
    }
    o.detail << ' ' << products << " products d_n d_(n+1), n = 1, 2";
}

void shortcircuit_theorem(Outcome& o) {
    const std::vector<std::pair<const char*, int>> cases = {
        {"c5", 2},  {"c5", 3},      {"greene_sphere", 2}, {"greene_sphere", 3}, {"c5_star", 2},
        {"c5_star", 3}, {"k10", 2}, {"k10", 3},           {"torus3", 2},
    };
    for (const auto& [name, n] : cases) {
        const auto r = verify_shortcircuit(standard_graph(name), n);
        o.detail << ' ' << name << "/d" << n << ':' << r.rank_full << '=' << r.rank_short;
        o.expect(r.equal, std::string(name) + " n=" + std::to_string(n));
    }
}

std::size_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

void group_combinatorics(Outcome& o) {
    for (int n = 0; n <= 5; ++n) {
        const auto t = build_action_table(n);
        o.expect(generate_group(n).size() == (std::size_t{1} << n) * factorial(n), "|R_" + std::to_string(n) + "|");
        o.expect(t.size() == (std::size_t{1} << n) * factorial(n), "table size n=" + std::to_string(n));
        for (std::size_t r = 0; r < t.size(); ++r) {
            const auto p = t.index_perm(r);
            std::set<CubeVertexIndex> s(p.begin(), p.end());
            if (s.size() != p.size() || *s.rbegin() != p.size() - 1) o.expect(false, "row not a permutation");
        }
    }
    for (int n = 1; n <= 3; ++n) {
        const auto t = build_action_table(n);
        std::map<std::vector<CubeVertexIndex>, int> sign;
        for (std::size_t r = 0; r < t.size(); ++r)
            sign[{t.index_perm(r).begin(), t.index_perm(r).end()}] = t.sign(r);
        for (std::size_t a = 0; a < t.size(); ++a)
            for (std::size_t b = 0; b < t.size(); ++b) {
                std::vector<CubeVertexIndex> c(t.cube_size());
                for (std::size_t m = 0; m < c.size(); ++m) c[m] = t.index_perm(a)[t.index_perm(b)[m]];
                const auto it = sign.find(c);
                if (it == sign.end() || it->second != t.sign(a) * t.sign(b)) o.expect(false, "sign not multiplicative");
            }
    }
    o.detail << " |R_n| for n = 0..5: 1, 2, 8, 48, 384, 3840";
}

void complete_graph_counts(Outcome& o) {
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto g = complete_graph(m);
        auto cubes = zero_cubes(g);
        for (int n = 1; n <= 3; ++n) {
            cubes = next_dimension(cubes, g);
            std::size_t expected = 1;
            for (int k = 0; k < (1 << n); ++k) expected *= m;
            o.expect(cubes.size() == expected, "K" + std::to_string(m) + " n=" + std::to_string(n));
        }
    }
    o.detail << " m <= 3, n <= 3 (K3 at n = 3: 6561 cubes)";
}

void degeneracy_propagation(Outcome& o) {
    std::size_t total = 0;
    for (const auto& [name, g] : oracle::connected_graphs(5)) {
        auto cubes = zero_cubes(g);
        for (int n = 1; n <= 3; ++n) {
            cubes = next_dimension(cubes, g);
            for (const auto& c : cubes)
                if (c.degenerate != direct_degenerate_coords(c.vertices)) o.expect(false, name + " n=" + std::to_string(n));
            total += cubes.size();
        }
    }
    o.detail << ' ' << total << " cubes checked";
}

void determinism(Outcome& o) {
    const auto one = run_cli("bench --suite quick --json --no-timings --threads 1");
    o.expect(one.first == 0, "bench exit status");
    for (const char* t : {"2", "8"}) {
        const auto other = run_cli(std::string("bench --suite quick --json --no-timings --threads ") + t);
        o.expect(other.first == 0 && other.second == one.second, std::string("threads ") + t);
    }
    for (const auto& c : bench_suite("quick")) {
        const auto g = standard_graph(c.graph);
        std::string base;
        for (unsigned t : {1U, 2U, 8U}) {
            HomologyOptions opts;
            opts.threads = t;
            opts.assume_conjecture = c.assume_conjecture;
            const auto j = to_json(homology(g, c.dimension, opts), false).dump();
            if (t == 1) base = j;
            o.expect(j == base, c.graph + " n=" + std::to_string(c.dimension));
        }
    }
    o.detail << " quick suite, threads 1, 2, 8";
}

void out_of_desk_scale(Outcome& o) {
    const auto extended = bench_suite("extended");
    const auto standard = bench_suite("standard");
    o.expect(extended.size() == standard.size() + 2, "extended rows");
    const char* env = std::getenv("CUBEHOM_ACCEPTANCE_EXTENDED");
    if (!env || std::string(env) != "1") {
        o.detail << " not gated; extended rows (c5 n=4, torus3 n=3) skipped (set CUBEHOM_ACCEPTANCE_EXTENDED=1 to run)";
        return;
    }
    HomologyOptions opts;
    opts.assume_conjecture = true;
    const auto start = Clock::now();
    try {
        const auto r = homology(cycle_graph(5), 4, opts);
        o.detail << " c5 n=4 betti=" << r.betti << " (" << seconds_since(start) << " s)";
        o.expect(r.betti == 0, "b_4(C5) = 0");
    } catch (const ResourceError& e) {
        o.detail << " c5 n=4 refused: " << e.what();
    }
    const auto t3 = Clock::now();
    try {
        const auto r = homology(torus3(), 3, opts);
        o.detail << " torus3 n=3 betti=" << r.betti << " (" << seconds_since(t3) << " s, reported only)";
    } catch (const ResourceError& e) {
        o.detail << " torus3 n=3 refused: " << e.what();
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"Betti table reproduction", betti_tables},
        {"Oracle equivalence", oracle_equivalence},
        {"Quotient soundness", quotient_soundness},
        {"Chain property", chain_property},
        {"Short-circuit theorem check", shortcircuit_theorem},
        {"Group combinatorics", group_combinatorics},
        {"Complete-graph count law", complete_graph_counts},
        {"Degeneracy propagation", degeneracy_propagation},
        {"Determinism", determinism},
        {"Out-of-desk-scale disclosure", out_of_desk_scale},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = Clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ". " << criteria[i].first << " ("
                  << seconds_since(start) << " s):" << o.detail.str() << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
