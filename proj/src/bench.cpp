#include "cubehom/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "cubehom/errors.hpp"
#include "cubehom/graph.hpp"

namespace cubehom {

std::vector<BenchCase> bench_suite(std::string_view suite) {
    std::vector<BenchCase> cases;
    auto upto = [&](const char* graph, int lo, int hi, bool conjecture = false) {
        for (int n = lo; n <= hi; ++n) cases.push_back({graph, n, conjecture});
    };
    if (suite != "quick" && suite != "standard" && suite != "extended")
        throw InputError("unknown suite '" + std::string(suite) + "' (quick, standard, extended)");
    upto("c5", 0, 2);
    upto("greene_sphere", 0, 1);
    upto("k10", 0, 2);
    upto("c5_star", 0, 2);
    if (suite == "quick") return cases;
    upto("c5", 3, 3);
    upto("greene_sphere", 2, 3);
    upto("torus3", 0, 2);
    upto("c5_star", 3, 3);
    if (suite == "standard") return cases;
    upto("c5", 4, 4, true);
    upto("torus3", 3, 3);
    return cases;
}

ExpectationTable builtin_expectations() {
    return {
        {"c5", {1, 1, 0, 0, 0}},
        {"c5_star", {1, 1, 0, 0, 0}},
        {"greene_sphere", {1, 0, 1, 0, 0}},
        {"torus3", {1, 3, 3, 1}},
        {"k10", {1, 0, 0, 0, 0}},
    };
}

ExpectationTable parse_expectations(std::string_view json_text) {
    ExpectationTable table;
    try {
        const auto doc = nlohmann::json::parse(json_text);
        if (!doc.is_object()) throw InputError("expectation file must be a JSON object");
        for (const auto& [name, values] : doc.items()) table[name] = values.get<std::vector<std::size_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("expectation file: ") + e.what());
    }
    return table;
}

bool BenchReport::all_match() const noexcept {
    for (const auto& r : rows)
        if (!r.matches()) return false;
    return true;
}

BenchReport run_bench(std::string_view suite, const HomologyOptions& base, const ExpectationTable& expected,
                      const std::function<void(const BenchRow&)>& on_row) {
    BenchReport report{std::string(suite), {}};
    for (const auto& c : bench_suite(suite)) {
        HomologyOptions opts = base;
        opts.assume_conjecture = base.assume_conjecture || c.assume_conjecture;
        const auto start = std::chrono::steady_clock::now();
        const auto result = homology(standard_graph(c.graph), c.dimension, opts);
        BenchRow row;
        row.bench = c;
        row.betti = result.betti;
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        row.counts = result.counts;
        if (auto it = expected.find(c.graph); it != expected.end() && static_cast<std::size_t>(c.dimension) < it->second.size())
            row.expected = it->second[c.dimension];
        if (on_row) on_row(row);
        report.rows.push_back(std::move(row));
    }
    return report;
}

nlohmann::ordered_json to_json(const BenchReport& report, bool include_timings) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        row["graph"] = r.bench.graph;
        row["dimension"] = r.bench.dimension;
        row["betti"] = r.betti;
        row["expected"] = r.expected ? nlohmann::ordered_json(*r.expected) : nlohmann::ordered_json();
        row["match"] = r.matches();
        row["assume_conjecture"] = r.bench.assume_conjecture;
        auto counts = nlohmann::ordered_json::array();
        for (const auto& c : r.counts)
            counts.push_back({{"dimension", c.dimension}, {"total", c.total}, {"kept", c.kept}});
        row["counts"] = counts;
        if (include_timings) row["wall_ms"] = std::round(r.wall_ms * 1000.0) / 1000.0;
        rows.push_back(row);
    }
    return {{"suite", report.suite}, {"all_match", report.all_match()}, {"rows", rows}};
}

std::string format_table(const BenchReport& report) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-15s %3s %6s %8s %12s  %s\n", "graph", "n", "betti", "expected", "time_ms", "status");
    out += line;
    for (const auto& r : report.rows) {
        const std::string expected = r.expected ? std::to_string(*r.expected) : "-";
        std::snprintf(line, sizeof line, "%-15s %3d %6zu %8s %12.1f  %s\n", r.bench.graph.c_str(), r.bench.dimension,
                      r.betti, expected.c_str(), r.wall_ms, r.matches() ? "ok" : "MISMATCH");
        out += line;
    }
    return out;
}

} // namespace cubehom
