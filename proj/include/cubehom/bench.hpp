#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cubehom/pipeline.hpp"

namespace cubehom {

struct BenchCase {
    std::string graph; // builtin name
    int dimension = 0;
    bool assume_conjecture = false;
};

/// quick, standard or extended; each suite contains the previous one.
std::vector<BenchCase> bench_suite(std::string_view suite);

/// Graph name -> Betti numbers b_0, b_1, ...
using ExpectationTable = std::map<std::string, std::vector<std::size_t>>;

ExpectationTable builtin_expectations();

/// {"c5": [1, 1, 0], ...}; throws InputError when malformed.
ExpectationTable parse_expectations(std::string_view json_text);

struct BenchRow {
    BenchCase bench;
    std::size_t betti = 0;
    std::optional<std::size_t> expected;
    double wall_ms = 0;
    std::vector<CellCount> counts;

    bool matches() const noexcept { return !expected || *expected == betti; }
};

struct BenchReport {
    std::string suite;
    std::vector<BenchRow> rows;

    bool all_match() const noexcept;
};

BenchReport run_bench(std::string_view suite, const HomologyOptions& base, const ExpectationTable& expected,
                      const std::function<void(const BenchRow&)>& on_row = {});

nlohmann::ordered_json to_json(const BenchReport& report, bool include_timings = true);
std::string format_table(const BenchReport& report);

} // namespace cubehom
