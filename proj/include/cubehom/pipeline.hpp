#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cubehom/enumeration.hpp"
#include "cubehom/graph.hpp"
#include "cubehom/sparse_matrix.hpp"

namespace cubehom {

enum class Method { quotient, plain, naive };

struct HomologyOptions {
    bool preprocess = true;
    /// false: plain non-degenerate complex without the hyperoctahedral quotient.
    bool use_quotient = true;
    /// Full set-map enumeration (the oracle path); overrides use_quotient.
    bool naive = false;
    /// Short-circuit streaming beyond d_3, where it rests on an open conjecture.
    bool assume_conjecture = false;
    unsigned threads = 1;
    std::uint64_t naive_cap = default_naive_cap;
    /// Refuse runs whose projected class storage exceeds this many bytes.
    std::uint64_t memory_budget = std::uint64_t{3} << 30;
    EliminationUpdate update = EliminationUpdate::rational;
    /// When set, boundary matrices are written to PREFIX_d<k>.mtx.
    std::optional<std::filesystem::path> dump_prefix;

    Method method() const noexcept { return naive ? Method::naive : use_quotient ? Method::quotient : Method::plain; }
};

struct GraphSummary {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    std::size_t reduced_vertices = 0;
    std::size_t reduced_edges = 0;
};

/// For the quotient method: number of classes and how many survive the
/// semi-degeneracy filter. For the other methods: cubes and non-degenerate cubes.
struct CellCount {
    int dimension = 0;
    std::uint64_t total = 0;
    std::uint64_t kept = 0;
};

struct HomologyResult {
    GraphSummary graph;
    int dimension = 0;
    std::size_t betti = 0;
    std::size_t kernel_dim = 0;
    std::size_t image_rank = 0;
    std::vector<CellCount> counts;
    std::vector<std::pair<std::string, double>> timings_ms;
    HomologyOptions options;
    bool shortcircuit = false;
};

struct ProfileResult {
    GraphSummary graph;
    int max_dimension = 0;
    std::vector<std::size_t> betti;
    std::vector<CellCount> counts;
    std::vector<std::pair<std::string, double>> timings_ms;
    HomologyOptions options;
    bool shortcircuit = false;
};

/// Betti number b_n over Q. Throws ResourceError when the projected class
/// storage exceeds opts.memory_budget, InputError for unsupported sizes.
HomologyResult homology(const Graph& g, int n, const HomologyOptions& opts = {});

/// b_0..b_max_n from a single sweep over the dimensions.
ProfileResult profile(const Graph& g, int max_n, const HomologyOptions& opts = {});
std::vector<std::size_t> betti_profile(const Graph& g, int max_n, const HomologyOptions& opts = {});

/// Oracle: every graph map, quotient by degenerate cubes only.
std::size_t naive_homology(const Graph& g, int n, std::uint64_t cap = default_naive_cap);

struct VerifyResult {
    int dimension = 0;
    std::size_t rank_full = 0;
    std::size_t rank_short = 0;
    bool equal = false;
    /// Upper bound used for early termination (dim ker d_{n-1}).
    std::size_t rank_bound = 0;
};

/// Rank of d_n streamed without and with the short-circuit, on `g` as given.
VerifyResult verify_shortcircuit(const Graph& g, int n, unsigned threads = 1,
                                 std::uint64_t memory_budget = std::uint64_t{3} << 30);

nlohmann::ordered_json to_json(const HomologyResult& r, bool include_timings = true);
nlohmann::ordered_json to_json(const ProfileResult& r, bool include_timings = true);
nlohmann::ordered_json to_json(const VerifyResult& r);

} // namespace cubehom
