#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cubehom/rational.hpp"

namespace cubehom {

struct SparseEntry {
    std::uint32_t row;
    Rational value;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Entries sorted by strictly increasing row, no explicit zeros.
using SparseColumn = std::vector<SparseEntry>;

/// Sorts by row, merges repeated rows and drops zeros.
void canonicalize(SparseColumn& column);

/// Column-major sparse matrix over Q.
class SparseRationalMatrix {
public:
    SparseRationalMatrix() = default;
    explicit SparseRationalMatrix(std::size_t nrows) : nrows_(nrows) {}

    std::size_t nrows() const noexcept { return nrows_; }
    std::size_t ncols() const noexcept { return columns_.size(); }
    std::size_t nnz() const noexcept;

    const SparseColumn& column(std::size_t j) const { return columns_[j]; }
    const std::vector<SparseColumn>& columns() const noexcept { return columns_; }

    /// Appends a column, canonicalizing it. Throws ContractError when a row
    /// index is out of range.
    void push_column(SparseColumn column);

    SparseRationalMatrix transpose() const;

    friend bool operator==(const SparseRationalMatrix&, const SparseRationalMatrix&) = default;

private:
    std::size_t nrows_ = 0;
    std::vector<SparseColumn> columns_;
};

/// Product a * b; throws ContractError on a shape mismatch.
SparseRationalMatrix multiply(const SparseRationalMatrix& a, const SparseRationalMatrix& b);

enum class EliminationUpdate {
    /// col_k -= (a_ik / a_ij) col_j over Q.
    rational,
    /// col_k = a_ij col_k - a_ik col_j over Z, then divide out the content;
    /// keeps every entry integral when numerators grow pathologically.
    fraction_free,
};

struct RankOptions {
    EliminationUpdate update = EliminationUpdate::rational;
    /// Known upper bound on the rank; elimination stops once it is reached.
    std::optional<std::size_t> rank_bound;
    /// Columns buffered before the accumulator compacts onto its basis
    /// (0 picks max(8192, 4 * nrows)).
    std::size_t batch_columns = 0;
    /// Number of rows and columns inspected per Markowitz pivot search.
    std::size_t markowitz_candidates = 4;
};

struct EliminationResult {
    std::size_t rank = 0;
    /// Indices (into the input) of pivot columns; they form a basis of the
    /// column space.
    std::vector<std::size_t> pivot_columns;
};

/// Sparse Gaussian elimination with Markowitz pivoting: the pivot minimising
/// (r_i - 1)(c_j - 1) among the candidates is chosen, ties going to the entry
/// of smallest height. Proportional duplicates are removed first.
EliminationResult eliminate(const std::vector<SparseColumn>& columns, std::size_t nrows, const RankOptions& opts = {});

/// Exact rank over Q built up column by column with bounded memory: pending
/// columns are periodically eliminated together with the current basis and
/// only the surviving pivot columns are kept.
class RankAccumulator {
public:
    explicit RankAccumulator(std::size_t nrows, RankOptions opts = {});

    std::size_t nrows() const noexcept { return nrows_; }

    void add(SparseColumn column);

    /// True once no further column can raise the rank.
    bool saturated() const noexcept { return basis_.size() >= limit_; }

    std::size_t columns_seen() const noexcept { return seen_; }

    std::size_t rank();

private:
    void compact();

    std::size_t nrows_;
    RankOptions opts_;
    std::size_t limit_;
    std::size_t batch_;
    std::size_t seen_ = 0;
    std::vector<SparseColumn> basis_;
    std::vector<SparseColumn> pending_;
};

std::size_t rank(const SparseRationalMatrix& m, const RankOptions& opts = {});

/// ncols - rank.
std::size_t kernel_dim(const SparseRationalMatrix& m, const RankOptions& opts = {});

/// "rows cols nnz" header, then 1-based "row col value" triplets in column
/// order with values printed exactly.
void write_matrix_market(std::ostream& out, const SparseRationalMatrix& m);
void write_matrix_market(const SparseRationalMatrix& m, const std::filesystem::path& path);
SparseRationalMatrix read_matrix_market(std::istream& in);

} // namespace cubehom
