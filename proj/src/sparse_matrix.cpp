#include "cubehom/sparse_matrix.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "cubehom/errors.hpp"

namespace cubehom {

void canonicalize(SparseColumn& column) {
    if (column.empty()) return;
    if (!std::is_sorted(column.begin(), column.end(), [](const auto& a, const auto& b) { return a.row < b.row; })) {
        std::stable_sort(column.begin(), column.end(), [](const auto& a, const auto& b) { return a.row < b.row; });
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < column.size();) {
        SparseEntry acc{column[i].row, std::move(column[i].value)};
        std::size_t j = i + 1;
        for (; j < column.size() && column[j].row == acc.row; ++j) acc.value += column[j].value;
        if (!acc.value.is_zero()) column[out++] = std::move(acc);
        i = j;
    }
    column.resize(out);
}

std::size_t SparseRationalMatrix::nnz() const noexcept {
    std::size_t total = 0;
    for (const auto& c : columns_) total += c.size();
    return total;
}

void SparseRationalMatrix::push_column(SparseColumn column) {
    canonicalize(column);
    if (!column.empty() && column.back().row >= nrows_) {
        throw ContractError("column entry at row " + std::to_string(column.back().row) + " exceeds " +
                            std::to_string(nrows_) + " rows");
    }
    columns_.push_back(std::move(column));
}

SparseRationalMatrix SparseRationalMatrix::transpose() const {
    std::vector<SparseColumn> rows(nrows_);
    for (std::size_t j = 0; j < columns_.size(); ++j)
        for (const auto& e : columns_[j]) rows[e.row].push_back({static_cast<std::uint32_t>(j), e.value});
    SparseRationalMatrix t(columns_.size());
    for (auto& r : rows) t.push_column(std::move(r));
    return t;
}

SparseRationalMatrix multiply(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    if (a.ncols() != b.nrows()) {
        throw ContractError("multiply: " + std::to_string(a.nrows()) + "x" + std::to_string(a.ncols()) + " times " +
                            std::to_string(b.nrows()) + "x" + std::to_string(b.ncols()));
    }
    SparseRationalMatrix out(a.nrows());
    for (const auto& bcol : b.columns()) {
        SparseColumn acc;
        for (const auto& be : bcol)
            for (const auto& ae : a.column(be.row)) acc.push_back({ae.row, ae.value * be.value});
        out.push_column(std::move(acc));
    }
    return out;
}

namespace {

// Scales a nonzero column to the primitive integer vector with a positive
// leading entry. Scaling preserves the rank, and the result is a canonical
// representative of the column's line, so equal results mean proportional
// columns.
void make_primitive(SparseColumn& col) {
    bool small = true;
    std::int64_t lcm = 1;
    for (const auto& e : col) {
        if (!e.value.is_small()) {
            small = false;
            break;
        }
        const std::int64_t d = e.value.small_den();
        if (d == 1) continue;
        const std::int64_t g = std::gcd(lcm, d);
        if (__builtin_mul_overflow(lcm / g, d, &lcm)) {
            small = false;
            break;
        }
    }
    if (small) {
        std::int64_t content = 0;
        std::vector<std::int64_t> scaled;
        scaled.reserve(col.size());
        for (const auto& e : col) {
            std::int64_t v;
            if (__builtin_mul_overflow(e.value.small_num(), lcm / e.value.small_den(), &v) ||
                v == std::numeric_limits<std::int64_t>::min()) {
                small = false;
                break;
            }
            scaled.push_back(v);
            content = std::gcd(content, v);
        }
        if (small) {
            if (scaled.front() < 0) content = -content;
            for (std::size_t i = 0; i < col.size(); ++i) col[i].value = Rational(scaled[i] / content);
            return;
        }
    }
    mpz_class den_lcm = 1;
    for (const auto& e : col) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), e.value.denominator().get_mpz_t());
    std::vector<mpz_class> scaled;
    scaled.reserve(col.size());
    mpz_class content = 0;
    for (const auto& e : col) {
        mpz_class v = e.value.numerator() * (den_lcm / e.value.denominator());
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
        scaled.push_back(std::move(v));
    }
    if (sgn(scaled.front()) < 0) content = -content;
    for (std::size_t i = 0; i < col.size(); ++i) col[i].value = Rational(mpq_class(scaled[i] / content));
}

std::size_t column_hash(const SparseColumn& col) {
    std::size_t h = col.size();
    for (const auto& e : col) {
        h ^= e.row + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= e.value.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

void divide_content(SparseColumn& col) {
    bool small = true;
    std::int64_t g = 0;
    for (const auto& e : col) {
        if (!e.value.is_small()) {
            small = false;
            break;
        }
        g = std::gcd(g, e.value.small_num());
    }
    if (small) {
        if (g > 1)
            for (auto& e : col) e.value = Rational(e.value.small_num() / g);
        return;
    }
    mpz_class content = 0;
    for (const auto& e : col) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), e.value.numerator().get_mpz_t());
    if (content > 1) {
        const Rational c{mpq_class(content)};
        for (auto& e : col) e.value /= c;
    }
}

const Rational* find_entry(const SparseColumn& col, std::uint32_t row) {
    auto it = std::lower_bound(col.begin(), col.end(), row, [](const SparseEntry& e, std::uint32_t r) { return e.row < r; });
    return it != col.end() && it->row == row ? &it->value : nullptr;
}

// Lazily validated buckets: an id is pushed whenever its count changes and
// stale copies are skipped on read.
class Buckets {
public:
    void push(std::size_t count, std::uint32_t id) {
        if (count >= lists_.size()) lists_.resize(count + 1);
        lists_[count].push_back(id);
    }
    std::size_t levels() const { return lists_.size(); }
    std::vector<std::uint32_t>& at(std::size_t count) { return lists_[count]; }

private:
    std::vector<std::vector<std::uint32_t>> lists_;
};

class MarkowitzEliminator {
public:
    MarkowitzEliminator(std::vector<SparseColumn> cols, std::vector<std::size_t> origin, std::size_t nrows,
                        const RankOptions& opts)
        : cols_(std::move(cols)), origin_(std::move(origin)), opts_(opts), col_alive_(cols_.size(), 1),
          row_lists_(nrows), row_count_(nrows, 0), row_alive_(nrows, 1), stamp_(cols_.size(), 0) {
        for (std::uint32_t k = 0; k < cols_.size(); ++k) {
            for (const auto& e : cols_[k]) {
                row_lists_[e.row].push_back(k);
                ++row_count_[e.row];
            }
            col_buckets_.push(cols_[k].size(), k);
        }
        for (std::uint32_t r = 0; r < nrows; ++r)
            if (row_count_[r] > 0) row_buckets_.push(row_count_[r], r);
        alive_cols_ = cols_.size();
    }

    EliminationResult run() {
        EliminationResult result;
        const std::size_t bound = opts_.rank_bound.value_or(std::numeric_limits<std::size_t>::max());
        while (alive_cols_ > 0 && result.rank < bound) {
            const auto pivot = select_pivot();
            if (!pivot) break;
            eliminate(pivot->row, pivot->col);
            ++result.rank;
            result.pivot_columns.push_back(origin_[pivot->col]);
        }
        return result;
    }

private:
    struct Pivot {
        std::uint32_t row;
        std::uint32_t col;
        std::size_t cost;
        std::size_t height;
    };

    bool col_valid(std::size_t count, std::uint32_t k) const { return col_alive_[k] && cols_[k].size() == count; }
    bool row_valid(std::size_t count, std::uint32_t r) const { return row_alive_[r] && row_count_[r] == count; }

    static bool better(const Pivot& a, const std::optional<Pivot>& best) {
        return !best || a.cost < best->cost || (a.cost == best->cost && a.height < best->height);
    }

    // Live columns with a nonzero in row r, deduplicated; compacts the list.
    std::vector<std::uint32_t>& live_row(std::uint32_t r) {
        auto& list = row_lists_[r];
        ++epoch_;
        std::size_t out = 0;
        for (std::uint32_t k : list) {
            if (!col_alive_[k] || stamp_[k] == epoch_ || !find_entry(cols_[k], r)) continue;
            stamp_[k] = epoch_;
            list[out++] = k;
        }
        list.resize(out);
        return list;
    }

    std::optional<Pivot> select_pivot() {
        std::optional<Pivot> best;
        std::size_t examined = 0;
        const std::size_t want = std::max<std::size_t>(1, opts_.markowitz_candidates);
        const std::size_t levels = std::max(col_buckets_.levels(), row_buckets_.levels());
        for (std::size_t m = 1; m < levels; ++m) {
            if (m < col_buckets_.levels()) {
                auto& bucket = col_buckets_.at(m);
                std::size_t idx = bucket.size();
                while (idx > 0 && examined < want) {
                    const std::uint32_t k = bucket[--idx];
                    if (!col_valid(m, k)) {
                        bucket[idx] = bucket.back();
                        bucket.pop_back();
                        continue;
                    }
                    ++examined;
                    for (const auto& e : cols_[k]) {
                        const Pivot p{e.row, k, (row_count_[e.row] - 1) * (m - 1), e.value.height()};
                        if (better(p, best)) best = p;
                    }
                }
            }
            if (m < row_buckets_.levels()) {
                auto& bucket = row_buckets_.at(m);
                std::size_t idx = bucket.size();
                while (idx > 0 && examined < 2 * want) {
                    const std::uint32_t r = bucket[--idx];
                    if (!row_valid(m, r)) {
                        bucket[idx] = bucket.back();
                        bucket.pop_back();
                        continue;
                    }
                    ++examined;
                    for (std::uint32_t k : live_row(r)) {
                        const auto* v = find_entry(cols_[k], r);
                        const Pivot p{r, k, (m - 1) * (cols_[k].size() - 1), v->height()};
                        if (better(p, best)) best = p;
                    }
                }
            }
            if (best && (examined >= want || best->cost <= m * m)) return best;
        }
        return best;
    }

    void touch_row(std::uint32_t r) {
        if (row_alive_[r] && row_count_[r] > 0) row_buckets_.push(row_count_[r], r);
    }

    void eliminate(std::uint32_t prow, std::uint32_t pcol) {
        const SparseColumn pivot_col = cols_[pcol];
        const Rational pv = *find_entry(pivot_col, prow);
        std::vector<std::uint32_t> targets = live_row(prow);
        SparseColumn merged;
        for (std::uint32_t k : targets) {
            if (k == pcol) continue;
            SparseColumn& col = cols_[k];
            const Rational a = *find_entry(col, prow);
            const bool fraction_free = opts_.update == EliminationUpdate::fraction_free;
            const Rational factor = fraction_free ? a : a / pv;
            merged.clear();
            merged.reserve(col.size() + pivot_col.size());
            std::size_t i = 0, j = 0;
            while (i < col.size() || j < pivot_col.size()) {
                if (j == pivot_col.size() || (i < col.size() && col[i].row < pivot_col[j].row)) {
                    Rational v = fraction_free ? col[i].value * pv : std::move(col[i].value);
                    merged.push_back({col[i].row, std::move(v)});
                    ++i;
                } else if (i == col.size() || pivot_col[j].row < col[i].row) {
                    const std::uint32_t r = pivot_col[j].row;
                    merged.push_back({r, -(factor * pivot_col[j].value)});
                    row_lists_[r].push_back(k);
                    ++row_count_[r];
                    touch_row(r);
                    ++j;
                } else {
                    const std::uint32_t r = col[i].row;
                    Rational v = fraction_free ? col[i].value * pv : std::move(col[i].value);
                    v -= factor * pivot_col[j].value;
                    if (v.is_zero()) {
                        --row_count_[r];
                        touch_row(r);
                    } else {
                        merged.push_back({r, std::move(v)});
                    }
                    ++i;
                    ++j;
                }
            }
            col.swap(merged);
            if (fraction_free) divide_content(col);
            if (col.empty()) {
                col_alive_[k] = 0;
                --alive_cols_;
            } else {
                col_buckets_.push(col.size(), k);
            }
        }
        for (const auto& e : pivot_col) {
            --row_count_[e.row];
            touch_row(e.row);
        }
        col_alive_[pcol] = 0;
        --alive_cols_;
        row_alive_[prow] = 0;
        row_lists_[prow].clear();
        row_lists_[prow].shrink_to_fit();
        cols_[pcol].clear();
        cols_[pcol].shrink_to_fit();
    }

    std::vector<SparseColumn> cols_;
    std::vector<std::size_t> origin_;
    RankOptions opts_;
    std::vector<char> col_alive_;
    std::vector<std::vector<std::uint32_t>> row_lists_;
    std::vector<std::size_t> row_count_;
    std::vector<char> row_alive_;
    std::vector<std::uint64_t> stamp_;
    std::uint64_t epoch_ = 0;
    Buckets col_buckets_;
    Buckets row_buckets_;
    std::size_t alive_cols_ = 0;
};

} // namespace

EliminationResult eliminate(const std::vector<SparseColumn>& columns, std::size_t nrows, const RankOptions& opts) {
    std::vector<SparseColumn> work;
    std::vector<std::size_t> origin;
    std::unordered_map<std::size_t, std::vector<std::uint32_t>> seen;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].empty()) continue;
        SparseColumn col = columns[j];
        canonicalize(col);
        if (col.empty()) continue;
        if (col.back().row >= nrows) throw ContractError("eliminate: row index out of range");
        make_primitive(col);
        auto& bucket = seen[column_hash(col)];
        const bool duplicate =
            std::any_of(bucket.begin(), bucket.end(), [&](std::uint32_t k) { return work[k] == col; });
        if (duplicate) continue;
        bucket.push_back(static_cast<std::uint32_t>(work.size()));
        work.push_back(std::move(col));
        origin.push_back(j);
    }
    MarkowitzEliminator elim(std::move(work), std::move(origin), nrows, opts);
    auto result = elim.run();
    std::sort(result.pivot_columns.begin(), result.pivot_columns.end());
    return result;
}

RankAccumulator::RankAccumulator(std::size_t nrows, RankOptions opts)
    : nrows_(nrows), opts_(opts), limit_(std::min(nrows, opts.rank_bound.value_or(nrows))),
      batch_(opts.batch_columns ? opts.batch_columns : std::max<std::size_t>(8192, 4 * nrows)) {
    opts_.rank_bound = limit_;
}

void RankAccumulator::add(SparseColumn column) {
    canonicalize(column);
    ++seen_;
    if (column.empty()) return;
    if (column.back().row >= nrows_) throw ContractError("RankAccumulator: row index out of range");
    if (saturated()) return;
    pending_.push_back(std::move(column));
    if (pending_.size() >= batch_) compact();
}

void RankAccumulator::compact() {
    if (pending_.empty()) return;
    std::vector<SparseColumn> all = std::move(basis_);
    all.reserve(all.size() + pending_.size());
    for (auto& c : pending_) all.push_back(std::move(c));
    pending_.clear();
    const auto result = eliminate(all, nrows_, opts_);
    basis_.clear();
    basis_.reserve(result.pivot_columns.size());
    for (std::size_t idx : result.pivot_columns) basis_.push_back(std::move(all[idx]));
}

std::size_t RankAccumulator::rank() {
    compact();
    return basis_.size();
}

std::size_t rank(const SparseRationalMatrix& m, const RankOptions& opts) {
    RankAccumulator acc(m.nrows(), opts);
    for (const auto& col : m.columns()) acc.add(col);
    return acc.rank();
}

std::size_t kernel_dim(const SparseRationalMatrix& m, const RankOptions& opts) { return m.ncols() - rank(m, opts); }

void write_matrix_market(std::ostream& out, const SparseRationalMatrix& m) {
    out << m.nrows() << ' ' << m.ncols() << ' ' << m.nnz() << '\n';
    for (std::size_t j = 0; j < m.ncols(); ++j)
        for (const auto& e : m.column(j)) out << e.row + 1 << ' ' << j + 1 << ' ' << e.value.to_string() << '\n';
}

void write_matrix_market(const SparseRationalMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write matrix file " + path.string());
    write_matrix_market(out, m);
}

SparseRationalMatrix read_matrix_market(std::istream& in) {
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(in >> rows >> cols >> nnz)) throw InputError("matrix file: missing 'rows cols nnz' header");
    std::vector<SparseColumn> columns(cols);
    for (std::size_t k = 0; k < nnz; ++k) {
        std::size_t r = 0, c = 0;
        std::string value;
        if (!(in >> r >> c >> value)) throw InputError("matrix file: truncated at entry " + std::to_string(k + 1));
        if (r < 1 || r > rows || c < 1 || c > cols) throw InputError("matrix file: entry " + std::to_string(k + 1) + " out of range");
        columns[c - 1].push_back({static_cast<std::uint32_t>(r - 1), Rational::parse(value)});
    }
    SparseRationalMatrix m(rows);
    for (auto& col : columns) m.push_column(std::move(col));
    return m;
}

} // namespace cubehom
