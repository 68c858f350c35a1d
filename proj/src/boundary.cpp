#include "cubehom/boundary.hpp"

#include <algorithm>
#include <string>

#include "cubehom/errors.hpp"
#include "cubehom/parallel.hpp"

namespace cubehom {

void CoordinateDictionary::insert(std::span<const VertexId> cube, DictionaryEntry entry) {
    const auto [stored, inserted] = map_.try_emplace(cube, entry);
    if (!inserted && (stored->index != entry.index || stored->sign != entry.sign)) {
        throw InvariantError("coordinate dictionary conflict: cube maps to class " + std::to_string(stored->index) +
                             " sign " + std::to_string(stored->sign) + " and class " + std::to_string(entry.index) +
                             " sign " + std::to_string(entry.sign));
    }
}

CoordinateDictionary build_dictionary(const std::vector<CubeClass>& classes, const ActionTable& table) {
    CoordinateDictionary dict(table.cube_size(), classes.size() * table.size());
    std::vector<VertexId> image(table.cube_size());
    for (std::uint32_t i = 0; i < classes.size(); ++i) {
        for (std::size_t row = 0; row < table.size(); ++row) {
            apply_row(classes[i].representative, table, row, image);
            dict.insert(image, {i, static_cast<std::int8_t>(table.sign(row))});
        }
    }
    return dict;
}

CoordinateDictionary build_plain_dictionary(const std::vector<SingularCube>& cubes) {
    CoordinateDictionary dict(cubes.empty() ? 1 : cubes.front().vertices.size(), cubes.size());
    std::uint32_t k = 0;
    for (const auto& c : cubes)
        if (!c.is_degenerate()) dict.insert(c.vertices, {k++, 1});
    return dict;
}

namespace {

SparseColumn to_column(std::vector<std::pair<std::uint32_t, int>>& acc) {
    std::sort(acc.begin(), acc.end());
    SparseColumn col;
    for (std::size_t i = 0; i < acc.size();) {
        int sum = 0;
        std::size_t j = i;
        for (; j < acc.size() && acc[j].first == acc[i].first; ++j) sum += acc[j].second;
        if (sum != 0) col.push_back({acc[i].first, Rational(sum)});
        i = j;
    }
    return col;
}

} // namespace

namespace {

// Appends the entries of faces 1..count of `cube`.
void face_entries(std::span<const VertexId> cube, const CoordinateDictionary& dict, const FaceList& faces, int count,
                  std::vector<std::pair<std::uint32_t, int>>& acc, std::vector<VertexId>& face) {
    face.resize(cube.size() / 2);
    for (int i = 1; i <= count; ++i) {
        const auto& entry = faces.entries[i - 1];
        const int sign_neg = (i % 2 == 0) ? 1 : -1;
        for (std::size_t k = 0; k < face.size(); ++k) face[k] = cube[entry.neg[k]];
        if (const auto* hit = dict.find(face)) acc.emplace_back(hit->index, sign_neg * hit->sign);
        for (std::size_t k = 0; k < face.size(); ++k) face[k] = cube[entry.pos[k]];
        if (const auto* hit = dict.find(face)) acc.emplace_back(hit->index, -sign_neg * hit->sign);
    }
}

} // namespace

SparseColumn boundary_column(std::span<const VertexId> cube, const CoordinateDictionary& dict, const FaceList& faces) {
    if (cube.size() != (std::size_t{1} << faces.n)) throw InputError("boundary_column: cube size does not match faces");
    std::vector<std::pair<std::uint32_t, int>> acc;
    std::vector<VertexId> face;
    face_entries(cube, dict, faces, faces.n, acc, face);
    return to_column(acc);
}

SparseRationalMatrix build_matrix(const std::vector<CubeClass>& classes, const CoordinateDictionary& dict,
                                  const FaceList& faces, std::size_t rows) {
    SparseRationalMatrix m(rows);
    for (const auto& c : classes) m.push_column(boundary_column(c.representative, dict, faces));
    return m;
}

SparseRationalMatrix build_plain_matrix(const std::vector<SingularCube>& cubes, const CoordinateDictionary& dict,
                                        const FaceList& faces, std::size_t rows) {
    SparseRationalMatrix m(rows);
    for (const auto& c : cubes)
        if (!c.is_degenerate()) m.push_column(boundary_column(c.vertices, dict, faces));
    return m;
}

namespace {

constexpr std::size_t stream_block = 8;

// Runs produce(block, emit) for consecutive blocks and hands the columns to
// the sink in block order.
template <class Produce>
StreamStats run_stream(std::size_t items, const StreamOptions& opts, ColumnSink& sink, Produce&& produce) {
    StreamStats stats;
    const std::size_t blocks = (items + stream_block - 1) / stream_block;
    if (opts.threads <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            if (opts.stop_when_saturated && sink.saturated()) {
                stats.stopped_early = true;
                break;
            }
            produce(b, stats, [&](SparseColumn col) { sink.add(std::move(col)); });
        }
        return stats;
    }
    const std::size_t wave = static_cast<std::size_t>(opts.threads) * 4;
    for (std::size_t first = 0; first < blocks; first += wave) {
        if (opts.stop_when_saturated && sink.saturated()) {
            stats.stopped_early = true;
            break;
        }
        const std::size_t count = std::min(wave, blocks - first);
        std::vector<std::vector<SparseColumn>> out(count);
        std::vector<StreamStats> local(count);
        parallel_blocks(count, opts.threads, [&](std::size_t k) {
            produce(first + k, local[k], [&](SparseColumn col) { out[k].push_back(std::move(col)); });
        });
        for (std::size_t k = 0; k < count; ++k) {
            stats.pairings += local[k].pairings;
            stats.columns += local[k].columns;
            for (auto& col : out[k]) sink.add(std::move(col));
            std::vector<SparseColumn>().swap(out[k]);
        }
    }
    return stats;
}

} // namespace

StreamStats stream_top(const std::vector<CubeClass>& classes, const CoordinateDictionary& dict, const Graph& g,
                       const CubeTemplate& lower, const CubeTemplate& upper, const StreamOptions& opts,
                       ColumnSink& sink) {
    if (upper.action.n() != lower.action.n() + 1) throw ContractError("stream_top: templates must be consecutive");
    const std::size_t half = lower.action.cube_size();
    const PairingIndex index(classes, lower.action);
    // Row of each class in the dictionary, or -1 when it was filtered out.
    // The last faces of a * b are a and b, so they need no lookup.
    std::vector<std::int64_t> row_of(classes.size(), -1);
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (const auto* hit = dict.find(classes[i].representative)) row_of[i] = hit->index;
    const int n = lower.action.n();
    const int top_sign = ((n + 1) % 2 == 0) ? 1 : -1;
    return run_stream(classes.size(), opts, sink, [&](std::size_t block, StreamStats& stats, auto&& emit) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> cand;
        std::vector<std::pair<std::uint32_t, int>> acc;
        std::vector<VertexId> face;
        std::vector<VertexId> cube(upper.action.cube_size());
        const std::span<VertexId> b(cube.data() + half, half);
        const std::size_t end = std::min(classes.size(), (block + 1) * stream_block);
        for (std::size_t i = block * stream_block; i < end; ++i) {
            const auto& a = classes[i].representative;
            std::copy(a.begin(), a.end(), cube.begin());
            index.candidates(a, static_cast<std::uint32_t>(i), g, cand);
            std::uint32_t done = ~0U;
            for (const auto& [j, row] : cand) {
                if (j == done) continue;
                apply_row(classes[j].representative, lower.action, row, b);
                if (!is_pair_cube(a, b, g)) continue;
                ++stats.pairings;
                if (is_semi_degenerate(cube, upper.action)) continue;
                ++stats.columns;
                acc.clear();
                face_entries(cube, dict, upper.faces, n, acc, face);
                if (row_of[i] >= 0) acc.emplace_back(static_cast<std::uint32_t>(row_of[i]), top_sign);
                if (row_of[j] >= 0)
                    acc.emplace_back(static_cast<std::uint32_t>(row_of[j]), -top_sign * lower.action.sign(row));
                emit(to_column(acc));
                if (opts.shortcircuit) done = j;
            }
        }
    });
}

SparseRationalMatrix stream_top_matrix(const std::vector<CubeClass>& classes, const CoordinateDictionary& dict,
                                       std::size_t rows, const Graph& g, const CubeTemplate& lower,
                                       const CubeTemplate& upper, bool shortcircuit, unsigned threads) {
    MatrixSink sink(rows);
    stream_top(classes, dict, g, lower, upper, {shortcircuit, threads, false}, sink);
    return std::move(sink.matrix());
}

StreamStats stream_top_plain(const std::vector<SingularCube>& cubes, const CoordinateDictionary& dict, const Graph& g,
                             const FaceList& upper_faces, const StreamOptions& opts, ColumnSink& sink) {
    std::vector<std::vector<std::uint32_t>> by_first(g.num_vertices());
    for (std::uint32_t k = 0; k < cubes.size(); ++k) by_first[cubes[k].vertices.front()].push_back(k);
    return run_stream(cubes.size(), opts, sink, [&](std::size_t block, StreamStats& stats, auto&& emit) {
        std::vector<std::uint32_t> partners;
        const std::size_t end = std::min(cubes.size(), (block + 1) * stream_block);
        for (std::size_t ia = block * stream_block; ia < end; ++ia) {
            const auto& a = cubes[ia];
            partners.clear();
            for (VertexId w : g.neighbors(a.vertices.front()))
                partners.insert(partners.end(), by_first[w].begin(), by_first[w].end());
            std::sort(partners.begin(), partners.end());
            for (std::uint32_t ib : partners) {
                if (!is_pair_cube(a, cubes[ib], g)) continue;
                ++stats.pairings;
                const SingularCube c = pair(a, cubes[ib], g);
                if (c.is_degenerate()) continue;
                ++stats.columns;
                emit(boundary_column(c.vertices, dict, upper_faces));
            }
        }
    });
}

} // namespace cubehom
