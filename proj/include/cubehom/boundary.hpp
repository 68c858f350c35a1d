#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cubehom/cube_template.hpp"
#include "cubehom/enumeration.hpp"
#include "cubehom/key_map.hpp"
#include "cubehom/sparse_matrix.hpp"

namespace cubehom {

struct DictionaryEntry {
    std::uint32_t index;
    std::int8_t sign;
};

/// Maps every element of every kept class to (class index, relative sign).
/// Faces that miss the dictionary are degenerate or semi-degenerate and
/// vanish in the quotient complex.
class CoordinateDictionary {
public:
    explicit CoordinateDictionary(std::size_t key_width, std::size_t expected = 0) : map_(key_width, expected) {}

    const DictionaryEntry* find(std::span<const VertexId> cube) const noexcept { return map_.find(cube); }
    std::size_t size() const noexcept { return map_.size(); }
    std::size_t key_width() const noexcept { return map_.key_width(); }

    /// Throws InvariantError when the key is already present with a
    /// different (index, sign).
    void insert(std::span<const VertexId> cube, DictionaryEntry entry);

private:
    VertexArrayMap<DictionaryEntry> map_;
};

/// Dictionary over the orbits of `classes` (deduplicated, semi-degenerate
/// classes removed); the representative of class i maps to (i, +1).
CoordinateDictionary build_dictionary(const std::vector<CubeClass>& classes, const ActionTable& table);

/// Dictionary for the plain non-degenerate complex: cube k maps to (k, +1).
CoordinateDictionary build_plain_dictionary(const std::vector<SingularCube>& cubes);

/// Adds (-1)^i s at the row of delta_i^- and (-1)^(i+1) s at the row of
/// delta_i^+ for every face found in the dictionary.
SparseColumn boundary_column(std::span<const VertexId> cube, const CoordinateDictionary& dict, const FaceList& faces);

/// One column per class representative, in class order, with `rows` rows.
SparseRationalMatrix build_matrix(const std::vector<CubeClass>& classes, const CoordinateDictionary& dict,
                                  const FaceList& faces, std::size_t rows);

/// Plain complex: one column per non-degenerate cube.
SparseRationalMatrix build_plain_matrix(const std::vector<SingularCube>& cubes, const CoordinateDictionary& dict,
                                        const FaceList& faces, std::size_t rows);

/// Receives streamed columns in deterministic order.
class ColumnSink {
public:
    virtual ~ColumnSink() = default;
    virtual void add(SparseColumn column) = 0;
    /// When true the producer may stop early.
    virtual bool saturated() const { return false; }
};

class MatrixSink : public ColumnSink {
public:
    explicit MatrixSink(std::size_t rows) : matrix_(rows) {}
    void add(SparseColumn column) override { matrix_.push_column(std::move(column)); }
    SparseRationalMatrix& matrix() noexcept { return matrix_; }

private:
    SparseRationalMatrix matrix_;
};

class RankSink : public ColumnSink {
public:
    RankSink(std::size_t rows, RankOptions opts) : acc_(rows, opts) {}
    void add(SparseColumn column) override { acc_.add(std::move(column)); }
    bool saturated() const override { return acc_.saturated(); }
    std::size_t rank() { return acc_.rank(); }
    std::size_t columns_seen() const noexcept { return acc_.columns_seen(); }

private:
    RankAccumulator acc_;
};

struct StreamOptions {
    /// Stop scanning class j once a pairing with it has produced a column.
    bool shortcircuit = false;
    unsigned threads = 1;
    /// Allow stopping as soon as the sink reports saturation.
    bool stop_when_saturated = true;
};

struct StreamStats {
    std::uint64_t pairings = 0;
    std::uint64_t columns = 0;
    bool stopped_early = false;
};

/// Streams the columns of the top boundary matrix d_{n+1}: each
/// representative a of an n-class i is paired with every element b of every
/// class j >= i; kept (non-semi-degenerate) cubes a * b emit their boundary
/// column in (i, j, element) order. `classes` are all n-classes, `dict` the
/// dictionary of the kept ones. Duplicate columns are emitted as produced.
StreamStats stream_top(const std::vector<CubeClass>& classes, const CoordinateDictionary& dict, const Graph& g,
                       const CubeTemplate& lower, const CubeTemplate& upper, const StreamOptions& opts,
                       ColumnSink& sink);

SparseRationalMatrix stream_top_matrix(const std::vector<CubeClass>& classes, const CoordinateDictionary& dict,
                                       std::size_t rows, const Graph& g, const CubeTemplate& lower,
                                       const CubeTemplate& upper, bool shortcircuit, unsigned threads = 1);

/// Plain complex: pairs every n-cube with every n-cube and emits the columns
/// of the non-degenerate results.
StreamStats stream_top_plain(const std::vector<SingularCube>& cubes, const CoordinateDictionary& dict, const Graph& g,
                             const FaceList& upper_faces, const StreamOptions& opts, ColumnSink& sink);

} // namespace cubehom
