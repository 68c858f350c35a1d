#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cubehom/cube_template.hpp"
#include "cubehom/graph.hpp"

namespace cubehom {

/// A graph map I_1^{□n} -> G with its degenerate coordinates; bit i - 1 of
/// `degenerate` is set when delta_i^- = delta_i^+.
struct SingularCube {
    std::vector<VertexId> vertices;
    std::uint64_t degenerate = 0;

    int dimension() const noexcept { return std::countr_zero(vertices.size()); }
    bool is_degenerate() const noexcept { return degenerate != 0; }

    friend bool operator==(const SingularCube&, const SingularCube&) = default;
};

inline constexpr std::uint64_t default_naive_cap = 100'000'000;

/// Degenerate coordinates found by comparing both faces of every coordinate.
std::uint64_t direct_degenerate_coords(std::span<const VertexId> cube);

/// True when every edge of the cube graph maps into an edge or loop of G.
bool is_graph_map(std::span<const VertexId> cube, const Graph& g);

/// One 0-cube [v] per vertex.
std::vector<SingularCube> zero_cubes(const Graph& g);

/// Every graph map I_1^{□n} -> G, by exhaustive search over vertex
/// assignments. Refuses with InputError when |G_V|^(2^n) exceeds `cap`.
std::vector<SingularCube> naive_maps(const Graph& g, int n, std::uint64_t cap = default_naive_cap);

bool is_pair_cube(std::span<const VertexId> a, std::span<const VertexId> b, const Graph& g);
inline bool is_pair_cube(const SingularCube& a, const SingularCube& b, const Graph& g) {
    return is_pair_cube(a.vertices, b.vertices, g);
}

/// A * B: the cube whose n-th negative and positive faces are A and B.
/// Throws ContractError unless is_pair_cube(a, b, g).
SingularCube pair(const SingularCube& a, const SingularCube& b, const Graph& g);

/// All n-cubes from the (n-1)-cubes, each exactly once, ordered by
/// (index of negative face, index of positive face).
std::vector<SingularCube> next_dimension(const std::vector<SingularCube>& cubes, const Graph& g, unsigned threads = 1);

/// Lexicographically least element of the orbit of `cube`.
std::vector<VertexId> canonical_key(std::span<const VertexId> cube, const ActionTable& table);

/// Fixed by some sign -1 element of the table.
bool is_semi_degenerate(std::span<const VertexId> cube, const ActionTable& table);

/// An orbit under the signed action. Only the representative (the generating
/// element) and the canonical key are stored; elements are recomputed.
struct CubeClass {
    std::vector<VertexId> representative;
    std::vector<VertexId> canonical_key;

    std::vector<std::pair<std::vector<VertexId>, int>> elements(const ActionTable& table) const {
        return orbit_of(representative, table);
    }

    friend bool operator==(const CubeClass&, const CubeClass&) = default;
};

CubeClass make_class(std::vector<VertexId> representative, const ActionTable& table);

std::vector<CubeClass> zero_classes(const Graph& g);

/// For class representatives a, lists every element b of a class j >= i
/// whose vertices at positions 0 and 1 are adjacent to a[0] and a[1], as
/// (j, table row) sorted lexicographically.
class PairingIndex {
public:
    PairingIndex(const std::vector<CubeClass>& classes, const ActionTable& table);

    void candidates(std::span<const VertexId> a, std::uint32_t min_class, const Graph& g,
                    std::vector<std::pair<std::uint32_t, std::uint32_t>>& out) const;

private:
    static std::uint64_t pack(VertexId u, VertexId v) noexcept { return (std::uint64_t{u} << 32) | v; }

    struct Entry {
        std::uint64_t key; // images of positions 0 and 1 under the slot's rows
        std::uint32_t cls;
        std::uint32_t slot;
    };

    std::size_t cube_size_;
    // Sorted by (key, cls, slot); ranges_ maps a key to its run.
    std::vector<Entry> entries_;
    std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> ranges_;
    // rows_by_slot_[s] lists the rows sending positions (0, 1) to slot s's pair.
    std::vector<std::vector<std::uint32_t>> rows_by_slot_;
};

/// The distinct n-classes, generated by pairing each representative of an
/// (n-1)-class i with every element of every class j >= i. `prev` is the
/// table of dimension n - 1 and `next` the table of dimension n.
/// Representatives are the first generated cube of each orbit.
std::vector<CubeClass> next_dimension_classes(const std::vector<CubeClass>& classes, const Graph& g,
                                              const ActionTable& prev, const ActionTable& next, unsigned threads = 1);

/// Keeps the first class of each canonical key.
std::vector<CubeClass> dedupe_classes(std::vector<CubeClass> raw);

/// Drops every class whose representative is fixed by a sign -1 element.
std::vector<CubeClass> remove_semi_degenerate(const std::vector<CubeClass>& classes, const ActionTable& table);

} // namespace cubehom
