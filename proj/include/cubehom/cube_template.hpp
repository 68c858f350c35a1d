#pragma once

// Combinatorics of the discrete n-cube shared by every singular cube of
// dimension n: face index lists and the signed hyperoctahedral action.
//
// Vertex m of the n-cube has coordinate x_k = bit (k - 1) of m, so pairing
// two (n-1)-cubes A, B into A * B is plain concatenation: coordinate n is the
// most significant bit.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "cubehom/graph.hpp"

namespace cubehom {

using CubeVertexIndex = std::uint32_t;

/// Largest dimension for which templates can be built. R_7 has 645120
/// elements acting on 128 vertices, which is already ~330 MB of table.
inline constexpr int max_template_dimension = 7;

struct FacePair {
    std::vector<CubeVertexIndex> neg;
    std::vector<CubeVertexIndex> pos;
};

/// entries[i - 1] holds the negative and positive i-th faces of the n-cube.
struct FaceList {
    int n = 0;
    std::vector<FacePair> entries;
};

FaceList build_face_list(int n);

/// delta_i^-(A), delta_i^+(A) for i = 1..n. Throws InputError when |A| != 2^n.
std::vector<std::pair<std::vector<VertexId>, std::vector<VertexId>>> faces_of(std::span<const VertexId> cube,
                                                                              const FaceList& faces);

/// An element (tau, r) of the hyperoctahedral group R_n.
struct GroupElement {
    std::vector<int> perm;     // perm[i - 1] = tau(i), 1-based images
    std::vector<int> reversal; // +1 or -1 per coordinate
    int sign = 1;              // sgn(tau) * prod(reversal)
};

int permutation_sign(std::span<const int> perm);

/// All 2^n * n! elements: identity first, then lexicographic in (perm,
/// reversal) with +1 ordered before -1.
std::vector<GroupElement> generate_group(int n);

/// Image of cube vertex v: output coordinate i is input coordinate perm[i],
/// complemented when reversal[i] = -1.
CubeVertexIndex vertex_image(CubeVertexIndex v, const GroupElement& g, int n);

/// Row k of the table represents the group element g_k acting on singular
/// cubes by precomposition: sigma(A)[m] = A[index_perm[m]].
class ActionTable {
public:
    int n() const noexcept { return n_; }
    std::size_t cube_size() const noexcept { return cube_size_; }
    std::size_t size() const noexcept { return signs_.size(); }

    std::span<const CubeVertexIndex> index_perm(std::size_t row) const {
        return {perms_.data() + row * cube_size_, cube_size_};
    }
    int sign(std::size_t row) const { return signs_[row]; }

    /// Rows with sign -1, in table order.
    std::span<const std::uint32_t> negative_rows() const noexcept { return negative_rows_; }

    /// Sign -1 rows sending position 0 to p and position 1 to p ^ (1 << k)
    /// (for n = 1 only k = 0 occurs and position 1 is ignored).
    std::span<const std::uint32_t> negative_rows_from(CubeVertexIndex p, int k) const {
        const std::size_t slot = p * std::max(n_, 1) + k;
        return {negative_by_first_.data() + negative_offsets_[slot], negative_offsets_[slot + 1] - negative_offsets_[slot]};
    }

    friend ActionTable build_action_table(int n);

private:
    int n_ = 0;
    std::size_t cube_size_ = 1;
    std::vector<CubeVertexIndex> perms_;
    std::vector<std::int8_t> signs_;
    std::vector<std::uint32_t> negative_rows_;
    std::vector<std::uint32_t> negative_by_first_;
    std::vector<std::size_t> negative_offsets_;
};

ActionTable build_action_table(int n);

/// (sigma(A), sgn sigma) for every table row, in table order.
std::vector<std::pair<std::vector<VertexId>, int>> orbit_of(std::span<const VertexId> cube, const ActionTable& table);

/// Writes sigma_row(A) into `out` (size 2^n).
inline void apply_row(std::span<const VertexId> cube, const ActionTable& table, std::size_t row,
                      std::span<VertexId> out) {
    const auto perm = table.index_perm(row);
    for (std::size_t m = 0; m < perm.size(); ++m) out[m] = cube[perm[m]];
}

/// Face list and action table for one dimension.
struct CubeTemplate {
    FaceList faces;
    ActionTable action;
};

/// Process-wide cache; each dimension is built once and shared immutably.
std::shared_ptr<const CubeTemplate> cube_template(int n);

} // namespace cubehom
