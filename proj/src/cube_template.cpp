#include "cubehom/cube_template.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "cubehom/errors.hpp"

namespace cubehom {

namespace {

void check_dimension(int n) {
    if (n < 0 || n > max_template_dimension) {
        throw InputError("cube dimension " + std::to_string(n) + " outside supported range [0, " +
                         std::to_string(max_template_dimension) + "]");
    }
}

// Inserts `bit` at position `pos` of the binary expansion of j.
CubeVertexIndex insert_bit(std::uint32_t j, int pos, std::uint32_t bit) {
    const std::uint32_t low = j & ((1U << pos) - 1U);
    const std::uint32_t high = j >> pos;
    return low | (bit << pos) | (high << (pos + 1));
}

} // namespace

FaceList build_face_list(int n) {
    if (n < 1) throw ContractError("face lists need n >= 1");
    check_dimension(n);
    FaceList fl;
    fl.n = n;
    const std::uint32_t half = 1U << (n - 1);
    for (int i = 1; i <= n; ++i) {
        FacePair fp;
        fp.neg.reserve(half);
        fp.pos.reserve(half);
        for (std::uint32_t j = 0; j < half; ++j) {
            fp.neg.push_back(insert_bit(j, i - 1, 0));
            fp.pos.push_back(insert_bit(j, i - 1, 1));
        }
        fl.entries.push_back(std::move(fp));
    }
    return fl;
}

std::vector<std::pair<std::vector<VertexId>, std::vector<VertexId>>> faces_of(std::span<const VertexId> cube,
                                                                              const FaceList& faces) {
    if (cube.size() != (std::size_t{1} << faces.n)) {
        throw InputError("cube of size " + std::to_string(cube.size()) + " does not match face list dimension " +
                         std::to_string(faces.n));
    }
    std::vector<std::pair<std::vector<VertexId>, std::vector<VertexId>>> out;
    out.reserve(faces.entries.size());
    for (const auto& fp : faces.entries) {
        std::vector<VertexId> neg, pos;
        neg.reserve(fp.neg.size());
        pos.reserve(fp.pos.size());
        for (auto m : fp.neg) neg.push_back(cube[m]);
        for (auto m : fp.pos) pos.push_back(cube[m]);
        out.emplace_back(std::move(neg), std::move(pos));
    }
    return out;
}

int permutation_sign(std::span<const int> perm) {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

std::vector<GroupElement> generate_group(int n) {
    check_dimension(n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<GroupElement> group;
    do {
        const int perm_sign = permutation_sign(perm);
        // mask bit (n - 1 - i) set <=> reversal[i] = -1, so +1 sorts first
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            GroupElement g;
            g.perm = perm;
            g.reversal.resize(n);
            int sign = perm_sign;
            for (int i = 0; i < n; ++i) {
                g.reversal[i] = (mask >> (n - 1 - i) & 1U) ? -1 : 1;
                sign *= g.reversal[i];
            }
            g.sign = sign;
            group.push_back(std::move(g));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return group;
}

CubeVertexIndex vertex_image(CubeVertexIndex v, const GroupElement& g, int n) {
    CubeVertexIndex image = 0;
    for (int i = 0; i < n; ++i) {
        std::uint32_t bit = v >> (g.perm[i] - 1) & 1U;
        if (g.reversal[i] == -1) bit ^= 1U;
        image |= bit << i;
    }
    return image;
}

ActionTable build_action_table(int n) {
    const auto group = generate_group(n);
    ActionTable t;
    t.n_ = n;
    t.cube_size_ = std::size_t{1} << n;
    t.perms_.reserve(group.size() * t.cube_size_);
    t.signs_.reserve(group.size());
    for (std::size_t row = 0; row < group.size(); ++row) {
        const auto& g = group[row];
        for (CubeVertexIndex m = 0; m < t.cube_size_; ++m) t.perms_.push_back(vertex_image(m, g, n));
        t.signs_.push_back(static_cast<std::int8_t>(g.sign));
        if (g.sign < 0) t.negative_rows_.push_back(static_cast<std::uint32_t>(row));
    }
    const std::size_t width = std::max(n, 1);
    auto slot_of = [&](std::uint32_t row) {
        const CubeVertexIndex* perm = t.perms_.data() + row * t.cube_size_;
        const int k = t.cube_size_ > 1 && n > 1 ? std::countr_zero(perm[0] ^ perm[1]) : 0;
        return perm[0] * width + k;
    };
    t.negative_offsets_.assign(t.cube_size_ * width + 1, 0);
    for (std::uint32_t row : t.negative_rows_) ++t.negative_offsets_[slot_of(row) + 1];
    for (std::size_t s = 0; s + 1 < t.negative_offsets_.size(); ++s) t.negative_offsets_[s + 1] += t.negative_offsets_[s];
    t.negative_by_first_.resize(t.negative_rows_.size());
    std::vector<std::size_t> fill(t.negative_offsets_.begin(), t.negative_offsets_.end() - 1);
    for (std::uint32_t row : t.negative_rows_) t.negative_by_first_[fill[slot_of(row)]++] = row;
    return t;
}

std::vector<std::pair<std::vector<VertexId>, int>> orbit_of(std::span<const VertexId> cube, const ActionTable& table) {
    if (cube.size() != table.cube_size()) {
        throw InputError("cube of size " + std::to_string(cube.size()) + " does not match action table dimension " +
                         std::to_string(table.n()));
    }
    std::vector<std::pair<std::vector<VertexId>, int>> out;
    out.reserve(table.size());
    for (std::size_t row = 0; row < table.size(); ++row) {
        std::vector<VertexId> image(cube.size());
        apply_row(cube, table, row, image);
        out.emplace_back(std::move(image), table.sign(row));
    }
    return out;
}

std::shared_ptr<const CubeTemplate> cube_template(int n) {
    check_dimension(n);
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const CubeTemplate>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        auto t = std::make_shared<CubeTemplate>();
        if (n >= 1) t->faces = build_face_list(n);
        t->action = build_action_table(n);
        slot = std::move(t);
    }
    return slot;
}

} // namespace cubehom
