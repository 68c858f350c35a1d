#include "cubehom/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <string>

#include "cubehom/errors.hpp"
#include "cubehom/key_map.hpp"
#include "cubehom/parallel.hpp"

namespace cubehom {

std::uint64_t direct_degenerate_coords(std::span<const VertexId> cube) {
    const std::size_t size = cube.size();
    const int n = std::countr_zero(size);
    std::uint64_t mask = 0;
    for (int i = 0; i < n; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        bool equal = true;
        for (std::size_t m = 0; m < size && equal; ++m)
            if (!(m & bit) && cube[m] != cube[m | bit]) equal = false;
        if (equal) mask |= std::uint64_t{1} << i;
    }
    return mask;
}

bool is_graph_map(std::span<const VertexId> cube, const Graph& g) {
    for (std::size_t m = 0; m < cube.size(); ++m) {
        if (cube[m] >= g.num_vertices()) return false;
        for (std::size_t bit = 1; bit < cube.size(); bit <<= 1)
            if (!(m & bit) && !g.adjacent(cube[m], cube[m | bit])) return false;
    }
    return true;
}

std::vector<SingularCube> zero_cubes(const Graph& g) {
    std::vector<SingularCube> out;
    out.reserve(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) out.push_back({{v}, 0});
    return out;
}

std::vector<SingularCube> naive_maps(const Graph& g, int n, std::uint64_t cap) {
    if (n < 0 || n > max_template_dimension) throw InputError("naive_maps: unsupported dimension " + std::to_string(n));
    const std::size_t size = std::size_t{1} << n;
    const long double candidates = std::pow(static_cast<long double>(g.num_vertices()), static_cast<long double>(size));
    if (candidates > static_cast<long double>(cap)) {
        throw InputError("naive enumeration of " + std::to_string(g.num_vertices()) + "^" + std::to_string(size) +
                         " vertex assignments exceeds the cap of " + std::to_string(cap) +
                         "; use the pairing pipeline instead");
    }
    std::vector<SingularCube> out;
    if (g.num_vertices() == 0) return out;
    std::vector<VertexId> cube(size, 0);
    std::vector<std::size_t> choice(size, 0);
    // Depth-first over positions 0..size-1 trying every vertex at each.
    std::size_t m = 0;
    for (;;) {
        if (choice[m] < g.num_vertices()) {
            const VertexId v = static_cast<VertexId>(choice[m]++);
            bool ok = true;
            for (std::size_t bit = 1; bit <= m && ok; bit <<= 1)
                if ((m & bit) && !g.adjacent(cube[m ^ bit], v)) ok = false;
            if (!ok) continue;
            cube[m] = v;
            if (m + 1 == size) {
                out.push_back({cube, direct_degenerate_coords(cube)});
            } else {
                choice[++m] = 0;
            }
        } else {
            if (m == 0) break;
            --m;
        }
    }
    return out;
}

bool is_pair_cube(std::span<const VertexId> a, std::span<const VertexId> b, const Graph& g) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!g.adjacent(a[i], b[i])) return false;
    return true;
}

SingularCube pair(const SingularCube& a, const SingularCube& b, const Graph& g) {
    if (!is_pair_cube(a, b, g)) throw ContractError("pair: cubes are not pointwise adjacent");
    SingularCube c;
    c.vertices.reserve(a.vertices.size() * 2);
    c.vertices.insert(c.vertices.end(), a.vertices.begin(), a.vertices.end());
    c.vertices.insert(c.vertices.end(), b.vertices.begin(), b.vertices.end());
    c.degenerate = a.degenerate & b.degenerate;
    if (a.vertices == b.vertices) c.degenerate |= std::uint64_t{1} << a.dimension();
    return c;
}

namespace {

constexpr std::size_t block_size = 64;

std::size_t num_blocks(std::size_t items) { return (items + block_size - 1) / block_size; }

} // namespace

std::vector<SingularCube> next_dimension(const std::vector<SingularCube>& cubes, const Graph& g, unsigned threads) {
    if (cubes.empty()) return {};
    std::vector<std::vector<std::uint32_t>> by_first(g.num_vertices());
    for (std::uint32_t k = 0; k < cubes.size(); ++k) by_first[cubes[k].vertices.front()].push_back(k);

    std::vector<std::vector<SingularCube>> blocks(num_blocks(cubes.size()));
    parallel_blocks(blocks.size(), threads, [&](std::size_t block) {
        std::vector<std::uint32_t> partners;
        const std::size_t end = std::min(cubes.size(), (block + 1) * block_size);
        for (std::size_t ia = block * block_size; ia < end; ++ia) {
            const auto& a = cubes[ia];
            partners.clear();
            for (VertexId w : g.neighbors(a.vertices.front()))
                partners.insert(partners.end(), by_first[w].begin(), by_first[w].end());
            std::sort(partners.begin(), partners.end());
            for (std::uint32_t ib : partners)
                if (is_pair_cube(a, cubes[ib], g)) blocks[block].push_back(pair(a, cubes[ib], g));
        }
    });
    std::vector<SingularCube> out;
    for (auto& b : blocks) {
        out.insert(out.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
        std::vector<SingularCube>().swap(b);
    }
    return out;
}

std::vector<VertexId> canonical_key(std::span<const VertexId> cube, const ActionTable& table) {
    if (cube.size() != table.cube_size()) throw InputError("canonical_key: cube size does not match table");
    std::vector<VertexId> best(cube.begin(), cube.end());
    for (std::size_t row = 1; row < table.size(); ++row) {
        const auto perm = table.index_perm(row);
        for (std::size_t m = 0; m < perm.size(); ++m) {
            const VertexId v = cube[perm[m]];
            if (v > best[m]) break;
            if (v < best[m]) {
                for (std::size_t k = m; k < perm.size(); ++k) best[k] = cube[perm[k]];
                break;
            }
        }
    }
    return best;
}

bool is_semi_degenerate(std::span<const VertexId> cube, const ActionTable& table) {
    if (cube.size() != table.cube_size()) throw InputError("is_semi_degenerate: cube size does not match table");
    if (direct_degenerate_coords(cube) != 0) return true;
    // A fixing element sends positions 0 and 1 to positions holding the same
    // vertices; position 1 is adjacent to 0, so its image is adjacent to p.
    const int n = table.n();
    for (CubeVertexIndex p = 0; p < cube.size(); ++p) {
        if (cube[p] != cube[0]) continue;
        for (int k = 0; k < std::max(n, 1); ++k) {
            if (n > 1 && cube[p ^ (1U << k)] != cube[1]) continue;
            for (std::uint32_t row : table.negative_rows_from(p, k)) {
                const auto perm = table.index_perm(row);
                bool fixed = true;
                for (std::size_t m = 1; m < perm.size() && fixed; ++m) fixed = cube[perm[m]] == cube[m];
                if (fixed) return true;
            }
        }
    }
    return false;
}

CubeClass make_class(std::vector<VertexId> representative, const ActionTable& table) {
    auto key = canonical_key(representative, table);
    return {std::move(representative), std::move(key)};
}

std::vector<CubeClass> zero_classes(const Graph& g) {
    std::vector<CubeClass> out;
    out.reserve(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) out.push_back({{v}, {v}});
    return out;
}

PairingIndex::PairingIndex(const std::vector<CubeClass>& classes, const ActionTable& table)
    : cube_size_(table.cube_size()) {
    std::map<std::pair<CubeVertexIndex, CubeVertexIndex>, std::uint32_t> slot_of;
    std::vector<std::pair<CubeVertexIndex, CubeVertexIndex>> slots;
    for (std::uint32_t row = 0; row < table.size(); ++row) {
        const auto perm = table.index_perm(row);
        const std::pair<CubeVertexIndex, CubeVertexIndex> pos{perm[0], cube_size_ > 1 ? perm[1] : 0};
        auto [it, inserted] = slot_of.emplace(pos, static_cast<std::uint32_t>(slots.size()));
        if (inserted) {
            slots.push_back(pos);
            rows_by_slot_.emplace_back();
        }
        rows_by_slot_[it->second].push_back(row);
    }
    entries_.reserve(classes.size() * slots.size());
    for (std::uint32_t j = 0; j < classes.size(); ++j) {
        const auto& rep = classes[j].representative;
        if (rep.size() != cube_size_) throw InputError("PairingIndex: class size does not match table");
        for (std::uint32_t s = 0; s < slots.size(); ++s) {
            const VertexId second = cube_size_ > 1 ? rep[slots[s].second] : 0;
            entries_.push_back({pack(rep[slots[s].first], second), j, s});
        }
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& x, const Entry& y) {
        return std::tie(x.key, x.cls, x.slot) < std::tie(y.key, y.cls, y.slot);
    });
    for (std::uint32_t k = 0; k < entries_.size();) {
        std::uint32_t end = k;
        while (end < entries_.size() && entries_[end].key == entries_[k].key) ++end;
        ranges_.emplace(entries_[k].key, std::pair{k, end});
        k = end;
    }
}

void PairingIndex::candidates(std::span<const VertexId> a, std::uint32_t min_class, const Graph& g,
                              std::vector<std::pair<std::uint32_t, std::uint32_t>>& out) const {
    out.clear();
    // Each matching key contributes a run sorted by (class, slot); the runs
    // are merged with a heap and expanded to rows one class at a time.
    using Run = std::pair<const Entry*, const Entry*>;
    thread_local std::vector<Run> runs;
    runs.clear();
    auto collect = [&](std::uint64_t key) {
        const auto it = ranges_.find(key);
        if (it == ranges_.end()) return;
        const Entry* first = entries_.data() + it->second.first;
        const Entry* last = entries_.data() + it->second.second;
        first = std::lower_bound(first, last, min_class, [](const Entry& e, std::uint32_t c) { return e.cls < c; });
        if (first != last) runs.emplace_back(first, last);
    };
    for (VertexId w0 : g.neighbors(a[0])) {
        if (cube_size_ == 1) {
            collect(pack(w0, 0));
            continue;
        }
        for (VertexId w1 : g.neighbors(a[1]))
            if (g.adjacent(w0, w1)) collect(pack(w0, w1));
    }
    auto later = [](const Run& x, const Run& y) {
        return std::tie(x.first->cls, x.first->slot) > std::tie(y.first->cls, y.first->slot);
    };
    std::make_heap(runs.begin(), runs.end(), later);
    while (!runs.empty()) {
        const std::uint32_t cls = runs.front().first->cls;
        const std::size_t group = out.size();
        while (!runs.empty() && runs.front().first->cls == cls) {
            std::pop_heap(runs.begin(), runs.end(), later);
            auto& run = runs.back();
            for (; run.first != run.second && run.first->cls == cls; ++run.first)
                for (std::uint32_t row : rows_by_slot_[run.first->slot]) out.emplace_back(cls, row);
            if (run.first == run.second) {
                runs.pop_back();
            } else {
                std::push_heap(runs.begin(), runs.end(), later);
            }
        }
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(group), out.end());
    }
}

std::vector<CubeClass> next_dimension_classes(const std::vector<CubeClass>& classes, const Graph& g,
                                              const ActionTable& prev, const ActionTable& next, unsigned threads) {
    if (classes.empty()) return {};
    if (next.n() != prev.n() + 1) throw ContractError("next_dimension_classes: tables must be of consecutive dimension");
    const std::size_t half = prev.cube_size();
    const PairingIndex index(classes, prev);

    VertexArrayMap<std::uint32_t> seen(next.cube_size());
    std::vector<CubeClass> out;
    const std::size_t total_blocks = num_blocks(classes.size());
    const std::size_t wave = std::max<std::size_t>(1, threads) * 4;
    for (std::size_t first = 0; first < total_blocks; first += wave) {
        const std::size_t count = std::min(wave, total_blocks - first);
        std::vector<std::vector<CubeClass>> found(count);
        parallel_blocks(count, threads, [&](std::size_t local) {
            const std::size_t block = first + local;
            VertexArrayMap<char> local_seen(next.cube_size());
            std::vector<std::pair<std::uint32_t, std::uint32_t>> cand;
            std::vector<VertexId> cube(next.cube_size());
            const std::size_t end = std::min(classes.size(), (block + 1) * block_size);
            for (std::size_t i = block * block_size; i < end; ++i) {
                const auto& a = classes[i].representative;
                std::copy(a.begin(), a.end(), cube.begin());
                const std::span<VertexId> b(cube.data() + half, half);
                index.candidates(a, static_cast<std::uint32_t>(i), g, cand);
                for (const auto& [j, row] : cand) {
                    apply_row(classes[j].representative, prev, row, b);
                    if (!is_pair_cube(a, b, g)) continue;
                    auto key = canonical_key(cube, next);
                    if (seen.find(key) || !local_seen.try_emplace(key, 0).second) continue;
                    found[local].push_back({cube, std::move(key)});
                }
            }
        });
        for (auto& list : found) {
            for (auto& c : list) {
                if (seen.try_emplace(c.canonical_key, static_cast<std::uint32_t>(out.size())).second)
                    out.push_back(std::move(c));
            }
            std::vector<CubeClass>().swap(list);
        }
    }
    return out;
}

std::vector<CubeClass> dedupe_classes(std::vector<CubeClass> raw) {
    if (raw.empty()) return raw;
    VertexArrayMap<char> seen(raw.front().canonical_key.size(), raw.size());
    std::vector<CubeClass> out;
    for (auto& c : raw)
        if (seen.try_emplace(c.canonical_key, 0).second) out.push_back(std::move(c));
    return out;
}

std::vector<CubeClass> remove_semi_degenerate(const std::vector<CubeClass>& classes, const ActionTable& table) {
    std::vector<CubeClass> out;
    for (const auto& c : classes)
        if (!is_semi_degenerate(c.representative, table)) out.push_back(c);
    return out;
}

} // namespace cubehom
