#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cubehom/graph.hpp"

namespace cubehom {

inline std::uint64_t hash_vertices(std::span<const VertexId> key) noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ key.size();
    for (VertexId v : key) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    }
    return h ^ (h >> 33);
}

/// Open-addressing map from fixed-length vertex arrays to V. Keys live in one
/// contiguous arena so lookups by span never allocate.
template <class V>
class VertexArrayMap {
public:
    explicit VertexArrayMap(std::size_t key_width, std::size_t expected = 0) : width_(key_width) {
        std::size_t cap = 16;
        while (cap < expected * 2) cap <<= 1;
        slots_.assign(cap, empty_slot);
    }

    std::size_t key_width() const noexcept { return width_; }
    std::size_t size() const noexcept { return values_.size(); }

    const V* find(std::span<const VertexId> key) const noexcept {
        const std::size_t mask = slots_.size() - 1;
        for (std::size_t s = hash_vertices(key) & mask;; s = (s + 1) & mask) {
            const auto idx = slots_[s];
            if (idx == empty_slot) return nullptr;
            if (key_equal(idx, key)) return &values_[idx];
        }
    }

    /// Inserts (key, value) unless the key exists. Returns the stored value
    /// and whether an insertion happened.
    std::pair<V*, bool> try_emplace(std::span<const VertexId> key, V value) {
        if ((values_.size() + 1) * 2 > slots_.size()) grow();
        const std::size_t mask = slots_.size() - 1;
        for (std::size_t s = hash_vertices(key) & mask;; s = (s + 1) & mask) {
            const auto idx = slots_[s];
            if (idx == empty_slot) {
                slots_[s] = static_cast<std::uint32_t>(values_.size());
                keys_.insert(keys_.end(), key.begin(), key.end());
                values_.push_back(std::move(value));
                return {&values_.back(), true};
            }
            if (key_equal(idx, key)) return {&values_[idx], false};
        }
    }

    std::span<const VertexId> key_at(std::size_t idx) const { return {keys_.data() + idx * width_, width_}; }
    const V& value_at(std::size_t idx) const { return values_[idx]; }

private:
    static constexpr std::uint32_t empty_slot = 0xffffffffU;

    bool key_equal(std::uint32_t idx, std::span<const VertexId> key) const noexcept {
        return std::equal(key.begin(), key.end(), keys_.begin() + static_cast<std::ptrdiff_t>(idx * width_));
    }

    void grow() {
        std::vector<std::uint32_t> next(slots_.size() * 2, empty_slot);
        const std::size_t mask = next.size() - 1;
        for (std::uint32_t idx = 0; idx < values_.size(); ++idx) {
            std::size_t s = hash_vertices(key_at(idx)) & mask;
            while (next[s] != empty_slot) s = (s + 1) & mask;
            next[s] = idx;
        }
        slots_ = std::move(next);
    }

    std::size_t width_;
    std::vector<std::uint32_t> slots_;
    std::vector<VertexId> keys_;
    std::vector<V> values_;
};

} // namespace cubehom
