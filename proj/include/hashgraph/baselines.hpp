#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <hashgraph/core.hpp>
#include <hashgraph/hash.hpp>

namespace hashgraph {

// Reference tables and a join oracle. These exist for comparison runs and
// cross-validation, so they are deliberately simple and single-threaded.

// Linear-probing open-addressing table. Every slot inspection during build
// is counted, which makes the O(d^2) clustering cost of duplicate keys
// directly observable.
class OpenAddressTable {
public:
    OpenAddressTable(std::uint64_t capacity, std::uint64_t seed)
        : slots_(capacity), seed_(seed) {}

    std::uint64_t capacity() const noexcept { return slots_.size(); }
    std::uint64_t size() const noexcept { return size_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t build_probe_steps() const noexcept { return build_probe_steps_; }
    const std::optional<Entry>& slot(std::uint64_t i) const { return slots_.at(i); }

    void insert(std::uint64_t key, std::uint64_t index) {
        if (size_ >= slots_.size()) throw std::length_error("open-addressing table is full");
        std::uint64_t pos = hash_to_vertex(key, seed_, slots_.size());
        for (;;) {
            ++build_probe_steps_;
            if (!slots_[pos].has_value()) {
                slots_[pos] = Entry{key, index};
                ++size_;
                return;
            }
            pos = pos + 1 == slots_.size() ? 0 : pos + 1;
        }
    }

    // Counts stored duplicates of key by walking the probe sequence to the
    // first empty slot. probe_steps (when given) accumulates every slot
    // inspected, the terminating empty one included.
    std::uint64_t probe_all(std::uint64_t key, std::uint64_t* probe_steps = nullptr) const {
        std::uint64_t count = 0;
        std::uint64_t steps = 0;
        std::uint64_t pos = hash_to_vertex(key, seed_, slots_.size());
        for (std::uint64_t walked = 0; walked < slots_.size(); ++walked) {
            ++steps;
            if (!slots_[pos].has_value()) break;
            if (slots_[pos]->key == key) ++count;
            pos = pos + 1 == slots_.size() ? 0 : pos + 1;
        }
        if (probe_steps) *probe_steps += steps;
        return count;
    }

private:
    std::vector<std::optional<Entry>> slots_;
    std::uint64_t seed_ = 0;
    std::uint64_t size_ = 0;
    std::uint64_t build_probe_steps_ = 0;
};

// fill_target is the fraction of slots occupied once all keys are inserted;
// capacity = max(1, ceil(n / fill_target)).
inline OpenAddressTable oa_build(std::span<const std::uint64_t> keys, double fill_target = 0.5,
                                 std::uint64_t seed = 0) {
    if (!(fill_target > 0.0) || fill_target > 1.0) {
        throw std::invalid_argument("fill_target must be in (0, 1]");
    }
    const double raw = std::ceil(static_cast<double>(keys.size()) / fill_target);
    const std::uint64_t capacity = raw < 1.0 ? 1 : static_cast<std::uint64_t>(raw);
    OpenAddressTable table(capacity, seed);
    for (std::uint64_t i = 0; i < keys.size(); ++i) table.insert(keys[i], i);
    return table;
}

inline std::uint64_t oa_probe_all(const OpenAddressTable& table, std::uint64_t key,
                                  std::uint64_t* probe_steps = nullptr) {
    return table.probe_all(key, probe_steps);
}

// Separate-chaining table: V buckets of entry vectors, V sized like the
// CSR tables (max(1, floor(n / load_factor))).
class ChainTable {
public:
    ChainTable(std::uint64_t bucket_count, std::uint64_t seed)
        : buckets_(bucket_count), seed_(seed) {}

    std::uint64_t bucket_count() const noexcept { return buckets_.size(); }
    std::uint64_t size() const noexcept { return size_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::span<const Entry> bucket(std::uint64_t b) const { return buckets_.at(b); }

    void insert(std::uint64_t key, std::uint64_t index) {
        buckets_[hash_to_vertex(key, seed_, buckets_.size())].push_back(Entry{key, index});
        ++size_;
    }

    std::uint64_t probe_all(std::uint64_t key) const {
        std::uint64_t count = 0;
        for (const Entry& e : buckets_[hash_to_vertex(key, seed_, buckets_.size())]) {
            if (e.key == key) ++count;
        }
        return count;
    }

private:
    std::vector<std::vector<Entry>> buckets_;
    std::uint64_t seed_ = 0;
    std::uint64_t size_ = 0;
};

inline ChainTable chain_build(std::span<const std::uint64_t> keys, double load_factor = 1.0,
                              std::uint64_t seed = 0) {
    if (!(load_factor > 0.0)) throw std::invalid_argument("load_factor must be positive");
    const double raw = std::floor(static_cast<double>(keys.size()) / load_factor);
    const std::uint64_t buckets = raw < 1.0 ? 1 : static_cast<std::uint64_t>(raw);
    ChainTable table(buckets, seed);
    for (std::uint64_t i = 0; i < keys.size(); ++i) table.insert(keys[i], i);
    return table;
}

inline std::uint64_t chain_probe_all(const ChainTable& table, std::uint64_t key) {
    return table.probe_all(key);
}

// Join-cardinality oracle: sorts copies of both inputs and multiplies the
// lengths of equal-key runs. No hashing involved, so it cross-checks every
// hash-based path.
inline std::uint64_t sort_merge_join_count(std::span<const std::uint64_t> a,
                                           std::span<const std::uint64_t> b) {
    std::vector<std::uint64_t> sa(a.begin(), a.end());
    std::vector<std::uint64_t> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    std::uint64_t count = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] < sb[j]) {
            ++i;
        } else if (sb[j] < sa[i]) {
            ++j;
        } else {
            const std::uint64_t key = sa[i];
            std::uint64_t run_a = 0;
            std::uint64_t run_b = 0;
            while (i < sa.size() && sa[i] == key) ++i, ++run_a;
            while (j < sb.size() && sb[j] == key) ++j, ++run_b;
            count += run_a * run_b;
        }
    }
    return count;
}

} // namespace hashgraph
