#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include <hashgraph/core.hpp>

// Shared oracles and helpers for the test suites. Oracles are deliberately
// naive implementations used as the reference; keep them independent of the
// algorithms under test.
namespace support {

// Sequential fold reference for the exclusive prefix sum.
inline std::vector<std::uint64_t> prefix_fold(std::span<const std::uint64_t> counts) {
    std::vector<std::uint64_t> out(counts.size() + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) out[i + 1] = out[i] + counts[i];
    return out;
}

// Nested-loop reference for join cardinality: number of (i, j) with a[i] == b[j].
inline std::uint64_t nested_loop_join_count(std::span<const std::uint64_t> a,
                                            std::span<const std::uint64_t> b) {
    std::uint64_t count = 0;
    for (const std::uint64_t x : a)
        for (const std::uint64_t y : b)
            if (x == y) ++count;
    return count;
}

// Key-multiplicity histogram.
inline std::map<std::uint64_t, std::uint64_t> histogram(std::span<const std::uint64_t> keys) {
    std::map<std::uint64_t, std::uint64_t> h;
    for (const std::uint64_t k : keys) ++h[k];
    return h;
}

// Identity-style hash for hand-traced fixtures: vertex = key mod V.
struct IdentityHasher {
    std::uint64_t operator()(std::uint64_t key, std::uint64_t num_vertices) const noexcept {
        return key % num_vertices;
    }
};

// Per-vertex segments in a canonical (sorted) form, for order-insensitive
// table comparison.
inline std::vector<std::vector<hashgraph::Entry>> canonical_segments(const hashgraph::HashGraph& hg) {
    std::vector<std::vector<hashgraph::Entry>> segments(hg.num_vertices());
    for (std::uint64_t v = 0; v < hg.num_vertices(); ++v) {
        const auto seg = hg.vertex_entries(v);
        segments[v].assign(seg.begin(), seg.end());
        std::sort(segments[v].begin(), segments[v].end());
    }
    return segments;
}

// Deterministic helper RNG for generating test cases (not the library PRNG).
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline std::vector<std::uint64_t> random_keys(std::mt19937_64& g, std::size_t n,
                                              std::uint64_t key_range) {
    std::vector<std::uint64_t> keys(n);
    for (auto& k : keys) k = g() % (key_range == 0 ? 1 : key_range);
    return keys;
}

} // namespace support
