#pragma once

#include <atomic>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <hashgraph/hash.hpp>
#include <hashgraph/parallel.hpp>

namespace hashgraph {

// One stored element: the original key plus its position in the input array
// (the position is what makes join output reconstructible).
struct Entry {
    std::uint64_t key = 0;
    std::uint64_t index = 0;

    friend auto operator<=>(const Entry&, const Entry&) = default;
};

enum class ExecMode { sequential, parallel };

struct BuildConfig {
    double load_factor = 1.0;          // V = max(1, floor(N / load_factor))
    std::uint64_t bin_count = std::uint64_t{1} << 15;  // V2 only; clamped to <= V
    std::uint64_t hash_seed = 0;
    ExecMode mode = ExecMode::parallel;
};

// Operation counters for instrumented builds. Collected only when a stats
// object is passed in; counters are relaxed atomics so parallel builds can
// be instrumented too.
struct BuildStats {
    std::atomic<std::uint64_t> hash_evals{0};
    std::atomic<std::uint64_t> count_increments{0};
    std::atomic<std::uint64_t> placement_writes{0};
    std::atomic<std::uint64_t> bin_count_increments{0};
    std::atomic<std::uint64_t> bin_placement_writes{0};
    std::atomic<std::uint64_t> counter_zero_writes{0};

    void reset() noexcept {
        hash_evals = 0;
        count_increments = 0;
        placement_writes = 0;
        bin_count_increments = 0;
        bin_placement_writes = 0;
        counter_zero_writes = 0;
    }
};

// Vertex range derived from the input size and load factor.
inline std::uint64_t derived_vertex_count(std::uint64_t n, double load_factor) {
    if (!(load_factor > 0.0)) throw std::invalid_argument("load_factor must be positive");
    const double v = std::floor(static_cast<double>(n) / load_factor);
    return v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
}

// Static hash table laid out as a CSR bipartite graph: vertex v owns the
// edge slice [offsets[v], offsets[v+1]). Immutable once built.
class HashGraph {
public:
    HashGraph() : num_vertices_(1), offsets_(2, 0) {}

    HashGraph(std::uint64_t num_vertices, std::vector<std::uint64_t> offsets,
              std::vector<Entry> edges, std::uint64_t hash_seed, double load_factor)
        : num_vertices_(num_vertices),
          offsets_(std::move(offsets)),
          edges_(std::move(edges)),
          hash_seed_(hash_seed),
          load_factor_(load_factor) {}

    std::uint64_t num_vertices() const noexcept { return num_vertices_; }
    std::uint64_t num_edges() const noexcept { return edges_.size(); }
    std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
    std::span<const Entry> edges() const noexcept { return edges_; }
    std::uint64_t hash_seed() const noexcept { return hash_seed_; }
    double load_factor() const noexcept { return load_factor_; }

    // Adjacency slice of vertex v; empty for unoccupied vertices.
    std::span<const Entry> vertex_entries(std::uint64_t v) const {
        if (v >= num_vertices_) {
            throw std::out_of_range("vertex_entries: vertex id out of range");
        }
        const std::uint64_t b = offsets_[v];
        const std::uint64_t e = offsets_[v + 1];
        return std::span<const Entry>(edges_).subspan(b, e - b);
    }

private:
    std::uint64_t num_vertices_;
    std::vector<std::uint64_t> offsets_;
    std::vector<Entry> edges_;
    std::uint64_t hash_seed_ = 0;
    double load_factor_ = 1.0;
};

namespace detail {

inline void check_config(const BuildConfig& cfg) {
    if (!(cfg.load_factor > 0.0)) throw std::invalid_argument("load_factor must be positive");
    if (cfg.bin_count < 1) throw std::invalid_argument("bin_count must be at least 1");
}

inline unsigned effective_threads(const BuildConfig& cfg) {
    return cfg.mode == ExecMode::sequential ? 1u : resolve_threads();
}

// Count / prefix-sum / place passes shared by both build variants. Hashes
// each key once in the counting pass and once in the placement pass. The
// sequential path (threads == 1) places entries in source order, so segment
// order equals input order there; parallel placement is order-free but
// yields the same per-vertex multisets.
template <class KeyAt, class IndexAt, VertexHashFn H>
HashGraph create_table(KeyAt key_at, IndexAt index_at, std::uint64_t n,
                       std::uint64_t num_vertices, unsigned threads, const H& hasher,
                       std::uint64_t hash_seed, double load_factor, BuildStats* stats) {
    CounterArray counts(num_vertices);

    parallel_for(0, n, threads, [&](std::uint64_t i) {
        const std::uint64_t v = hasher(key_at(i), num_vertices);
        counts.fetch_add(v, 1);
        if (stats) {
            stats->hash_evals.fetch_add(1, std::memory_order_relaxed);
            stats->count_increments.fetch_add(1, std::memory_order_relaxed);
        }
    });

    std::vector<std::uint64_t> offsets = exclusive_prefix_sum(counts, threads);

    counts.zero(threads);  // reused as the per-vertex placement cursor
    if (stats) stats->counter_zero_writes.fetch_add(num_vertices, std::memory_order_relaxed);

    std::vector<Entry> edges(n);
    parallel_for(0, n, threads, [&](std::uint64_t i) {
        const std::uint64_t key = key_at(i);
        const std::uint64_t v = hasher(key, num_vertices);
        const std::uint64_t pos = offsets[v] + counts.fetch_add(v, 1);
        edges[pos] = Entry{key, index_at(i)};
        if (stats) {
            stats->hash_evals.fetch_add(1, std::memory_order_relaxed);
            stats->placement_writes.fetch_add(1, std::memory_order_relaxed);
        }
    });

    return HashGraph(num_vertices, std::move(offsets), std::move(edges), hash_seed, load_factor);
}

} // namespace detail

// Simple build: one counting sweep and one placement sweep over the input.
// vertex_count overrides the load-factor-derived V (used when two tables
// must share one vertex range).
template <VertexHashFn H>
HashGraph build_v1(std::span<const std::uint64_t> keys, const BuildConfig& cfg, const H& hasher,
                   BuildStats* stats = nullptr,
                   std::optional<std::uint64_t> vertex_count = std::nullopt) {
    detail::check_config(cfg);
    const std::uint64_t v = vertex_count ? *vertex_count
                                         : derived_vertex_count(keys.size(), cfg.load_factor);
    return detail::create_table([keys](std::uint64_t i) { return keys[i]; },
                                [](std::uint64_t i) { return i; }, keys.size(), v,
                                detail::effective_threads(cfg), hasher, cfg.hash_seed,
                                cfg.load_factor, stats);
}

inline HashGraph build_v1(std::span<const std::uint64_t> keys, const BuildConfig& cfg = {},
                          BuildStats* stats = nullptr,
                          std::optional<std::uint64_t> vertex_count = std::nullopt) {
    return build_v1(keys, cfg, VertexHasher{cfg.hash_seed}, stats, vertex_count);
}

// Cache-efficient build: keys are first scattered into bins of consecutive
// vertex ranges (BinSize = ceil(V / Bins)), then the reorganized array goes
// through the same count/place passes as build_v1. Output multisets per
// vertex are identical to build_v1's.
template <VertexHashFn H>
HashGraph build_v2(std::span<const std::uint64_t> keys, const BuildConfig& cfg, const H& hasher,
                   BuildStats* stats = nullptr,
                   std::optional<std::uint64_t> vertex_count = std::nullopt) {
    detail::check_config(cfg);
    const std::uint64_t n = keys.size();
    const std::uint64_t v = vertex_count ? *vertex_count
                                         : derived_vertex_count(n, cfg.load_factor);
    const unsigned threads = detail::effective_threads(cfg);
    const std::uint64_t bins = cfg.bin_count < v ? cfg.bin_count : v;
    const std::uint64_t bin_size = (v + bins - 1) / bins;

    CounterArray bin_counts(bins);
    parallel_for(0, n, threads, [&](std::uint64_t i) {
        const std::uint64_t bin = hasher(keys[i], v) / bin_size;
        bin_counts.fetch_add(bin, 1);
        if (stats) {
            stats->hash_evals.fetch_add(1, std::memory_order_relaxed);
            stats->bin_count_increments.fetch_add(1, std::memory_order_relaxed);
        }
    });

    const std::vector<std::uint64_t> bin_offsets = exclusive_prefix_sum(bin_counts, threads);

    bin_counts.zero(threads);
    if (stats) stats->counter_zero_writes.fetch_add(bins, std::memory_order_relaxed);

    std::vector<Entry> reorg(n);
    parallel_for(0, n, threads, [&](std::uint64_t i) {
        const std::uint64_t bin = hasher(keys[i], v) / bin_size;
        const std::uint64_t pos = bin_offsets[bin] + bin_counts.fetch_add(bin, 1);
        reorg[pos] = Entry{keys[i], i};
        if (stats) {
            stats->hash_evals.fetch_add(1, std::memory_order_relaxed);
            stats->bin_placement_writes.fetch_add(1, std::memory_order_relaxed);
        }
    });

    return detail::create_table([&reorg](std::uint64_t i) { return reorg[i].key; },
                                [&reorg](std::uint64_t i) { return reorg[i].index; }, n, v,
                                threads, hasher, cfg.hash_seed, cfg.load_factor, stats);
}

inline HashGraph build_v2(std::span<const std::uint64_t> keys, const BuildConfig& cfg = {},
                          BuildStats* stats = nullptr,
                          std::optional<std::uint64_t> vertex_count = std::nullopt) {
    return build_v2(keys, cfg, VertexHasher{cfg.hash_seed}, stats, vertex_count);
}

// Number of stored entries whose key equals the probe key (full-key
// comparison over the key's vertex segment, so hash collisions never
// inflate the answer).
template <VertexHashFn H>
std::uint64_t count_instances(const HashGraph& hg, std::uint64_t key, const H& hasher) {
    std::uint64_t count = 0;
    for (const Entry& e : hg.vertex_entries(hasher(key, hg.num_vertices()))) {
        if (e.key == key) ++count;
    }
    return count;
}

inline std::uint64_t count_instances(const HashGraph& hg, std::uint64_t key) {
    return count_instances(hg, key, VertexHasher{hg.hash_seed()});
}

// Full structural check of the CSR representation against the input size.
// Returns std::nullopt when valid, otherwise a description of the first
// violated invariant.
template <VertexHashFn H>
std::optional<std::string> validate_csr(const HashGraph& hg, std::uint64_t expected_entries,
                                        const H& hasher) {
    const std::uint64_t v_count = hg.num_vertices();
    const auto offsets = hg.offsets();
    const auto edges = hg.edges();

    if (v_count < 1) return "table has no vertices";
    if (offsets.size() != v_count + 1) return "offsets length is not num_vertices + 1";
    if (offsets[0] != 0) return "offsets[0] is not 0";
    for (std::uint64_t v = 0; v < v_count; ++v) {
        if (offsets[v] > offsets[v + 1]) return "offsets are not non-decreasing";
    }
    if (offsets[v_count] != edges.size()) return "offsets[V] does not equal the edge count";
    if (edges.size() != expected_entries) return "edge count does not equal the input size";

    for (std::uint64_t v = 0; v < v_count; ++v) {
        for (std::uint64_t j = offsets[v]; j < offsets[v + 1]; ++j) {
            if (hasher(edges[j].key, v_count) != v) {
                return "entry stored under a vertex its key does not hash to";
            }
        }
    }

    std::vector<std::uint8_t> seen(edges.size(), 0);
    for (const Entry& e : edges) {
        if (e.index >= edges.size()) return "entry index out of range";
        if (seen[e.index]) return "duplicate entry index";
        seen[e.index] = 1;
    }
    return std::nullopt;
}

inline std::optional<std::string> validate_csr(const HashGraph& hg,
                                               std::uint64_t expected_entries) {
    return validate_csr(hg, expected_entries, VertexHasher{hg.hash_seed()});
}

} // namespace hashgraph
