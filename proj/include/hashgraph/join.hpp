#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <hashgraph/core.hpp>
#include <hashgraph/hash.hpp>
#include <hashgraph/parallel.hpp>

namespace hashgraph {

// One join match: positions of the matched keys in their input arrays.
struct MatchPair {
    std::uint64_t left_index = 0;
    std::uint64_t right_index = 0;

    friend auto operator<=>(const MatchPair&, const MatchPair&) = default;
};

struct ProbeOptions {
    bool materialize = false;                      // collect pairs, not just the count
    std::uint64_t pair_cap = std::uint64_t{1} << 24;  // max pairs kept when materializing
};

struct JoinResult {
    std::uint64_t match_count = 0;      // exact, independent of materialization
    std::uint64_t key_comparisons = 0;  // full-key comparisons performed
    bool truncated = false;             // pair_cap cut the materialized list short
    std::optional<std::vector<MatchPair>> pairs;  // engaged iff materialize was set
};

// Nested-loop intersection of two vertex segments. Every cross pair is
// compared on the full key; emit(left, right) fires once per match. Returns
// the match count; comparisons (|a| * |b|) are accumulated into
// *comparisons when provided.
template <class Emit>
std::uint64_t intersect_adjacency(std::span<const Entry> a, std::span<const Entry> b,
                                  Emit&& emit, std::uint64_t* comparisons = nullptr) {
    std::uint64_t count = 0;
    std::uint64_t compared = 0;
    for (const Entry& ea : a) {
        for (const Entry& eb : b) {
            ++compared;
            if (ea.key == eb.key) {
                ++count;
                emit(ea.index, eb.index);
            }
        }
    }
    if (comparisons) *comparisons += compared;
    return count;
}

namespace detail {

// Shared bookkeeping for parallel probing: per-chunk counters plus capped
// pair collection through an atomic slot budget.
struct ProbeAccumulator {
    explicit ProbeAccumulator(std::uint64_t chunks, const ProbeOptions& opts)
        : opts_(opts), counts_(chunks, 0), comparisons_(chunks, 0), locals_(chunks) {}

    // Called from the owning chunk only.
    void match(std::uint64_t chunk, std::uint64_t left, std::uint64_t right) {
        ++counts_[chunk];
        if (!opts_.materialize) return;
        const std::uint64_t slot = reserved_.fetch_add(1, std::memory_order_relaxed);
        if (slot < opts_.pair_cap) {
            locals_[chunk].push_back(MatchPair{left, right});
        }
    }

    std::uint64_t* comparison_slot(std::uint64_t chunk) { return &comparisons_[chunk]; }

    JoinResult finish() {
        JoinResult result;
        for (const std::uint64_t c : counts_) result.match_count += c;
        for (const std::uint64_t c : comparisons_) result.key_comparisons += c;
        if (opts_.materialize) {
            std::vector<MatchPair> pairs;
            std::uint64_t kept = 0;
            for (const auto& local : locals_) kept += local.size();
            pairs.reserve(kept);
            for (const auto& local : locals_) {
                pairs.insert(pairs.end(), local.begin(), local.end());
            }
            result.truncated = result.match_count > opts_.pair_cap;
            result.pairs = std::move(pairs);
        }
        return result;
    }

private:
    ProbeOptions opts_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> comparisons_;
    std::vector<std::vector<MatchPair>> locals_;
    std::atomic<std::uint64_t> reserved_{0};
};

} // namespace detail

// Classic probe: each probe key scans its vertex segment in hg and every
// full-key match counts. Pairs are (entry index in the table's input, probe
// key position). match_count is exact whether or not pairs are materialized.
template <VertexHashFn H>
JoinResult probe_standard(const HashGraph& hg, std::span<const std::uint64_t> probe_keys,
                          const H& hasher, const ProbeOptions& opts = {}) {
    const std::uint64_t n = probe_keys.size();
    const unsigned threads = resolve_threads();
    detail::ProbeAccumulator acc(chunk_count(n, threads), opts);

    parallel_for_chunks(0, n, threads,
                        [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
                            std::uint64_t compared = 0;
                            for (std::uint64_t j = b; j < e; ++j) {
                                const std::uint64_t key = probe_keys[j];
                                const auto seg = hg.vertex_entries(hasher(key, hg.num_vertices()));
                                for (const Entry& ent : seg) {
                                    ++compared;
                                    if (ent.key == key) acc.match(chunk, ent.index, j);
                                }
                            }
                            *acc.comparison_slot(chunk) += compared;
                        });
    return acc.finish();
}

inline JoinResult probe_standard(const HashGraph& hg, std::span<const std::uint64_t> probe_keys,
                                 const ProbeOptions& opts = {}) {
    return probe_standard(hg, probe_keys, VertexHasher{hg.hash_seed()}, opts);
}

// Adjacency intersection over two tables built on one shared vertex range.
// Vertex v of each table holds exactly the keys hashing to v, so matches can
// only live inside per-vertex segment pairs; each pair of segments goes
// through intersect_adjacency. Pairs are (index in A's input, index in B's
// input); emission order is unspecified.
inline JoinResult probe_new_prepared(const HashGraph& hg_a, const HashGraph& hg_b,
                                     const ProbeOptions& opts = {}) {
    if (hg_a.num_vertices() != hg_b.num_vertices()) {
        throw std::invalid_argument("probe_new_prepared: tables use different vertex ranges");
    }
    const std::uint64_t v_count = hg_a.num_vertices();
    const unsigned threads = resolve_threads();
    detail::ProbeAccumulator acc(chunk_count(v_count, threads), opts);

    parallel_for_chunks(0, v_count, threads,
                        [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
                            for (std::uint64_t v = b; v < e; ++v) {
                                intersect_adjacency(
                                    hg_a.vertex_entries(v), hg_b.vertex_entries(v),
                                    [&](std::uint64_t left, std::uint64_t right) {
                                        acc.match(chunk, left, right);
                                    },
                                    acc.comparison_slot(chunk));
                            }
                        });
    return acc.finish();
}

// Dual-table join: builds both inputs into tables over one shared vertex
// range (sized from the larger input) and intersects them vertex by vertex.
template <VertexHashFn H>
JoinResult probe_new(std::span<const std::uint64_t> keys_a, std::span<const std::uint64_t> keys_b,
                     const BuildConfig& cfg, const H& hasher, const ProbeOptions& opts = {}) {
    const std::uint64_t larger = keys_a.size() > keys_b.size() ? keys_a.size() : keys_b.size();
    const std::uint64_t v_count = derived_vertex_count(larger, cfg.load_factor);
    const HashGraph hg_a = build_v2(keys_a, cfg, hasher, nullptr, v_count);
    const HashGraph hg_b = build_v2(keys_b, cfg, hasher, nullptr, v_count);
    return probe_new_prepared(hg_a, hg_b, opts);
}

inline JoinResult probe_new(std::span<const std::uint64_t> keys_a,
                            std::span<const std::uint64_t> keys_b, const BuildConfig& cfg = {},
                            const ProbeOptions& opts = {}) {
    return probe_new(keys_a, keys_b, cfg, VertexHasher{cfg.hash_seed}, opts);
}

} // namespace hashgraph
