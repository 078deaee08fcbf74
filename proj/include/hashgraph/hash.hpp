#pragma once

#include <cassert>
#include <concepts>
#include <cstdint>

namespace hashgraph {

namespace detail {

// 64-bit finalizer-style avalanche mixer (murmur3 fmix64 constants).
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

} // namespace detail

// Maps a key into the vertex range [0, num_vertices). This is the one hash
// used by table builds, probes and baselines; alternative hashers (e.g. an
// identity hash for hand-traced fixtures) can be substituted anywhere a
// VertexHashFn is accepted.
struct VertexHasher {
    std::uint64_t seed = 0;

    std::uint64_t operator()(std::uint64_t key, std::uint64_t num_vertices) const noexcept {
        assert(num_vertices >= 1);
        return detail::mix64(key ^ seed) % num_vertices;
    }
};

inline std::uint64_t hash_to_vertex(std::uint64_t key, std::uint64_t seed,
                                    std::uint64_t num_vertices) noexcept {
    return VertexHasher{seed}(key, num_vertices);
}

template <class H>
concept VertexHashFn = requires(const H& h, std::uint64_t key, std::uint64_t v) {
    { h(key, v) } -> std::convertible_to<std::uint64_t>;
};

} // namespace hashgraph
