#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hashgraph {

// Deterministic input generators and a small binary key-file format, so
// benchmark runs are reproducible bit for bit from (kind, n, multiplicity,
// seed) or from a saved file.

enum class KeyKind {
    sequence,              // [1, 2, ..., n]
    uniform_multiplicity,  // n draws uniform over [1, K], K = max(1, round(n / R))
};

struct KeySpec {
    KeyKind kind = KeyKind::sequence;
    std::uint64_t n = 0;
    double multiplicity = 1.0;  // target average appearances R; R < 1 widens the range
    std::uint64_t seed = 0;
};

// Size of the key range [1, K] a uniform spec draws from.
inline std::uint64_t uniform_key_range(std::uint64_t n, double multiplicity) {
    if (!(multiplicity > 0.0)) throw std::invalid_argument("multiplicity must be positive");
    const long long k = std::llround(static_cast<double>(n) / multiplicity);
    return k < 1 ? 1 : static_cast<std::uint64_t>(k);
}

namespace detail {

// Unbiased draw from [0, bound) on top of mt19937_64. Implemented here
// (rejection of the biased tail) because the standard does not pin down
// uniform_int_distribution's output, and fixtures must be stable across
// platforms and standard libraries.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

} // namespace detail

// Generates keys per spec. Keys are 1-based so 0 stays free as a sentinel
// for callers that want one. mt19937_64 is specified bit-exactly by the
// standard, so output depends only on the spec.
inline std::vector<std::uint64_t> generate(const KeySpec& spec) {
    std::vector<std::uint64_t> keys(spec.n);
    switch (spec.kind) {
        case KeyKind::sequence:
            for (std::uint64_t i = 0; i < spec.n; ++i) keys[i] = i + 1;
            break;
        case KeyKind::uniform_multiplicity: {
            const std::uint64_t range = uniform_key_range(spec.n, spec.multiplicity);
            std::mt19937_64 rng(spec.seed);
            for (auto& k : keys) k = 1 + detail::bounded_draw(rng, range);
            break;
        }
    }
    return keys;
}

struct KeyFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::array<char, 8> kKeyFileMagic{'H', 'G', 'K', 'E', 'Y', 'S', '0', '1'};

inline void put_u64_le(std::string& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

inline std::uint64_t get_u64_le(const char* p) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
    }
    return v;
}

} // namespace detail

// File layout: 8-byte magic "HGKEYS01", little-endian u64 count, then count
// little-endian u64 keys. Throws KeyFileError on any I/O or format problem.
inline void write_keys(const std::filesystem::path& path, std::span<const std::uint64_t> keys) {
    std::string blob;
    blob.reserve(16 + 8 * keys.size());
    blob.append(detail::kKeyFileMagic.data(), detail::kKeyFileMagic.size());
    detail::put_u64_le(blob, keys.size());
    for (const std::uint64_t k : keys) detail::put_u64_le(blob, k);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw KeyFileError("cannot open key file for writing: " + path.string());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw KeyFileError("short write to key file: " + path.string());
}

inline std::vector<std::uint64_t> read_keys(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw KeyFileError("cannot open key file: " + path.string());
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw KeyFileError("read failure on key file: " + path.string());

    if (blob.size() < 16) throw KeyFileError("key file too short for its header: " + path.string());
    if (std::memcmp(blob.data(), detail::kKeyFileMagic.data(), detail::kKeyFileMagic.size()) != 0) {
        throw KeyFileError("key file magic mismatch: " + path.string());
    }
    const std::uint64_t count = detail::get_u64_le(blob.data() + 8);
    const std::uint64_t payload = blob.size() - 16;
    if (payload % 8 != 0 || payload / 8 != count) {
        throw KeyFileError("key file length does not match its key count: " + path.string());
    }
    std::vector<std::uint64_t> keys(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        keys[i] = detail::get_u64_le(blob.data() + 16 + 8 * i);
    }
    return keys;
}

} // namespace hashgraph
