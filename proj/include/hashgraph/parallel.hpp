#pragma once

#include <atomic>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <memory>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

namespace hashgraph {

inline unsigned hardware_threads() noexcept {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Effective worker count: HASHGRAPH_THREADS overrides the hardware default.
// A value of 1 forces the sequential path everywhere; unparseable or
// non-positive values are ignored.
inline unsigned resolve_threads() noexcept {
    if (const char* env = std::getenv("HASHGRAPH_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 4096) {
            return static_cast<unsigned>(v);
        }
    }
    return hardware_threads();
}

// Number of contiguous chunks a range of length n is split into under the
// given worker count. Every chunk is non-empty.
inline std::uint64_t chunk_count(std::uint64_t n, unsigned threads) noexcept {
    if (n == 0) return 0;
    const std::uint64_t t = threads == 0 ? 1 : threads;
    return t < n ? t : n;
}

// Runs body(chunk_index, begin, end) over a deterministic contiguous
// partition of [begin, end). Chunk 0 executes on the calling thread; the
// first exception thrown by any chunk is rethrown after all chunks finish.
template <class Body>
void parallel_for_chunks(std::uint64_t begin, std::uint64_t end, unsigned threads, Body&& body) {
    assert(begin <= end);
    const std::uint64_t n = end - begin;
    const std::uint64_t chunks = chunk_count(n, threads);
    if (chunks == 0) return;

    const std::uint64_t base = n / chunks;
    const std::uint64_t rem = n % chunks;
    auto chunk_begin = [&](std::uint64_t c) {
        return begin + c * base + (c < rem ? c : rem);
    };

    if (chunks == 1) {
        body(std::uint64_t{0}, begin, end);
        return;
    }

    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> workers;
    workers.reserve(chunks - 1);
    for (std::uint64_t c = 1; c < chunks; ++c) {
        workers.emplace_back([&, c] {
            try {
                body(c, chunk_begin(c), chunk_begin(c + 1));
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    try {
        body(std::uint64_t{0}, chunk_begin(0), chunk_begin(1));
    } catch (...) {
        errors[0] = std::current_exception();
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// Element-wise parallel loop: body(i) for i in [begin, end). An empty range
// is a no-op. With threads == 1 this degenerates to a plain sequential loop.
template <class Body>
void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned threads, Body&& body) {
    parallel_for_chunks(begin, end, threads,
                        [&body](std::uint64_t, std::uint64_t b, std::uint64_t e) {
                            for (std::uint64_t i = b; i < e; ++i) body(i);
                        });
}

template <class Body>
void parallel_for(std::uint64_t begin, std::uint64_t end, Body&& body) {
    parallel_for(begin, end, resolve_threads(), std::forward<Body>(body));
}

// Fixed-length array of 64-bit counters supporting concurrent fetch-add.
// Construction zero-initializes every slot.
class CounterArray {
public:
    explicit CounterArray(std::size_t size)
        : size_(size), counts_(std::make_unique<std::atomic<std::uint64_t>[]>(size)) {}

    std::size_t size() const noexcept { return size_; }

    // Atomically adds delta to slot i and returns the pre-add value. k
    // concurrent unit-adds on one slot return the values {old..old+k-1},
    // each exactly once.
    std::uint64_t fetch_add(std::size_t i, std::uint64_t delta = 1) noexcept {
        assert(i < size_);
        return counts_[i].fetch_add(delta, std::memory_order_relaxed);
    }

    std::uint64_t load(std::size_t i) const noexcept {
        assert(i < size_);
        return counts_[i].load(std::memory_order_relaxed);
    }

    std::uint64_t operator[](std::size_t i) const noexcept { return load(i); }

    void zero(unsigned threads = 1) noexcept {
        parallel_for(0, size_, threads,
                     [this](std::uint64_t i) { counts_[i].store(0, std::memory_order_relaxed); });
    }

private:
    std::size_t size_;
    std::unique_ptr<std::atomic<std::uint64_t>[]> counts_;
};

namespace detail {

// Chunked two-pass exclusive scan. Unsigned 64-bit addition is exact, so the
// result is bit-identical to the sequential fold for any chunking.
template <class Get>
std::vector<std::uint64_t> exclusive_scan_impl(Get get, std::uint64_t n, unsigned threads) {
    std::vector<std::uint64_t> offsets(n + 1, 0);
    if (n == 0) return offsets;

    const std::uint64_t chunks = chunk_count(n, threads);
    if (chunks == 1) {
        std::uint64_t run = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            offsets[i] = run;
            const std::uint64_t v = get(i);
            run += v;
            if (run < v) throw std::overflow_error("exclusive_prefix_sum: counter sum exceeds 64 bits");
        }
        offsets[n] = run;
        return offsets;
    }

    std::vector<std::uint64_t> chunk_sum(chunks, 0);
    std::atomic<bool> overflow{false};
    parallel_for_chunks(0, n, threads,
                        [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
                            std::uint64_t s = 0;
                            for (std::uint64_t i = b; i < e; ++i) {
                                const std::uint64_t v = get(i);
                                s += v;
                                if (s < v) overflow.store(true, std::memory_order_relaxed);
                            }
                            chunk_sum[c] = s;
                        });
    if (overflow.load()) throw std::overflow_error("exclusive_prefix_sum: counter sum exceeds 64 bits");

    std::vector<std::uint64_t> chunk_base(chunks, 0);
    std::uint64_t total = 0;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        chunk_base[c] = total;
        total += chunk_sum[c];
        if (total < chunk_sum[c]) throw std::overflow_error("exclusive_prefix_sum: counter sum exceeds 64 bits");
    }

    // Prefixes are bounded by the (checked) total, so pass 2 cannot wrap.
    parallel_for_chunks(0, n, threads,
                        [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
                            std::uint64_t run = chunk_base[c];
                            for (std::uint64_t i = b; i < e; ++i) {
                                offsets[i] = run;
                                run += get(i);
                            }
                        });
    offsets[n] = total;
    return offsets;
}

} // namespace detail

// Exclusive prefix sum of counts: result has length counts.size() + 1,
// result[0] == 0 and result[i] == sum of counts[0..i). Throws
// std::overflow_error if the running sum wraps 64 bits.
inline std::vector<std::uint64_t> exclusive_prefix_sum(std::span<const std::uint64_t> counts,
                                                       unsigned threads = 1) {
    return detail::exclusive_scan_impl([counts](std::uint64_t i) { return counts[i]; },
                                       counts.size(), threads);
}

inline std::vector<std::uint64_t> exclusive_prefix_sum(const CounterArray& counts,
                                                       unsigned threads = 1) {
    return detail::exclusive_scan_impl([&counts](std::uint64_t i) { return counts.load(i); },
                                       counts.size(), threads);
}

} // namespace hashgraph
