#pragma once

// Shared utilities: deterministic RNG, thread control, numeric formatting.

#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dyadnum {

// ---------------------------------------------------------------------------
// Deterministic random numbers.
//
// std::mt19937 is portable but the standard distributions are not; every
// random draw in the project goes through this engine so that (config, seed)
// pins each output byte.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x2545f4914f6cdd1dULL) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        // xoshiro256**
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        return next_u64() % n;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_{};
};

// ---------------------------------------------------------------------------
// Thread control. Worker outputs are written to disjoint ranges and
// reductions use max (exactly associative), so results do not depend on the
// thread count.
// ---------------------------------------------------------------------------

inline std::atomic<int>& thread_count_storage() {
    static std::atomic<int> count{0};  // 0 = use hardware concurrency
    return count;
}

inline void set_thread_count(int n) { thread_count_storage().store(n); }

inline int effective_thread_count() {
    int n = thread_count_storage().load();
    if (n <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n = hw == 0 ? 1 : static_cast<int>(hw);
    }
    return n;
}

// Runs fn(begin, end) over a partition of [0, n) into contiguous chunks.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
    const int threads = effective_thread_count();
    if (n <= 0) return;
    if (threads <= 1 || n < 2) {
        fn(std::int64_t{0}, n);
        return;
    }
    const int used = static_cast<int>(std::min<std::int64_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(used);
    const std::int64_t chunk = (n + used - 1) / used;
    for (int t = 0; t < used; ++t) {
        const std::int64_t b = t * chunk;
        const std::int64_t e = std::min<std::int64_t>(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Formatting. All numbers written to CSV go through format_double so that
// repeated runs are byte-identical.
// ---------------------------------------------------------------------------

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Compact bit set over grid cells; exact membership arithmetic for sparse
// family bookkeeping.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(std::int64_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::int64_t capacity() const { return bits_; }

    void set(std::int64_t i) { words_[i >> 6] |= (1ULL << (i & 63)); }
    bool test(std::int64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }

    std::int64_t count() const {
        std::int64_t c = 0;
        for (auto w : words_) c += __builtin_popcountll(w);
        return c;
    }

    bool intersects(const CellSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    bool subset_of(const CellSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    void or_with(const CellSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    }

private:
    std::int64_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace dyadnum
