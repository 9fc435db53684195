#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace segc {

// All randomness in the library flows through this wrapper so that a run is a
// pure function of its seed. Distributions are hand-rolled on top of
// mt19937_64 raw output; std::uniform_*_distribution is implementation-defined
// and would make checkpoints differ across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of entropy.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    bool chance(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(below(v.size()))];
    }

private:
    std::mt19937_64 engine_;
};

// Derives a sub-seed from a run seed and a salt (splitmix64 finalizer). The
// CLI exposes one global seed; modules get decorrelated streams from it.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed ^ (salt + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Fixed salts per consumer (see derive_seed).
namespace seed_salt {
constexpr std::uint64_t match = 1;
constexpr std::uint64_t init = 2;
constexpr std::uint64_t shuffle = 3;
constexpr std::uint64_t balance = 4;
constexpr std::uint64_t hide = 5;
constexpr std::uint64_t datagen = 6;
}  // namespace seed_salt

// Stable string hash (FNV-1a); used to give per-node tie-break streams that do
// not depend on processing order.
inline std::uint64_t stable_hash(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace segc
