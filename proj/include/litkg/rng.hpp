#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "litkg/strings.hpp"

namespace litkg {

/// splitmix64 step; used to derive independent stage seeds from the
/// global seed so that stages do not share random streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view tag) {
    return splitmix64(global_seed ^ str::fnv1a64(tag));
}

inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view tag,
                                 std::uint64_t index) {
    return splitmix64(derive_seed(global_seed, tag) ^ (0x6A09E667F3BCC909ULL + index));
}

/// Deterministic RNG. All draws go through explicit conversions instead of
/// std::uniform_*_distribution, whose output sequences are
/// implementation-defined; mt19937_64 itself is fully specified, so the
/// same seed yields the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Modulo bias is < n / 2^64.
    std::uint64_t uniform_index(std::uint64_t n) { return gen_() % n; }

    bool coin() { return (gen_() & 1ULL) != 0; }

    /// Standard normal via Box-Muller (deterministic, both values used).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Fisher-Yates; avoids std::shuffle (implementation-defined order).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// k distinct indices drawn uniformly from [0, n) via partial Fisher-Yates.
    std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k) {
        std::vector<std::uint32_t> pool(n);
        for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
        if (k > n) k = n;
        for (std::uint32_t i = 0; i < k; ++i) {
            std::uint32_t j = i + static_cast<std::uint32_t>(uniform_index(n - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace litkg
