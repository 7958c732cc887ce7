#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace angiomim {

// splitmix64 mixing step, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded deterministic generator. Raw bits come from std::mt19937_64
/// (fully specified by the standard); all variate transforms are done
/// by hand so sequences are reproducible across platforms and library
/// versions. Child streams are derived by hashing the parent seed with
/// stream tags, so per-image / per-epoch streams match a single-threaded
/// run regardless of execution order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    /// Derive an independent child stream from (seed, tags...).
    static Rng derive(std::uint64_t seed, std::uint64_t tag0,
                      std::uint64_t tag1 = 0, std::uint64_t tag2 = 0) {
        std::uint64_t s = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
        s = splitmix64(s ^ tag0);
        s = splitmix64(s ^ tag1);
        s = splitmix64(s ^ tag2);
        return Rng(s);
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal via Box-Muller (pair cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Truncated normal: resample outside +/- 2 std. Used for weight init.
    double truncated_normal(double std_dev) {
        double x;
        do {
            x = normal();
        } while (x < -2.0 || x > 2.0);
        return x * std_dev;
    }

    /// Seeded Fisher-Yates permutation of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace angiomim
