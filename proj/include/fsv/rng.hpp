#pragma once

#include <cmath>
#include <cstdint>

namespace fsv {

/// Deterministic counter-seeded stream: (seed, stream) pairs yield
/// independent substreams, so parallel path generation is order-independent
/// and bit-reproducible across platforms.
struct PathRng {
    std::uint64_t s[4];
    double spare = 0.0;
    bool has_spare = false;

    static std::uint64_t splitmix(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    PathRng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
        for (auto& w : s) w = splitmix(x);
    }

    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    // xoshiro256++
    std::uint64_t next_u64() {
        std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    /// uniform in (0, 1)
    double uniform() {
        return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925287 * u2;
        spare = r * std::sin(a);
        has_spare = true;
        return r * std::cos(a);
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    /// Exact Poisson sampling; large means are split additively to keep the
    /// multiplicative (Knuth) method in its numerically safe range.
    int poisson(double mean) {
        int total = 0;
        while (mean > 30.0) {
            total += poisson_knuth(30.0);
            mean -= 30.0;
        }
        return total + poisson_knuth(mean);
    }

private:
    int poisson_knuth(double mean) {
        if (mean <= 0.0) return 0;
        double limit = std::exp(-mean), prod = uniform();
        int n = 0;
        while (prod > limit) {
            ++n;
            prod *= uniform();
        }
        return n;
    }
};

} // namespace fsv
