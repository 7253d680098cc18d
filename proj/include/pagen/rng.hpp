#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace pagen {

/// Seed of a reproducible random stream.  A run is identified by a 64-bit
/// master seed plus a stream id; ensembles give each replica its own
/// stream id (and parallel estimators additionally a per-work-item index),
/// so results are bit-for-bit reproducible regardless of thread count.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

namespace detail {

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

/// Philox-style 4x64 counter block function (10 rounds).  Used as a keyed
/// PRF to derive independent sub-stream states from (master_seed,
/// stream_id, work_index); it is the splitting point of the RNG layer.
inline std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 2> key,
                                               std::array<std::uint64_t, 4> ctr) {
    constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ull;
    constexpr std::uint64_t M1 = 0xCA5A826395121157ull;
    constexpr std::uint64_t W0 = 0x9E3779B97F4A7C15ull; // golden-ratio Weyl step
    constexpr std::uint64_t W1 = 0xBB67AE8584CAA73Bull;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo64(M0, ctr[0], hi0, lo0);
        mulhilo64(M1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

inline std::uint64_t rotl64(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace detail

/// Deterministic random stream: a fast xoshiro256++ engine whose state is
/// derived through the counter-based PRF above.  Distinct (master_seed,
/// stream_id, work_index) triples yield statistically independent streams.
///
/// All distribution samplers are exact (no approximations): uniforms are
/// strictly inside (0,1); gamma uses the squeeze-accepted rejection scheme
/// for shape >= 1 with a power boost below 1; beta is the two-gamma ratio;
/// Poisson counts unit-exponential spacings (safe for very large means).
class RandomStream {
public:
    explicit RandomStream(SeedSpec seed, std::uint64_t work_index = 0) {
        auto st = detail::philox4x64({seed.master_seed, seed.stream_id},
                                     {work_index, 0x243F6A8885A308D3ull, 0, 1});
        s_ = st;
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_ = {1, 2, 3, 4}; // cannot happen in practice
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl64(s_[3], 45);
        return result;
    }

    /// Uniform double strictly inside (0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    /// Uniform double in [0, s).
    double uniform_below(double s) {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 * s;
    }

    /// Unbiased uniform integer in {0, ..., n-1}.
    std::uint64_t uniform_index(std::uint64_t n) {
        assert(n > 0);
        // Lemire's multiply-shift with rejection of the biased sliver.
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via the polar method (second value cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double k = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * k;
        has_spare_ = true;
        return u * k;
    }

    /// Unit exponential.
    double exponential() { return -std::log(uniform01()); }

    /// Gamma(shape, 1) for any shape > 0.
    double gamma(double shape) {
        assert(shape > 0.0);
        if (shape < 1.0) {
            // boost: Gamma(shape) = Gamma(shape + 1) * U^(1/shape)
            return gamma(shape + 1.0) * std::pow(uniform01(), 1.0 / shape);
        }
        if (shape <= 4.0 && shape == std::floor(shape)) {
            // small integer shapes: sum of exponentials in one log
            double prod = uniform01();
            for (int i = 1; i < static_cast<int>(shape); ++i) prod *= uniform01();
            return -std::log(prod);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / (3.0 * std::sqrt(d));
        return gamma_reject(d, c);
    }

    /// Rejection kernel of the gamma sampler with precomputed constants
    /// d = shape - 1/3 and c = 1/(3 sqrt(d)); exposed so that tight loops
    /// over a fixed shape can hoist the setup out of the loop.
    double gamma_reject(double d, double c) {
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Beta(a, b) as the two-gamma ratio Ga / (Ga + Gb).
    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    /// Exact Poisson(mean) by counting unit-exponential spacings; O(mean)
    /// per draw, numerically safe for arbitrarily large means.
    long long poisson(double mean) {
        assert(mean >= 0.0);
        long long k = 0;
        double t = exponential();
        while (t <= mean) {
            ++k;
            t += exponential();
        }
        return k;
    }

    /// Poisson draw that stops counting once `cap` is exceeded; sets
    /// *capped and returns cap + 1 in that case.  Used by the tree sampler
    /// to honour its node budget without materialising huge draws.
    long long poisson_capped(double mean, long long cap, bool* capped) {
        long long k = 0;
        double t = exponential();
        while (t <= mean) {
            ++k;
            if (k > cap) {
                *capped = true;
                return k;
            }
            t += exponential();
        }
        *capped = false;
        return k;
    }

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Precomputed-constant gamma sampler for tight loops over a fixed shape.
struct GammaSampler {
    double d = 0.0, c = 0.0;
    explicit GammaSampler(double shape) {
        assert(shape >= 1.0);
        d = shape - 1.0 / 3.0;
        c = 1.0 / (3.0 * std::sqrt(d));
    }
    double operator()(RandomStream& rng) const { return rng.gamma_reject(d, c); }
};

} // namespace pagen
