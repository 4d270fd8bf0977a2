#pragma once

#include <cstdint>
#include <cmath>

namespace cpmean {

/// Deterministic, platform-independent random stream.
///
/// The generator is SplitMix64 (Steele, Lea & Flood 2014). Substreams are
/// derived by hashing (master_seed, stream_index), so Monte Carlo
/// replications are independent of worker scheduling and reproducible
/// bit-for-bit across platforms. Gaussian draws use the Box-Muller
/// transform rather than std::normal_distribution, whose output is
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Substream r of a master seed; distinct (seed, r) give distinct streams.
    static Rng substream(std::uint64_t master_seed, std::uint64_t r) {
        Rng mix(master_seed);
        const std::uint64_t a = mix.next_u64();
        Rng mix2(a ^ (r * 0x9e3779b97f4a7c15ULL));
        return Rng(mix2.next_u64());
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0, 1); never returns exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard Gaussian via Box-Muller; draws are consumed in pairs.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = uniform();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double theta = 2.0 * M_PI * v;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Zero-mean Laplace with the given variance (scale sd/sqrt(2)).
    double laplace(double sd) {
        const double b = sd / std::sqrt(2.0);
        const double u = uniform() - 0.5;
        return -b * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cpmean
