#ifndef BMAC_RNG_HPP
#define BMAC_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace bmac {

// SplitMix64 finalizer. All randomness in the library flows through this so
// that results are bit-identical across platforms and thread counts; the
// standard <random> distributions are implementation-defined and would not
// give that guarantee.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream key from a seed and a list of indices
// (sender tag, message, mode, instance, ...). Counter-based: the same
// (seed, ids) always map to the same key, in any order of evaluation.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> ids) {
    std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
    for (std::uint64_t id : ids) h = mix64(h ^ mix64(id ^ 0x452821e638d01377ULL));
    return h;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return mix64(state_++); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; safe as a log() argument.
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller, one spare cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double t = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Circularly symmetric complex Gaussian with E|z|^2 = mean_sq_mag
    // (real and imaginary parts each N(0, mean_sq_mag/2)).
    std::complex<double> complex_normal(double mean_sq_mag) {
        const double s = std::sqrt(mean_sq_mag / 2.0);
        const double re = s * normal();
        const double im = s * normal();
        return {re, im};
    }

    // Uniform over the closed disk |z| <= radius.
    std::complex<double> uniform_disk(double radius) {
        const double r = radius * std::sqrt(uniform());
        const double t = 2.0 * M_PI * uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace bmac

#endif
