#ifndef BMAC_COHERENT_HPP
#define BMAC_COHERENT_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bmac/common.hpp"
#include "bmac/rng.hpp"

namespace bmac::coherent {

// One complex amplitude per temporal mode; |amp|^2 is that mode's mean
// photon number.
using Codeword = std::vector<cplx>;

struct CodebookPair {
    std::vector<Codeword> sender_a;
    std::vector<Codeword> sender_b;
    int n = 0;

    void validate() const {
        if (n < 1) throw std::domain_error("codebook mode count must be >= 1");
        if (sender_a.empty() || sender_b.empty())
            throw std::domain_error("codebooks must be nonempty");
        for (const auto* book : {&sender_a, &sender_b})
            for (const auto& cw : *book)
                if (static_cast<int>(cw.size()) != n)
                    throw std::domain_error("codeword length mismatch");
    }
};

struct GaussianSource {
    double variance = 0.0;   // per-mode mean photon number
    std::uint64_t seed = 0;
};

// log of <a|b> = sum_i ( -|a_i|^2/2 - |b_i|^2/2 + conj(a_i) b_i ).
// Kept in log space so long codewords cannot underflow prematurely.
inline cplx log_overlap(const Codeword& a, const Codeword& b) {
    if (a.size() != b.size())
        throw usage_error("overlap: codeword lengths differ");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += -0.5 * std::norm(a[i]) - 0.5 * std::norm(b[i]) +
               std::conj(a[i]) * b[i];
    return acc;
}

inline cplx overlap(const Codeword& a, const Codeword& b) {
    return std::exp(log_overlap(a, b));
}

// Receiver-port amplitude of the lossless beamsplitter.
inline cplx mix_output(double eta, cplx alpha, cplx beta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("mix_output: eta must lie in [0,1]");
    return std::sqrt(eta) * alpha + std::sqrt(1.0 - eta) * beta;
}

namespace detail {

inline constexpr std::uint64_t kSenderATag = 0xA;
inline constexpr std::uint64_t kSenderBTag = 0xB;

inline cplx sample_amplitude(const GaussianSource& src, std::uint64_t sender,
                             std::uint64_t message, std::uint64_t mode) {
    if (src.variance == 0.0) return {0.0, 0.0};
    Rng rng(derive_seed(src.seed, {sender, message, mode}));
    return rng.complex_normal(src.variance);
}

}  // namespace detail

// Draws both codebooks i.i.d. from circularly symmetric complex Gaussians.
// Each amplitude is derived from (seed, sender, message, mode) alone, so
// regeneration is reproducible and order-independent.
inline CodebookPair sample_codebook(const GaussianSource& src_a,
                                    const GaussianSource& src_b,
                                    std::pair<int, int> sizes, int n) {
    if (sizes.first < 1 || sizes.second < 1)
        throw std::domain_error("codebook sizes must be >= 1");
    if (n < 1) throw std::domain_error("mode count must be >= 1");
    if (src_a.variance < 0.0 || src_b.variance < 0.0)
        throw std::domain_error("source variance must be >= 0");
    CodebookPair cb;
    cb.n = n;
    cb.sender_a.resize(sizes.first, Codeword(n));
    cb.sender_b.resize(sizes.second, Codeword(n));
    for (int l = 0; l < sizes.first; ++l)
        for (int i = 0; i < n; ++i)
            cb.sender_a[l][i] =
                detail::sample_amplitude(src_a, detail::kSenderATag, l, i);
    for (int m = 0; m < sizes.second; ++m)
        for (int i = 0; i < n; ++i)
            cb.sender_b[m][i] =
                detail::sample_amplitude(src_b, detail::kSenderBTag, m, i);
    return cb;
}

// Average photon number per mode across a codebook.
inline double mean_photon(const std::vector<Codeword>& cb) {
    if (cb.empty()) throw std::domain_error("mean_photon: empty codebook");
    double total = 0.0;
    std::size_t modes = 0;
    for (const auto& cw : cb) {
        for (const cplx& a : cw) total += std::norm(a);
        modes += cw.size();
    }
    if (modes == 0) throw std::domain_error("mean_photon: empty codewords");
    return total / static_cast<double>(modes);
}

}  // namespace bmac::coherent

#endif
