#ifndef BMAC_DISCRETE_MAC_HPP
#define BMAC_DISCRETE_MAC_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bmac/common.hpp"
#include "bmac/linalg.hpp"
#include "bmac/rates.hpp"
#include "bmac/rng.hpp"

namespace bmac::dmac {

inline constexpr long kMaxChainDim = 16384;   // guard on d^n

// Channel x,y -> |phi_{x,y}> with finite input alphabets and a pure-state
// output of dimension d.
struct PureStateMAC {
    int dx = 0;
    int dy = 0;
    int d = 0;
    std::vector<Vector> phi;   // row-major [x][y]

    const Vector& state(int x, int y) const { return phi[x * dy + y]; }

    void validate() const {
        if (dx < 1 || dy < 1 || d < 1)
            throw std::domain_error("PureStateMAC: empty alphabet or output");
        if (phi.size() != static_cast<std::size_t>(dx) * dy)
            throw std::domain_error("PureStateMAC: state table shape");
        for (const auto& v : phi) {
            if (v.size() != d)
                throw std::domain_error("PureStateMAC: state dimension");
            if (std::abs(v.squaredNorm() - 1.0) > 1e-12)
                throw std::domain_error("PureStateMAC: state not unit norm");
        }
    }
};

// Binary XOR channel: x,y -> |x xor y>. Handy reference instance.
inline PureStateMAC xor_mac() {
    PureStateMAC mac;
    mac.dx = mac.dy = mac.d = 2;
    mac.phi.resize(4);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            Vector v = Vector::Zero(2);
            v[x ^ y] = 1.0;
            mac.phi[x * 2 + y] = v;
        }
    return mac;
}

struct InputDists {
    std::vector<double> px;
    std::vector<double> py;

    void validate(const PureStateMAC& mac) const {
        auto check = [](const std::vector<double>& p, const char* name) {
            double sum = 0.0;
            for (double v : p) {
                if (v < 0.0) throw std::domain_error(std::string(name) + ": negative mass");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw std::domain_error(std::string(name) + ": does not sum to 1");
        };
        check(px, "px");
        check(py, "py");
        if (static_cast<int>(px.size()) != mac.dx ||
            static_cast<int>(py.size()) != mac.dy)
            throw std::domain_error("InputDists: alphabet size mismatch");
    }
};

inline InputDists uniform_dists(const PureStateMAC& mac) {
    return {std::vector<double>(mac.dx, 1.0 / mac.dx),
            std::vector<double>(mac.dy, 1.0 / mac.dy)};
}

struct CqEntropies {
    double h_b = 0.0;
    double h_b_given_x = 0.0;
    double h_b_given_y = 0.0;
    double hmin_b_given_x = 0.0;
    double hmin_b_given_y = 0.0;
    double i_x_b = 0.0;
    double i_y_b = 0.0;
};

namespace detail {

inline double entropy_bits(const Matrix& rho) {
    double h = 0.0;
    for (double lam : hermitian_eigenvalues(rho))
        if (lam > 0.0) h -= lam * std::log2(lam);
    return h;
}

}  // namespace detail

// All entropic quantities of the cq state sum_{x,y} px py |x><x| (x) |y><y|
// (x) phi_{x,y}. Conditional min-entropies take the infimum over letters in
// the support of the conditioning distribution.
inline CqEntropies cq_entropies(const PureStateMAC& mac,
                                const InputDists& dists) {
    mac.validate();
    dists.validate(mac);
    Matrix rho = Matrix::Zero(mac.d, mac.d);
    std::vector<Matrix> rho_x(mac.dx, Matrix::Zero(mac.d, mac.d));
    std::vector<Matrix> rho_y(mac.dy, Matrix::Zero(mac.d, mac.d));
    for (int x = 0; x < mac.dx; ++x)
        for (int y = 0; y < mac.dy; ++y) {
            const Matrix outer = mac.state(x, y) * mac.state(x, y).adjoint();
            rho_x[x] += dists.py[y] * outer;
            rho_y[y] += dists.px[x] * outer;
            rho += dists.px[x] * dists.py[y] * outer;
        }

    CqEntropies e;
    e.h_b = detail::entropy_bits(rho);
    double max_lam_x = 0.0, max_lam_y = 0.0;
    for (int x = 0; x < mac.dx; ++x) {
        if (dists.px[x] <= 0.0) continue;
        e.h_b_given_x += dists.px[x] * detail::entropy_bits(rho_x[x]);
        max_lam_x = std::max(max_lam_x,
                             hermitian_eigenvalues(rho_x[x]).maxCoeff());
    }
    for (int y = 0; y < mac.dy; ++y) {
        if (dists.py[y] <= 0.0) continue;
        e.h_b_given_y += dists.py[y] * detail::entropy_bits(rho_y[y]);
        max_lam_y = std::max(max_lam_y,
                             hermitian_eigenvalues(rho_y[y]).maxCoeff());
    }
    e.hmin_b_given_x = -std::log2(max_lam_x);
    e.hmin_b_given_y = -std::log2(max_lam_y);
    e.i_x_b = e.h_b - e.h_b_given_x;
    e.i_y_b = e.h_b - e.h_b_given_y;

    // operator inequality rho_x <= 2^{-Hmin(B|X)} I, eigenvalue-checked
    const double cap_x = std::exp2(-e.hmin_b_given_x);
    const double cap_y = std::exp2(-e.hmin_b_given_y);
    for (int x = 0; x < mac.dx; ++x)
        if (dists.px[x] > 0.0 &&
            hermitian_eigenvalues(rho_x[x]).maxCoeff() > cap_x + 1e-9)
            throw std::logic_error("cq_entropies: min-entropy bound violated");
    for (int y = 0; y < mac.dy; ++y)
        if (dists.py[y] > 0.0 &&
            hermitian_eigenvalues(rho_y[y]).maxCoeff() > cap_y + 1e-9)
            throw std::logic_error("cq_entropies: min-entropy bound violated");
    return e;
}

// Bridges the closed-form bosonic entropies into the generic structure.
inline CqEntropies to_cq_entropies(const rates::EntropySet& e) {
    CqEntropies c;
    c.h_b = e.h_b;
    c.h_b_given_x = e.h_b_given_x;
    c.h_b_given_y = e.h_b_given_y;
    c.hmin_b_given_x = e.hmin_b_given_x;
    c.hmin_b_given_y = e.hmin_b_given_y;
    c.i_x_b = e.h_b - e.h_b_given_x;
    c.i_y_b = e.h_b - e.h_b_given_y;
    return c;
}

struct AchievableRegions {
    rates::RateRegion first;    // min-entropy penalty on R1
    rates::RateRegion second;   // min-entropy penalty on R2
    rates::PolygonRegion hull;
};

inline AchievableRegions achievable_regions(const CqEntropies& e) {
    AchievableRegions out;
    out.first = {e.hmin_b_given_y, e.h_b_given_x, e.h_b};
    out.second = {e.h_b_given_y, e.hmin_b_given_x, e.h_b};
    out.hull = rates::hull_region(out.first, out.second);
    return out;
}

// True iff both corner points of the two regions reach the mutual-
// information corners, i.e. the hull fills the von Neumann pentagon.
inline bool corner_equality_check(const CqEntropies& e) {
    return e.i_x_b <= e.hmin_b_given_y + 1e-12 &&
           e.i_y_b <= e.hmin_b_given_x + 1e-12;
}

// Final error bound of the random-coding analysis:
// 6e + 2 sqrt(e) + 2 (4 sqrt(e) + 2^{-n Hmin(B|Y)} L
//   + 2^{-n[H(B|X)-d]} M + 2^{-n[H(B)-d]} L M)^{1/2}.
inline double error_bound(double eps, double delta, int n, int l_count,
                          int m_count, const CqEntropies& e) {
    if (eps < 0.0 || delta < 0.0)
        throw std::domain_error("error_bound: eps and delta must be >= 0");
    const double inner =
        4.0 * std::sqrt(eps) +
        std::exp2(-double(n) * e.hmin_b_given_y) * l_count +
        std::exp2(-double(n) * (e.h_b_given_x - delta)) * m_count +
        std::exp2(-double(n) * (e.h_b - delta)) * l_count * m_count;
    return 6.0 * eps + 2.0 * std::sqrt(eps) + 2.0 * std::sqrt(inner);
}

namespace detail {

inline int sample_symbol(const std::vector<double>& p, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
}

// Codeword symbols are derived per (seed, sender, message, position) so
// codebook generation is order-independent.
inline std::vector<int> sample_codeword(const std::vector<double>& p, int n,
                                        std::uint64_t seed,
                                        std::uint64_t sender,
                                        std::uint64_t message) {
    std::vector<int> word(n);
    for (int i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, {sender, message, static_cast<std::uint64_t>(i)}));
        word[i] = sample_symbol(p, rng.uniform());
    }
    return word;
}

inline Vector product_output(const PureStateMAC& mac,
                             const std::vector<int>& xn,
                             const std::vector<int>& yn) {
    Vector psi = mac.state(xn[0], yn[0]);
    for (std::size_t i = 1; i < xn.size(); ++i)
        psi = kron(psi, mac.state(xn[i], yn[i]));
    return psi;
}

}  // namespace detail

struct SimOptions {
    int trials_per_codebook = 0;   // 0: exact average over all pairs
    unsigned threads = 1;
};

// Exact projection-chain error of the sequential decoder on random i.i.d.
// codebooks, averaged over uniform messages, in explicit dimension d^n.
inline ErrorEstimate simulate_sequential(const PureStateMAC& mac,
                                         const InputDists& dists,
                                         std::pair<double, double> rate_pair,
                                         int n, int codebooks,
                                         std::uint64_t seed,
                                         const SimOptions& opts = {}) {
    mac.validate();
    dists.validate(mac);
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (codebooks < 1) throw std::domain_error("codebooks must be >= 1");
    long chain_dim = 1;
    for (int i = 0; i < n; ++i) {
        chain_dim *= mac.d;
        if (chain_dim > kMaxChainDim)
            throw resource_error("simulate_sequential: d^n exceeds guard");
    }
    const int l_count = codebook_size_for_rate(rate_pair.first, n);
    const int m_count = codebook_size_for_rate(rate_pair.second, n);
    const long pair_count = static_cast<long>(l_count) * m_count;

    struct InstanceResult {
        StatAccumulator acc;
        std::uint64_t sen_violations = 0;
    };
    std::vector<InstanceResult> results(codebooks);

    parallel_for(static_cast<std::size_t>(codebooks), opts.threads, [&](std::size_t inst) {
        InstanceResult& res = results[inst];
        std::vector<std::vector<int>> xw(l_count), yw(m_count);
        for (int l = 0; l < l_count; ++l)
            xw[l] = detail::sample_codeword(dists.px, n,
                                            derive_seed(seed, {10, inst}), 1, l);
        for (int m = 0; m < m_count; ++m)
            yw[m] = detail::sample_codeword(dists.py, n,
                                            derive_seed(seed, {10, inst}), 2, m);

        auto run_pair = [&](long k_true) {
            const int lt = static_cast<int>(k_true % l_count);
            const int mt = static_cast<int>(k_true / l_count);
            const Vector psi_true = detail::product_output(mac, xw[lt], yw[mt]);
            Vector psi = psi_true;
            double sen_sum = 0.0;
            for (long k = 0; k < k_true; ++k) {
                const int l = static_cast<int>(k % l_count);
                const int m = static_cast<int>(k / l_count);
                const Vector test = detail::product_output(mac, xw[l], yw[m]);
                sen_sum += std::norm((test.adjoint() * psi_true).value());
                const cplx amp = (test.adjoint() * psi).value();
                if (amp != 0.0) psi -= amp * test;
            }
            const double success =
                std::min(1.0, std::norm((psi_true.adjoint() * psi).value()));
            if (1.0 - success > 2.0 * std::sqrt(sen_sum) + 1e-9)
                ++res.sen_violations;
            res.acc.add(1.0 - success);
        };

        if (opts.trials_per_codebook == 0) {
            for (long k = 0; k < pair_count; ++k) run_pair(k);
        } else {
            Rng rng(derive_seed(seed, {11, inst}));
            for (int t = 0; t < opts.trials_per_codebook; ++t)
                run_pair(static_cast<long>(rng.below(pair_count)));
        }
    });

    StatAccumulator total;
    ErrorEstimate est;
    for (const auto& r : results) {
        total.merge(r.acc);
        est.sen_bound_violations += r.sen_violations;
    }
    const MeanStderr ms = total.result();
    est.mean = ms.mean;
    est.stderr_ = ms.stderr_;
    est.samples = ms.count;
    est.l_count = l_count;
    est.m_count = m_count;
    return est;
}

// One-sided Welch test that a > b at the given z threshold
// (1.645 ~ 95% confidence).
inline bool significantly_greater(const ErrorEstimate& a,
                                  const ErrorEstimate& b, double z = 1.645) {
    const double se =
        std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
    if (se == 0.0) return a.mean > b.mean;
    return (a.mean - b.mean) / se > z;
}

}  // namespace bmac::dmac

#endif
