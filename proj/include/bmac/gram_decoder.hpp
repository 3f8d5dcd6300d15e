#ifndef BMAC_GRAM_DECODER_HPP
#define BMAC_GRAM_DECODER_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bmac/coherent.hpp"
#include "bmac/common.hpp"
#include "bmac/linalg.hpp"
#include "bmac/rates.hpp"
#include "bmac/rng.hpp"

namespace bmac::gram {

// Message pair, 1-based like the scan-order displays.
struct Pair {
    int l;
    int m;
    friend bool operator==(const Pair&, const Pair&) = default;
};

struct BuildOptions {
    double hermiticity_tol = 1e-12;
    double psd_tol = 1e-9;
    // Full eigenvalue PSD check up to this dimension; beyond it an LDLT
    // pivot check keeps the gate affordable.
    int psd_eig_dim_limit = 512;
};

// Pairwise inner products of the output codeword states. Index k enumerates
// pairs in scan order: k = (m-1)*L + (l-1), so l varies fastest.
class GramMatrix {
  public:
    GramMatrix(Matrix g, int l_count, int m_count,
               const BuildOptions& opts = {})
        : g_(std::move(g)), L_(l_count), M_(m_count) {
        if (g_.rows() != g_.cols() ||
            g_.rows() != static_cast<Eigen::Index>(dim()))
            throw std::domain_error("GramMatrix: shape mismatch");
        if (hermiticity_defect(g_) > opts.hermiticity_tol)
            throw conditioning_error("GramMatrix: not Hermitian");
        for (Eigen::Index k = 0; k < g_.rows(); ++k)
            if (std::abs(g_(k, k) - 1.0) > opts.hermiticity_tol)
                throw conditioning_error("GramMatrix: diagonal not 1");
        check_psd(opts);
    }

    int dim() const { return L_ * M_; }
    int l_count() const { return L_; }
    int m_count() const { return M_; }
    const Matrix& matrix() const { return g_; }

    int index_of(Pair p) const {
        if (p.l < 1 || p.l > L_ || p.m < 1 || p.m > M_)
            throw usage_error("pair index out of range");
        return (p.m - 1) * L_ + (p.l - 1);
    }
    Pair pair_of(int k) const {
        return {k % L_ + 1, k / L_ + 1};
    }

  private:
    void check_psd(const BuildOptions& opts) const {
        if (g_.rows() <= opts.psd_eig_dim_limit) {
            const double lo = hermitian_eigenvalues(g_).minCoeff();
            if (lo < -opts.psd_tol)
                throw conditioning_error(
                    "GramMatrix: smallest eigenvalue " + std::to_string(lo));
        } else {
            Eigen::LDLT<Matrix> ldlt(g_);
            if (ldlt.vectorD().real().minCoeff() < -opts.psd_tol)
                throw conditioning_error("GramMatrix: negative LDLT pivot");
        }
    }

    Matrix g_;
    int L_;
    int M_;
};

// Receiver state written in the non-orthogonal output basis:
// |psi> = sum_k coeffs[k] |gamma_k>, squared norm c^dag G c.
struct SpanState {
    Vector coeffs;

    double norm_sq(const GramMatrix& g) const {
        return std::max(0.0, (coeffs.adjoint() * (g.matrix() * coeffs))
                                 .value()
                                 .real());
    }
};

struct ScanOrder {
    std::vector<Pair> pairs;
};

// Pair tests run in the order (1,1)...(L,1),(1,2)...(L,2),...,(L,M).
inline ScanOrder scan_order(int l_count, int m_count) {
    if (l_count < 1 || m_count < 1)
        throw std::domain_error("scan_order: sizes must be >= 1");
    ScanOrder order;
    order.pairs.reserve(static_cast<std::size_t>(l_count) * m_count);
    for (int m = 1; m <= m_count; ++m)
        for (int l = 1; l <= l_count; ++l) order.pairs.push_back({l, m});
    return order;
}

inline GramMatrix build_gram(const coherent::CodebookPair& cb, double eta,
                             const BuildOptions& opts = {}) {
    cb.validate();
    const int l_count = static_cast<int>(cb.sender_a.size());
    const int m_count = static_cast<int>(cb.sender_b.size());
    const int dim = l_count * m_count;
    std::vector<coherent::Codeword> outputs(dim);
    for (int m = 0; m < m_count; ++m)
        for (int l = 0; l < l_count; ++l) {
            coherent::Codeword out(cb.n);
            for (int i = 0; i < cb.n; ++i)
                out[i] =
                    coherent::mix_output(eta, cb.sender_a[l][i], cb.sender_b[m][i]);
            outputs[m * l_count + l] = std::move(out);
        }
    Matrix g(dim, dim);
    for (int k = 0; k < dim; ++k) {
        g(k, k) = 1.0;
        for (int k2 = k + 1; k2 < dim; ++k2) {
            const cplx v = coherent::overlap(outputs[k], outputs[k2]);
            g(k, k2) = v;
            g(k2, k) = std::conj(v);
        }
    }
    return GramMatrix(std::move(g), l_count, m_count, opts);
}

struct PairTestResult {
    double p_yes;          // Born probability given the (normalized) input
    SpanState yes_state;   // subnormalized projection onto |gamma_k>
    SpanState no_state;    // subnormalized complement branch
};

// Binary test "is it pair k?": projects onto |gamma_k> and its complement.
// The two branch norms always add up to the input norm.
inline PairTestResult apply_pair_test(const SpanState& state, int k,
                                      const GramMatrix& g) {
    const double norm2 = state.norm_sq(g);
    if (norm2 <= 0.0)
        throw usage_error("apply_pair_test: zero-norm input state");
    const cplx amp = (g.matrix().row(k) * state.coeffs).value();
    PairTestResult r;
    r.p_yes = std::norm(amp) / norm2;
    r.yes_state.coeffs = Vector::Zero(g.dim());
    r.yes_state.coeffs[k] = amp;
    r.no_state.coeffs = state.coeffs;
    r.no_state.coeffs[k] -= amp;
    return r;
}

struct ChainDiagnostics {
    double success = 0.0;
    double sen_sum = 0.0;     // sum of Tr{(I - Pi_i) sigma} along the chain
    double sen_bound = 0.0;   // 2 sqrt(sen_sum)
    bool sen_violated = false;
};

namespace detail {

// Probability that every test before scan position k_true answers "no" and
// the test at k_true answers "yes", starting from |gamma_{k_true}>.
// Runs the complement chain with incremental updates of v = G c.
inline ChainDiagnostics chain_success(const GramMatrix& g, int k_true) {
    const Matrix& gm = g.matrix();
    Vector c = Vector::Zero(g.dim());
    c[k_true] = 1.0;
    Vector v = gm.col(k_true);   // v = G c
    ChainDiagnostics d;
    for (int pos = 0; pos < k_true; ++pos) {
        d.sen_sum += std::norm(gm(pos, k_true));
        const cplx amp = v[pos];
        if (amp != 0.0) {
            c[pos] -= amp;
            v -= amp * gm.col(pos);
        }
    }
    d.success = std::norm(v[k_true]);
    d.sen_bound = 2.0 * std::sqrt(d.sen_sum);
    d.sen_violated = (1.0 - d.success) > d.sen_bound + 1e-9;
    return d;
}

}  // namespace detail

inline ChainDiagnostics success_probability_diagnostics(
    const coherent::CodebookPair& cb, double eta, Pair true_pair,
    const BuildOptions& opts = {}) {
    const GramMatrix g = build_gram(cb, eta, opts);
    return detail::chain_success(g, g.index_of(true_pair));
}

inline double success_probability_exact(const coherent::CodebookPair& cb,
                                        double eta, Pair true_pair,
                                        const BuildOptions& opts = {}) {
    return success_probability_diagnostics(cb, eta, true_pair, opts).success;
}

struct DecodeOutcome {
    std::optional<Pair> decoded;   // empty iff every test answered "no"
    int tests_performed = 0;
    bool correct = false;
};

// Samples one measurement trajectory of the receiver: scan all pairs in
// order, stop at the first "yes". The true state is |gamma_{k_true}>.
inline DecodeOutcome simulate_decode(const GramMatrix& g, Pair true_pair,
                                     Rng& rng) {
    const Matrix& gm = g.matrix();
    const int k_true = g.index_of(true_pair);
    const int dim = g.dim();
    Vector c = Vector::Zero(dim);
    c[k_true] = 1.0;
    Vector v = gm.col(k_true);
    double norm2 = 1.0;
    DecodeOutcome out;
    for (int pos = 0; pos < dim; ++pos) {
        out.tests_performed = pos + 1;
        if (norm2 < 1e-30) break;   // numerically dead branch: all "no"
        const cplx amp = v[pos];
        const double p_yes = std::min(1.0, std::norm(amp) / norm2);
        if (rng.uniform() < p_yes) {
            out.decoded = g.pair_of(pos);
            out.correct = (pos == k_true);
            return out;
        }
        norm2 -= std::norm(amp);
        if (amp != 0.0) {
            c[pos] -= amp;
            v -= amp * gm.col(pos);
        }
    }
    out.tests_performed = dim;
    return out;
}

using bmac::ErrorEstimate;
using bmac::codebook_size_for_rate;

struct McOptions {
    int max_pair_cap = 4096;   // guard on K = L*M
    unsigned threads = 1;
    int max_resample_attempts = 100;
};

// Average decoding error of the sequential receiver over random Gaussian
// codebooks and uniform true message pairs. Each sample evaluates the exact
// chain probability; trials_per == 0 averages over all pairs of a codebook
// instead of sampling them.
inline ErrorEstimate monte_carlo_error(const rates::ChannelParams& params,
                                       std::pair<double, double> rate_pair,
                                       int n, int codebooks, int trials_per,
                                       std::uint64_t seed,
                                       const McOptions& mc = {},
                                       const BuildOptions& build = {}) {
    params.validate();
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (codebooks < 1) throw std::domain_error("codebooks must be >= 1");
    const int l_count = std::max(1, codebook_size_for_rate(rate_pair.first, n));
    const int m_count = std::max(1, codebook_size_for_rate(rate_pair.second, n));
    if (static_cast<long long>(l_count) * m_count > mc.max_pair_cap)
        throw resource_error("monte_carlo_error: K = " +
                             std::to_string(l_count) + "*" +
                             std::to_string(m_count) + " exceeds cap " +
                             std::to_string(mc.max_pair_cap));
    const int dim = l_count * m_count;

    struct InstanceResult {
        StatAccumulator acc;
        std::uint64_t sen_violations = 0;
        std::uint64_t resamples = 0;
    };
    std::vector<InstanceResult> results(codebooks);

    parallel_for(static_cast<std::size_t>(codebooks), mc.threads, [&](std::size_t inst) {
        InstanceResult& res = results[inst];
        std::optional<GramMatrix> gram;
        for (int attempt = 0; attempt <= mc.max_resample_attempts; ++attempt) {
            const coherent::GaussianSource src_a{
                params.nsa, derive_seed(seed, {1, inst, static_cast<std::uint64_t>(attempt)})};
            const coherent::GaussianSource src_b{
                params.nsb, derive_seed(seed, {2, inst, static_cast<std::uint64_t>(attempt)})};
            const auto cb =
                coherent::sample_codebook(src_a, src_b, {l_count, m_count}, n);
            try {
                gram.emplace(build_gram(cb, params.eta, build));
                break;
            } catch (const conditioning_error&) {
                ++res.resamples;
            }
        }
        if (!gram)
            throw conditioning_error(
                "monte_carlo_error: codebook resampling exhausted");
        auto record = [&](int k_true) {
            const auto diag = detail::chain_success(*gram, k_true);
            if (diag.sen_violated) ++res.sen_violations;
            res.acc.add(1.0 - std::min(1.0, diag.success));
        };
        if (trials_per == 0) {
            for (int k = 0; k < dim; ++k) record(k);
        } else {
            Rng rng(derive_seed(seed, {3, inst}));
            for (int t = 0; t < trials_per; ++t)
                record(static_cast<int>(rng.below(dim)));
        }
    });

    StatAccumulator total;
    ErrorEstimate est;
    for (const auto& r : results) {
        total.merge(r.acc);
        est.sen_bound_violations += r.sen_violations;
        est.resampled_instances += r.resamples;
    }
    const MeanStderr ms = total.result();
    est.mean = ms.mean;
    est.stderr_ = ms.stderr_;
    est.samples = ms.count;
    est.l_count = l_count;
    est.m_count = m_count;
    return est;
}

}  // namespace bmac::gram

#endif
