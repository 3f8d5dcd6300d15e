#ifndef BMAC_TYPICALITY_HPP
#define BMAC_TYPICALITY_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "bmac/common.hpp"
#include "bmac/linalg.hpp"

namespace bmac::typ {

inline constexpr long kMaxEnumeration = 1L << 20;   // classical sequences
inline constexpr long kMaxProjectorDim = 1L << 14;  // quantum label sequences

using Distribution = std::vector<double>;

inline void validate_distribution(const Distribution& p) {
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::domain_error("distribution: negative mass");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::domain_error("distribution: does not sum to 1");
}

struct TypicalityParams {
    double delta;
    double epsilon;

    void validate() const {
        if (!(delta > 0.0)) throw std::domain_error("delta must be > 0");
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::domain_error("epsilon must lie in (0,1)");
    }
};

inline double shannon_entropy(const Distribution& p) {
    double h = 0.0;
    for (double v : p) h -= xlog2x(v);
    return h;
}

// -(1/n) log2 prod_i p(x_i)
inline double sample_entropy(const std::vector<int>& xn,
                             const Distribution& p) {
    if (xn.empty()) throw std::domain_error("sample_entropy: empty sequence");
    double acc = 0.0;
    for (int x : xn) {
        if (x < 0 || x >= static_cast<int>(p.size()) || p[x] <= 0.0)
            throw std::domain_error(
                "sample_entropy: symbol outside the support");
        acc += std::log2(p[x]);
    }
    return -acc / static_cast<double>(xn.size());
}

struct TypicalSet {
    int n = 0;
    double delta = 0.0;
    std::vector<std::vector<int>> members;
    double probability = 0.0;   // total mass of the members
};

namespace detail {

// Odometer enumeration of all length-n sequences over [0, alphabet).
template <typename Fn>
void for_each_sequence(int alphabet, int n, Fn&& fn) {
    std::vector<int> seq(n, 0);
    while (true) {
        fn(const_cast<const std::vector<int>&>(seq));
        int pos = n - 1;
        while (pos >= 0 && ++seq[pos] == alphabet) seq[pos--] = 0;
        if (pos < 0) break;
    }
}

}  // namespace detail

// Exhaustive weakly typical set by the sample-entropy test.
inline TypicalSet typical_set(const Distribution& p, int n, double delta) {
    validate_distribution(p);
    if (n < 1) throw std::domain_error("typical_set: n must be >= 1");
    if (!(delta > 0.0)) throw std::domain_error("typical_set: delta must be > 0");
    const double total = std::pow(double(p.size()), double(n));
    if (total > double(kMaxEnumeration))
        throw resource_error("typical_set: |alphabet|^n exceeds guard");
    const double h = shannon_entropy(p);
    TypicalSet set;
    set.n = n;
    set.delta = delta;
    detail::for_each_sequence(static_cast<int>(p.size()), n, [&](const std::vector<int>& seq) {
        double logp = 0.0;
        bool in_support = true;
        for (int x : seq) {
            if (p[x] <= 0.0) { in_support = false; break; }
            logp += std::log2(p[x]);
        }
        if (!in_support) return;
        if (std::abs(-logp / n - h) <= delta) {
            set.members.push_back(seq);
            set.probability += std::exp2(logp);
        }
    });
    return set;
}

// Spectral data of one state, with the deterministic label order the
// projectors are defined against: descending eigenvalue, ties by original
// basis index.
struct SpectralBasis {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;   // columns match eigenvalues
};

inline SpectralBasis sorted_eigensystem(const Matrix& rho) {
    require_psd(rho, 1e-9, "density matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    const int d = static_cast<int>(rho.rows());
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()[a] > es.eigenvalues()[b];
    });
    SpectralBasis basis;
    basis.eigenvalues.resize(d);
    basis.eigenvectors.resize(d, d);
    for (int i = 0; i < d; ++i) {
        basis.eigenvalues[i] = std::max(0.0, es.eigenvalues()[order[i]]);
        basis.eigenvectors.col(i) = es.eigenvectors().col(order[i]);
    }
    return basis;
}

struct ProjectorDiagnostics {
    double mass = 0.0;         // Tr{Pi rho^n} (or conditional analogue)
    std::uint64_t rank = 0;
    double rank_bound = 0.0;   // 2^{n(H+delta)}
    double eig_lower = 0.0;    // 2^{-n(H+delta)}
    double eig_upper = 0.0;    // 2^{-n(H-delta)}
    double min_typical_eig = 0.0;
    double max_typical_eig = 0.0;
    double entropy = 0.0;      // H used for the bounds, in bits
    bool rank_bound_holds = false;
    bool sandwich_holds = false;
};

struct TypicalProjector {
    int n = 0;
    double delta = 0.0;
    SpectralBasis basis;
    std::vector<std::vector<int>> labels;   // typical eigenlabel sequences
    ProjectorDiagnostics diag;

    // Dense d^n x d^n projector; only sensible for small instances.
    Matrix materialize() const {
        const int d = static_cast<int>(basis.eigenvalues.size());
        long dim = 1;
        for (int i = 0; i < n; ++i) {
            dim *= d;
            if (dim > 4096)
                throw resource_error("materialize: projector too large");
        }
        Matrix proj = Matrix::Zero(dim, dim);
        for (const auto& seq : labels) {
            Vector v = basis.eigenvectors.col(seq[0]);
            for (int i = 1; i < n; ++i)
                v = kron(v, Vector(basis.eigenvectors.col(seq[i])));
            proj += v * v.adjoint();
        }
        return proj;
    }
};

namespace detail {

inline void finalize_diagnostics(ProjectorDiagnostics& d, int n,
                                 double delta) {
    d.rank_bound = std::exp2(n * (d.entropy + delta));
    d.eig_lower = std::exp2(-n * (d.entropy + delta));
    d.eig_upper = std::exp2(-n * (d.entropy - delta));
    d.rank_bound_holds = double(d.rank) <= d.rank_bound * (1.0 + 1e-12);
    d.sandwich_holds =
        d.rank == 0 ||
        (d.min_typical_eig >= d.eig_lower * (1.0 - 1e-12) &&
         d.max_typical_eig <= d.eig_upper * (1.0 + 1e-12));
}

}  // namespace detail

// Projector onto the weakly typical subspace of rho^{(x)n}: eigenvector
// tensor products whose eigenvalue labels form a typical sequence. Because
// the projector commutes with rho^{(x)n}, its mass, rank, and the clipped
// spectrum all follow from the label enumeration.
inline TypicalProjector typical_projector(const Matrix& rho, int n,
                                          double delta) {
    if (n < 1) throw std::domain_error("typical_projector: n must be >= 1");
    if (!(delta > 0.0))
        throw std::domain_error("typical_projector: delta must be > 0");
    TypicalProjector out;
    out.n = n;
    out.delta = delta;
    out.basis = sorted_eigensystem(rho);
    const int d = static_cast<int>(out.basis.eigenvalues.size());
    long dim = 1;
    for (int i = 0; i < n; ++i) {
        dim *= d;
        if (dim > kMaxProjectorDim)
            throw resource_error("typical_projector: d^n exceeds guard");
    }
    Distribution p(out.basis.eigenvalues.data(),
                   out.basis.eigenvalues.data() + d);
    out.diag.entropy = shannon_entropy(p);
    double min_eig = 1.0, max_eig = 0.0;
    detail::for_each_sequence(d, n, [&](const std::vector<int>& seq) {
        double logp = 0.0;
        for (int x : seq) {
            if (p[x] <= 0.0) return;
            logp += std::log2(p[x]);
        }
        if (std::abs(-logp / n - out.diag.entropy) <= delta) {
            out.labels.push_back(seq);
            const double prob = std::exp2(logp);
            out.diag.mass += prob;
            min_eig = std::min(min_eig, prob);
            max_eig = std::max(max_eig, prob);
        }
    });
    out.diag.rank = out.labels.size();
    out.diag.min_typical_eig = out.diag.rank ? min_eig : 0.0;
    out.diag.max_typical_eig = out.diag.rank ? max_eig : 0.0;
    detail::finalize_diagnostics(out.diag, n, delta);
    return out;
}

// Ensemble {p(x), rho_x} for conditional typicality.
struct Ensemble {
    Distribution px;
    std::vector<Matrix> states;

    void validate() const {
        validate_distribution(px);
        if (px.size() != states.size())
            throw std::domain_error("ensemble: size mismatch");
    }
};

struct CondTypicalProjector {
    int n = 0;
    double delta = 0.0;
    std::vector<int> xn;
    std::vector<SpectralBasis> bases;       // one per ensemble letter
    std::vector<std::vector<int>> labels;   // typical y^n given xn
    ProjectorDiagnostics diag;

    Matrix materialize() const {
        const int d = static_cast<int>(bases[0].eigenvalues.size());
        long dim = 1;
        for (std::size_t i = 0; i < xn.size(); ++i) {
            dim *= d;
            if (dim > 4096)
                throw resource_error("materialize: projector too large");
        }
        Matrix proj = Matrix::Zero(dim, dim);
        for (const auto& seq : labels) {
            Vector v = bases[xn[0]].eigenvectors.col(seq[0]);
            for (std::size_t i = 1; i < xn.size(); ++i)
                v = kron(v, Vector(bases[xn[i]].eigenvectors.col(seq[i])));
            proj += v * v.adjoint();
        }
        return proj;
    }
};

// Conditional entropy H(Y|X) of the spectral labels of an ensemble, bits.
inline double conditional_label_entropy(const Ensemble& ens) {
    ens.validate();
    double h = 0.0;
    for (std::size_t x = 0; x < ens.states.size(); ++x) {
        if (ens.px[x] <= 0.0) continue;
        for (double lam : hermitian_eigenvalues(ens.states[x]))
            h -= ens.px[x] * xlog2x(std::max(0.0, lam));
    }
    return h;
}

// Weak conditionally typical projector for rho_{x^n} = rho_{x_1} (x) ...
// (x) rho_{x_n}, built from per-letter eigendecompositions.
inline CondTypicalProjector cond_typical_projector(const Ensemble& ens,
                                                   const std::vector<int>& xn,
                                                   double delta) {
    ens.validate();
    if (xn.empty())
        throw std::domain_error("cond_typical_projector: empty sequence");
    if (!(delta > 0.0))
        throw std::domain_error("cond_typical_projector: delta must be > 0");
    const int n = static_cast<int>(xn.size());
    CondTypicalProjector out;
    out.n = n;
    out.delta = delta;
    out.xn = xn;
    out.bases.reserve(ens.states.size());
    for (const auto& rho : ens.states)
        out.bases.push_back(sorted_eigensystem(rho));
    const int d = static_cast<int>(out.bases[0].eigenvalues.size());
    for (int x : xn)
        if (x < 0 || x >= static_cast<int>(ens.states.size()))
            throw std::domain_error("cond_typical_projector: symbol range");
    long dim = 1;
    for (int i = 0; i < n; ++i) {
        dim *= d;
        if (dim > kMaxProjectorDim)
            throw resource_error("cond_typical_projector: d^n exceeds guard");
    }
    out.diag.entropy = conditional_label_entropy(ens);
    double min_eig = 1.0, max_eig = 0.0;
    detail::for_each_sequence(d, n, [&](const std::vector<int>& seq) {
        double logp = 0.0;
        for (int i = 0; i < n; ++i) {
            const double lam = out.bases[xn[i]].eigenvalues[seq[i]];
            if (lam <= 0.0) return;
            logp += std::log2(lam);
        }
        if (std::abs(-logp / n - out.diag.entropy) <= delta) {
            out.labels.push_back(seq);
            const double prob = std::exp2(logp);
            out.diag.mass += prob;
            min_eig = std::min(min_eig, prob);
            max_eig = std::max(max_eig, prob);
        }
    });
    out.diag.rank = out.labels.size();
    out.diag.min_typical_eig = out.diag.rank ? min_eig : 0.0;
    out.diag.max_typical_eig = out.diag.rank ? max_eig : 0.0;
    detail::finalize_diagnostics(out.diag, n, delta);
    return out;
}

// Exact E_{X^n} Tr{Pi_{rho_{X^n}} rho_{X^n}} by enumerating x^n.
inline double expected_cond_typical_mass(const Ensemble& ens, int n,
                                         double delta) {
    ens.validate();
    const int dx = static_cast<int>(ens.px.size());
    const double total = std::pow(double(dx), double(n));
    if (total > double(kMaxProjectorDim))
        throw resource_error("expected_cond_typical_mass: |X|^n exceeds guard");
    double expected = 0.0;
    detail::for_each_sequence(dx, n, [&](const std::vector<int>& xn) {
        double px = 1.0;
        for (int x : xn) px *= ens.px[x];
        if (px <= 0.0) return;
        expected += px * cond_typical_projector(ens, xn, delta).diag.mass;
    });
    return expected;
}

}  // namespace bmac::typ

#endif
