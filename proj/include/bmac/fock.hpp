#ifndef BMAC_FOCK_HPP
#define BMAC_FOCK_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bmac/common.hpp"
#include "bmac/linalg.hpp"

namespace bmac::fock {

using FockVector = Vector;      // amplitudes in the number basis |0>..|D-1>
using DensityMatrix = Matrix;

inline constexpr long kMaxTensorDim = 200000;   // guard on D^n

struct TruncationPolicy {
    int dim = 60;
    double tail_tol = 1e-10;

    void validate() const {
        if (dim < 2) throw std::domain_error("truncation dim must be >= 2");
        if (!(tail_tol > 0.0))
            throw std::domain_error("tail_tol must be positive");
    }
};

// Rule-of-thumb dimension that keeps a coherent state's truncated tail
// far below any tolerance used here.
inline int suggested_dim(double amp_mag) {
    return static_cast<int>(
        std::ceil(amp_mag * amp_mag + 8.0 * amp_mag + 20.0));
}

// Number-basis expansion e^{-|a|^2/2} a^k / sqrt(k!), not renormalized:
// the truncated tail must already be below policy.tail_tol.
inline FockVector coherent_fock(cplx alpha, const TruncationPolicy& policy) {
    policy.validate();
    FockVector v(policy.dim);
    cplx c = std::exp(cplx(-0.5 * std::norm(alpha), 0.0));
    double captured = 0.0;
    for (int k = 0; k < policy.dim; ++k) {
        v[k] = c;
        captured += std::norm(c);
        c *= alpha / std::sqrt(static_cast<double>(k + 1));
    }
    if (1.0 - captured >= policy.tail_tol)
        throw truncation_error(
            "coherent_fock: truncated tail mass " +
                std::to_string(1.0 - captured) + " exceeds tolerance",
            suggested_dim(std::abs(alpha)));
    return v;
}

// Displacement operator exp(alpha a^dag - alpha^* a) on the truncated
// ladder. The generator is anti-Hermitian, so we exponentiate through the
// eigendecomposition of its Hermitian partner; the resulting matrix is
// unitary up to solver roundoff, which is measured and gated rather than
// corrected.
inline Matrix displacement_matrix(cplx alpha, const TruncationPolicy& policy) {
    policy.validate();
    const int d = policy.dim;
    Matrix h = Matrix::Zero(d, d);   // h = -i (alpha a^dag - alpha^* a)
    for (int k = 1; k < d; ++k) {
        const double s = std::sqrt(static_cast<double>(k));
        h(k, k - 1) = cplx(0.0, -1.0) * alpha * s;
        h(k - 1, k) = std::conj(h(k, k - 1));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(d);
    for (int k = 0; k < d; ++k)
        phases[k] = std::exp(cplx(0.0, es.eigenvalues()[k]));
    Matrix u = es.eigenvectors() * phases.asDiagonal() *
               es.eigenvectors().adjoint();
    const double defect =
        (u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (defect > 1e-6)
        throw truncation_error(
            "displacement_matrix: unitarity defect " + std::to_string(defect),
            suggested_dim(std::abs(alpha)));
    return u;
}

// Tensor product of per-mode coherent states, mode 0 slowest.
inline FockVector product_coherent_state(const std::vector<cplx>& amps,
                                         const TruncationPolicy& policy) {
    if (amps.empty())
        throw std::domain_error("product_coherent_state: no modes");
    long dim = 1;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        dim *= policy.dim;
        if (dim > kMaxTensorDim)
            throw resource_error("product_coherent_state: D^n exceeds guard");
    }
    FockVector psi = coherent_fock(amps[0], policy);
    for (std::size_t i = 1; i < amps.size(); ++i)
        psi = kron(psi, coherent_fock(amps[i], policy));
    return psi;
}

struct VacuumSplit {
    double p_vac = 0.0;        // absolute weight on the n-fold vacuum
    FockVector post_vac;       // subnormalized vacuum branch
    FockVector post_not;       // subnormalized complement branch
};

// Non-destructive projection onto |0><0|^{(x)n} vs its complement. Works on
// any tensor-product layout where index 0 is the joint vacuum component.
inline VacuumSplit vacuum_or_not(const FockVector& state) {
    VacuumSplit s;
    s.p_vac = std::norm(state[0]);
    s.post_vac = FockVector::Zero(state.size());
    s.post_vac[0] = state[0];
    s.post_not = state;
    s.post_not[0] = 0.0;
    return s;
}

struct VacuumSplitDm {
    double p_vac = 0.0;
    DensityMatrix post_vac;
    DensityMatrix post_not;
};

inline VacuumSplitDm vacuum_or_not(const DensityMatrix& rho) {
    require_hermitian(rho, 1e-9, "vacuum_or_not input");
    VacuumSplitDm s;
    s.p_vac = rho(0, 0).real();
    s.post_vac = DensityMatrix::Zero(rho.rows(), rho.cols());
    s.post_vac(0, 0) = rho(0, 0);
    s.post_not = rho;
    s.post_not.row(0).setZero();
    s.post_not.col(0).setZero();
    return s;
}

struct ThreeStepResult {
    double p_yes = 0.0;        // Born probability given the input
    FockVector post_yes;       // subnormalized n-fold vacuum branch
    FockVector post_no;        // subnormalized complement, displaced back
};

// The receiver's realization of the pair test "is it |gamma^n>?":
//   1. displace each mode by -gamma_i,
//   2. vacuum-or-not,
//   3. displace the surviving branch back by +gamma_i.
inline ThreeStepResult three_step_test(const FockVector& state,
                                       const std::vector<cplx>& gammas,
                                       const TruncationPolicy& policy) {
    const int n_modes = static_cast<int>(gammas.size());
    if (n_modes == 0) throw std::domain_error("three_step_test: no modes");
    long expect = 1;
    for (int i = 0; i < n_modes; ++i) expect *= policy.dim;
    if (state.size() != expect)
        throw usage_error("three_step_test: state dimension mismatch");
    const double in_norm2 = state.squaredNorm();
    if (in_norm2 <= 0.0)
        throw usage_error("three_step_test: zero-norm input");

    FockVector psi = state;
    std::vector<Matrix> null_ops(n_modes);
    for (int i = 0; i < n_modes; ++i) {
        null_ops[i] = displacement_matrix(-gammas[i], policy);
        apply_mode_operator(null_ops[i], psi, i, n_modes, policy.dim);
    }
    const VacuumSplit split = vacuum_or_not(psi);
    ThreeStepResult r;
    r.p_yes = split.p_vac / in_norm2;
    r.post_yes = split.post_vac;
    r.post_no = split.post_not;
    for (int i = 0; i < n_modes; ++i) {
        // D(+gamma) = D(-gamma)^dag; reuse the step-1 operators
        apply_mode_operator(null_ops[i].adjoint(), r.post_no, i, n_modes,
                            policy.dim);
    }
    return r;
}

// Geometric photon-number distribution N^k / (N+1)^{k+1}.
inline DensityMatrix thermal_state(double mean_photons,
                                   const TruncationPolicy& policy) {
    policy.validate();
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
        throw std::domain_error("thermal_state: N must be finite and >= 0");
    DensityMatrix rho = DensityMatrix::Zero(policy.dim, policy.dim);
    if (mean_photons == 0.0) {
        rho(0, 0) = 1.0;
        return rho;
    }
    const double ratio = mean_photons / (mean_photons + 1.0);
    double p = 1.0 / (mean_photons + 1.0);
    double captured = 0.0;
    for (int k = 0; k < policy.dim; ++k) {
        rho(k, k) = p;
        captured += p;
        p *= ratio;
    }
    if (1.0 - captured >= policy.tail_tol)
        throw truncation_error(
            "thermal_state: truncated tail mass " +
                std::to_string(1.0 - captured) + " exceeds tolerance",
            policy.dim + 1);
    return rho;
}

// -log2 of the largest eigenvalue.
inline double min_entropy(const DensityMatrix& rho) {
    require_psd(rho, 1e-9, "min_entropy input");
    if (std::abs(rho.trace().real() - 1.0) > 1e-6)
        throw std::domain_error("min_entropy: trace must be ~1");
    return -std::log2(hermitian_eigenvalues(rho).maxCoeff());
}

struct SpectralFunctionals {
    double von_neumann_a = 0.0;   // bits
    double trace_distance = 0.0;
};

inline SpectralFunctionals spectral_functionals(const DensityMatrix& a,
                                                const DensityMatrix& b) {
    require_hermitian(a, 1e-9, "spectral_functionals first argument");
    require_hermitian(b, 1e-9, "spectral_functionals second argument");
    SpectralFunctionals out;
    for (double lam : hermitian_eigenvalues(a))
        if (lam > 0.0) out.von_neumann_a -= lam * std::log2(lam);
    out.trace_distance = trace_distance(a, b);
    return out;
}

}  // namespace bmac::fock

#endif
