#ifndef BMAC_LINALG_HPP
#define BMAC_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

#include "bmac/common.hpp"

namespace bmac {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_hermitian(const Matrix& m, double tol = 1e-9,
                              const char* what = "matrix") {
    if (m.rows() != m.cols())
        throw std::domain_error(std::string(what) + " is not square");
    if (hermiticity_defect(m) > tol)
        throw std::domain_error(std::string(what) + " is not Hermitian");
}

// Eigenvalues of a Hermitian matrix, descending.
inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

// Trace norm ||X||_1 for Hermitian X (sum of |eigenvalues|).
inline double trace_norm_hermitian(const Matrix& x) {
    return hermitian_eigenvalues(x).cwiseAbs().sum();
}

inline double trace_distance(const Matrix& a, const Matrix& b) {
    return trace_norm_hermitian(a - b);
}

// sqrt of a POVM element: eigendecompose, clamp the spectrum to [0,1].
inline Matrix povm_sqrt(const Matrix& lam) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(lam);
    Eigen::VectorXd vals = es.eigenvalues();
    for (Eigen::Index i = 0; i < vals.size(); ++i)
        vals[i] = std::sqrt(std::clamp(vals[i], 0.0, 1.0));
    return es.eigenvectors() * vals.asDiagonal() *
           es.eigenvectors().adjoint();
}

inline void require_psd(const Matrix& m, double tol = 1e-9,
                        const char* what = "matrix") {
    require_hermitian(m, tol, what);
    const double lo = hermitian_eigenvalues(m).minCoeff();
    if (lo < -tol)
        throw std::domain_error(std::string(what) +
                                " is not positive semidefinite");
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

// Applies a single-mode operator U to mode `mode` of an n-mode state vector
// with per-mode dimension d (mode 0 owns the slowest-varying index).
inline void apply_mode_operator(const Matrix& u, Vector& psi, int mode,
                                int n_modes, int d) {
    const Eigen::Index dim = psi.size();
    Eigen::Index outer = 1;
    for (int m = 0; m < mode; ++m) outer *= d;
    Eigen::Index inner = dim / (outer * d);
    Vector scratch(d);
    for (Eigen::Index o = 0; o < outer; ++o) {
        for (Eigen::Index in = 0; in < inner; ++in) {
            const Eigen::Index base = o * d * inner + in;
            for (int k = 0; k < d; ++k) scratch[k] = psi[base + k * inner];
            Vector mapped = u * scratch;
            for (int k = 0; k < d; ++k) psi[base + k * inner] = mapped[k];
        }
    }
    (void)n_modes;
}

}  // namespace bmac

#endif
