#ifndef BMAC_LEMMAS_HPP
#define BMAC_LEMMAS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmac/common.hpp"
#include "bmac/linalg.hpp"
#include "bmac/rng.hpp"

namespace bmac::lemmas {

inline constexpr double kCheckSlack = 1e-9;

inline void validate_povm_element(const Matrix& lam) {
    require_hermitian(lam, 1e-9, "POVM element");
    const auto evs = hermitian_eigenvalues(lam);
    if (evs.minCoeff() < -1e-9 || evs.maxCoeff() > 1.0 + 1e-9)
        throw std::domain_error("POVM element spectrum outside [0,1]");
}

inline void validate_subnormalized(const Matrix& sigma) {
    require_psd(sigma, 1e-9, "subnormalized state");
    if (sigma.trace().real() > 1.0 + 1e-9)
        throw std::domain_error("subnormalized state has trace > 1");
}

struct CheckResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// ||rho - sqrt(L) rho sqrt(L)||_1 <= 2 sqrt(1 - Tr{L rho})
inline CheckResult gentle_operator_check(const Matrix& lam,
                                         const Matrix& rho) {
    validate_povm_element(lam);
    require_psd(rho, 1e-9, "state");
    const Matrix root = povm_sqrt(lam);
    const double eps = std::max(0.0, 1.0 - (lam * rho).trace().real());
    CheckResult r;
    r.lhs = trace_norm_hermitian(rho - root * rho * root);
    r.rhs = 2.0 * std::sqrt(eps);
    r.holds = r.lhs <= r.rhs + kCheckSlack;
    return r;
}

struct EnsembleMember {
    double p;
    Matrix rho;
};

// sum_x p_x ||sqrt(L) rho_x sqrt(L) - rho_x||_1 <= 2 sqrt(1 - Tr{L rho_bar})
inline CheckResult gentle_ensemble_check(
    const std::vector<EnsembleMember>& ensemble, const Matrix& lam) {
    validate_povm_element(lam);
    if (ensemble.empty())
        throw std::domain_error("gentle_ensemble_check: empty ensemble");
    const Matrix root = povm_sqrt(lam);
    Matrix avg = Matrix::Zero(lam.rows(), lam.cols());
    CheckResult r;
    for (const auto& [p, rho] : ensemble) {
        if (p < 0.0) throw std::domain_error("negative ensemble weight");
        require_psd(rho, 1e-9, "ensemble state");
        avg += p * rho;
        r.lhs += p * trace_norm_hermitian(root * rho * root - rho);
    }
    const double eps = std::max(0.0, 1.0 - (lam * avg).trace().real());
    r.rhs = 2.0 * std::sqrt(eps);
    r.holds = r.lhs <= r.rhs + kCheckSlack;
    return r;
}

// Tr{L rho} <= Tr{L sigma} + ||rho - sigma||_1 for PSD rho, sigma
inline CheckResult trace_inequality_check(const Matrix& rho,
                                          const Matrix& sigma,
                                          const Matrix& lam) {
    validate_povm_element(lam);
    require_psd(rho, 1e-9, "rho");
    require_psd(sigma, 1e-9, "sigma");
    CheckResult r;
    r.lhs = (lam * rho).trace().real();
    r.rhs = (lam * sigma).trace().real() + trace_norm_hermitian(rho - sigma);
    r.holds = r.lhs <= r.rhs + kCheckSlack;
    return r;
}

// Tr{s} - Tr{P_N...P_1 s P_1...P_N} <= 2 sqrt(sum_i Tr{(I-P_i) s})
inline CheckResult union_bound_check(const Matrix& sigma,
                                     const std::vector<Matrix>& projectors) {
    validate_subnormalized(sigma);
    const Eigen::Index d = sigma.rows();
    Matrix chained = sigma;
    double defect_sum = 0.0;
    for (const auto& proj : projectors) {
        require_hermitian(proj, 1e-9, "projector");
        if ((proj * proj - proj).cwiseAbs().maxCoeff() > 1e-9)
            throw std::domain_error("union_bound_check: not idempotent");
        defect_sum += ((Matrix::Identity(d, d) - proj) * sigma).trace().real();
        chained = proj * chained * proj;
    }
    CheckResult r;
    r.lhs = sigma.trace().real() - chained.trace().real();
    r.rhs = 2.0 * std::sqrt(std::max(0.0, defect_sum));
    r.holds = r.lhs <= r.rhs + kCheckSlack;
    return r;
}

// --- random instance generators -------------------------------------------

inline Vector random_pure_state(int dim, Rng& rng) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = cplx(rng.normal(), rng.normal());
    v.normalize();
    return v;
}

// Wishart-normalized density matrix G G^dag / Tr.
inline Matrix random_density_matrix(int dim, Rng& rng) {
    Matrix gauss(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            gauss(i, j) = cplx(rng.normal(), rng.normal());
    Matrix rho = gauss * gauss.adjoint();
    return rho / rho.trace().real();
}

// Projector onto a Haar-random subspace of the given rank.
inline Matrix random_projector(int dim, int rank, Rng& rng) {
    Matrix gauss(dim, rank);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < rank; ++j)
            gauss(i, j) = cplx(rng.normal(), rng.normal());
    const Eigen::HouseholderQR<Matrix> qr(gauss);
    const Matrix q = qr.householderQ() * Matrix::Identity(dim, rank);
    return q * q.adjoint();
}

// Haar-random eigenbasis with spectrum uniform in [0,1].
inline Matrix random_povm_element(int dim, Rng& rng) {
    Matrix gauss(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            gauss(i, j) = cplx(rng.normal(), rng.normal());
    const Eigen::HouseholderQR<Matrix> qr(gauss);
    const Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    Vector spectrum(dim);
    for (int i = 0; i < dim; ++i) spectrum[i] = rng.uniform();
    return q * spectrum.asDiagonal() * q.adjoint();
}

// --- Monte Carlo sweeps -----------------------------------------------------

struct SweepReport {
    std::string lemma;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    double worst_margin = -1e300;   // max over samples of lhs - rhs
    std::uint64_t seed = 0;
    int max_dim = 0;
    std::vector<nlohmann::json> failure_artifacts;
};

namespace detail {

inline nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void record(SweepReport& rep, const CheckResult& r,
                   std::uint64_t sample, nlohmann::json instance) {
    ++rep.samples;
    rep.worst_margin = std::max(rep.worst_margin, r.lhs - r.rhs);
    if (!r.holds) {
        ++rep.violations;
        instance["sample"] = sample;
        instance["lhs"] = r.lhs;
        instance["rhs"] = r.rhs;
        rep.failure_artifacts.push_back(std::move(instance));
    }
}

}  // namespace detail

inline SweepReport sweep_gentle_operator(std::uint64_t samples,
                                         std::uint64_t seed, int max_dim = 16) {
    SweepReport rep{.lemma = "gentle_operator", .seed = seed,
                    .max_dim = max_dim};
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, {1, s}));
        const int dim = 2 + static_cast<int>(rng.below(max_dim - 1));
        const Matrix lam = random_povm_element(dim, rng);
        const Matrix rho = random_density_matrix(dim, rng);
        const auto r = gentle_operator_check(lam, rho);
        detail::record(rep, r, s,
                       {{"lambda", detail::matrix_json(lam)},
                        {"rho", detail::matrix_json(rho)}});
    }
    return rep;
}

inline SweepReport sweep_gentle_ensemble(std::uint64_t samples,
                                         std::uint64_t seed, int max_dim = 16) {
    SweepReport rep{.lemma = "gentle_ensemble", .seed = seed,
                    .max_dim = max_dim};
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, {2, s}));
        const int dim = 2 + static_cast<int>(rng.below(max_dim - 1));
        const int members = 1 + static_cast<int>(rng.below(4));
        std::vector<EnsembleMember> ensemble;
        double wsum = 0.0;
        for (int i = 0; i < members; ++i) {
            const double w = rng.uniform_pos();
            ensemble.push_back({w, random_density_matrix(dim, rng)});
            wsum += w;
        }
        for (auto& m : ensemble) m.p /= wsum;
        const Matrix lam = random_povm_element(dim, rng);
        const auto r = gentle_ensemble_check(ensemble, lam);
        detail::record(rep, r, s, {{"lambda", detail::matrix_json(lam)}});
    }
    return rep;
}

inline SweepReport sweep_trace_inequality(std::uint64_t samples,
                                          std::uint64_t seed,
                                          int max_dim = 16) {
    SweepReport rep{.lemma = "trace_inequality", .seed = seed,
                    .max_dim = max_dim};
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, {3, s}));
        const int dim = 2 + static_cast<int>(rng.below(max_dim - 1));
        const Matrix lam = random_povm_element(dim, rng);
        // positive operators, not necessarily normalized
        const Matrix rho = random_density_matrix(dim, rng) * rng.uniform(0.2, 2.0);
        const Matrix sigma = random_density_matrix(dim, rng) * rng.uniform(0.2, 2.0);
        const auto r = trace_inequality_check(rho, sigma, lam);
        detail::record(rep, r, s,
                       {{"lambda", detail::matrix_json(lam)},
                        {"rho", detail::matrix_json(rho)},
                        {"sigma", detail::matrix_json(sigma)}});
    }
    return rep;
}

inline SweepReport sweep_union_bound(std::uint64_t samples,
                                     std::uint64_t seed, int max_dim = 16,
                                     int max_chain = 6) {
    SweepReport rep{.lemma = "union_bound", .seed = seed, .max_dim = max_dim};
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, {4, s}));
        const int dim = 2 + static_cast<int>(rng.below(max_dim - 1));
        Matrix sigma = random_density_matrix(dim, rng);
        sigma *= rng.uniform(0.3, 1.0);   // subnormalized
        const int chain = 1 + static_cast<int>(rng.below(max_chain));
        std::vector<Matrix> projectors;
        for (int i = 0; i < chain; ++i) {
            const int rank = 1 + static_cast<int>(rng.below(dim));
            projectors.push_back(random_projector(dim, rank, rng));
        }
        const auto r = union_bound_check(sigma, projectors);
        detail::record(rep, r, s,
                       {{"sigma", detail::matrix_json(sigma)},
                        {"chain_length", chain}});
    }
    return rep;
}

}  // namespace bmac::lemmas

#endif
