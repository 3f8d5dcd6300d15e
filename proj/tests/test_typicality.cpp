#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bmac/rng.hpp"
#include "bmac/typicality.hpp"

using namespace bmac;
using namespace bmac::typ;

TEST_CASE("sample entropy") {
    SECTION("uniform binary: every sequence scores 1 bit") {
        const Distribution p{0.5, 0.5};
        CHECK(sample_entropy({0, 1, 1, 0}, p) ==
              Catch::Approx(1.0).margin(1e-15));
        CHECK(sample_entropy({1, 1, 1}, p) == Catch::Approx(1.0).margin(1e-15));
    }
    SECTION("frozen reference value") {
        CHECK(sample_entropy({0, 0, 1, 1}, {0.75, 0.25}) ==
              Catch::Approx(1.207518749639422).margin(1e-12));
    }
    SECTION("deterministic distribution") {
        CHECK(sample_entropy({0, 0, 0}, {1.0}) == 0.0);
    }
    SECTION("zero-probability symbol rejected") {
        CHECK_THROWS_AS(sample_entropy({0, 1}, {1.0, 0.0}), std::domain_error);
    }
}

TEST_CASE("typical set enumeration") {
    SECTION("uniform binary admits every sequence") {
        const auto set = typical_set({0.5, 0.5}, 6, 0.01);
        CHECK(set.members.size() == 64);
        CHECK(set.probability == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("biased binary at n=10") {
        const auto set = typical_set({0.89, 0.11}, 10, 0.1);
        CHECK(set.members.size() > 0);
        CHECK(set.probability > 0.0);
        CHECK(set.probability <= 1.0 + 1e-12);
        // every member passes the sample-entropy test by construction
        const double h = shannon_entropy({0.89, 0.11});
        for (const auto& seq : set.members)
            CHECK(std::abs(sample_entropy(seq, {0.89, 0.11}) - h) <= 0.1);
    }
    SECTION("deterministic distribution has a single member") {
        const auto set = typical_set({1.0, 0.0}, 8, 0.5);
        REQUIRE(set.members.size() == 1);
        CHECK(set.members[0] == std::vector<int>(8, 0));
        CHECK(set.probability == Catch::Approx(1.0).margin(1e-15));
    }
    SECTION("enumeration guard") {
        CHECK_THROWS_AS(typical_set({0.5, 0.5}, 25, 0.1), resource_error);
    }
}

TEST_CASE("typical projector") {
    SECTION("maximally mixed qubit keeps everything") {
        const auto tp = typical_projector(Matrix::Identity(2, 2) / 2.0, 5, 0.1);
        CHECK(tp.diag.rank == 32);
        CHECK(tp.diag.mass == Catch::Approx(1.0).margin(1e-12));
        CHECK(tp.diag.rank_bound_holds);
        CHECK(tp.diag.sandwich_holds);
        const Matrix dense = tp.materialize();
        CHECK((dense - Matrix::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("pure state projects onto its own product") {
        Matrix rho = Matrix::Zero(2, 2);
        rho(0, 0) = 1.0;
        const auto tp = typical_projector(rho, 4, 0.2);
        CHECK(tp.diag.rank == 1);
        CHECK(tp.diag.mass == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("diag(0.8, 0.2) at n=8") {
        Matrix rho = Matrix::Zero(2, 2);
        rho(0, 0) = 0.8;
        rho(1, 1) = 0.2;
        const auto tp = typical_projector(rho, 8, 0.15);
        CHECK(tp.diag.rank_bound_holds);
        CHECK(tp.diag.sandwich_holds);
        // brute-force mass: binomial sum over typical counts
        double expect = 0.0;
        const double h = shannon_entropy({0.8, 0.2});
        for (int k = 0; k <= 8; ++k) {
            const double hbar =
                -((8 - k) * std::log2(0.8) + k * std::log2(0.2)) / 8.0;
            if (std::abs(hbar - h) <= 0.15) {
                double binom = 1.0;
                for (int i = 0; i < k; ++i)
                    binom = binom * (8 - i) / (i + 1);
                expect += binom * std::pow(0.8, 8 - k) * std::pow(0.2, k);
            }
        }
        CHECK(tp.diag.mass == Catch::Approx(expect).margin(1e-12));
    }
    SECTION("dense projector matches the combinatorial diagnostics") {
        Matrix rho(2, 2);
        rho << 0.7, cplx(0.1, 0.05), cplx(0.1, -0.05), 0.3;
        const auto tp = typical_projector(rho, 3, 0.3);
        const Matrix dense = tp.materialize();
        // idempotent Hermitian
        CHECK((dense * dense - dense).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(hermiticity_defect(dense) < 1e-12);
        CHECK(std::abs(dense.trace().real() - double(tp.diag.rank)) < 1e-9);
        // mass against the dense route
        Matrix rho_n = rho;
        for (int i = 1; i < 3; ++i) rho_n = kron(rho_n, rho);
        CHECK((dense * rho_n).trace().real() ==
              Catch::Approx(tp.diag.mass).margin(1e-10));
    }
    SECTION("dimension guard") {
        CHECK_THROWS_AS(typical_projector(Matrix::Identity(3, 3) / 3.0, 10, 0.1),
                        resource_error);
    }
}

TEST_CASE("conditionally typical projector") {
    SECTION("pure conditional states give a rank-1 projector") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 1.0;
        Matrix b = Matrix::Zero(2, 2);
        b(1, 1) = 1.0;
        const Ensemble ens{{0.5, 0.5}, {a, b}};
        CHECK(conditional_label_entropy(ens) == Catch::Approx(0.0).margin(1e-12));
        const auto cp = cond_typical_projector(ens, {0, 1, 1, 0}, 0.2);
        CHECK(cp.diag.rank == 1);
        CHECK(cp.diag.mass == Catch::Approx(1.0).margin(1e-12));
        CHECK(cp.diag.sandwich_holds);
    }
    SECTION("maximally mixed conditional states keep the full space") {
        const Ensemble ens{{0.4, 0.6},
                           {Matrix::Identity(2, 2) / 2.0,
                            Matrix::Identity(2, 2) / 2.0}};
        const auto cp = cond_typical_projector(ens, {0, 1, 0}, 0.05);
        CHECK(cp.diag.rank == 8);
        CHECK(cp.diag.mass == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("binary family diag(0.9,0.1)/diag(0.5,0.5) at n=8") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 0.9;
        a(1, 1) = 0.1;
        const Ensemble ens{{0.5, 0.5}, {a, Matrix::Identity(2, 2) / 2.0}};
        Rng rng(404);
        for (int t = 0; t < 10; ++t) {
            std::vector<int> xn(8);
            for (auto& x : xn) x = static_cast<int>(rng.below(2));
            const auto cp = cond_typical_projector(ens, xn, 0.2);
            CHECK(cp.diag.rank_bound_holds);
            CHECK(cp.diag.sandwich_holds);
            if (cp.diag.rank > 0) {
                CHECK(cp.diag.min_typical_eig >= cp.diag.eig_lower * (1 - 1e-12));
                CHECK(cp.diag.max_typical_eig <= cp.diag.eig_upper * (1 + 1e-12));
            }
        }
    }
    SECTION("dense projector sandwich, eigenvalue-wise") {
        Matrix a(2, 2);
        a << 0.85, cplx(0.05, 0.1), cplx(0.05, -0.1), 0.15;
        Matrix b(2, 2);
        b << 0.6, 0.2, 0.2, 0.4;
        const Ensemble ens{{0.3, 0.7}, {a, b}};
        const std::vector<int> xn{0, 1, 1};
        const auto cp = cond_typical_projector(ens, xn, 0.4);
        const Matrix dense = cp.materialize();
        Matrix rho_xn = ens.states[xn[0]];
        for (std::size_t i = 1; i < xn.size(); ++i)
            rho_xn = kron(rho_xn, ens.states[xn[i]]);
        const Matrix clipped = dense * rho_xn * dense;
        for (double lam : hermitian_eigenvalues(clipped)) {
            if (lam < 1e-12) continue;   // outside the projected support
            CHECK(lam >= cp.diag.eig_lower * (1 - 1e-9));
            CHECK(lam <= cp.diag.eig_upper * (1 + 1e-9));
        }
        CHECK((dense * rho_xn).trace().real() ==
              Catch::Approx(cp.diag.mass).margin(1e-10));
    }
}

TEST_CASE("typical mass grows toward 1 - epsilon") {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.75;
    rho(1, 1) = 0.25;
    const TypicalityParams params{0.35, 0.25};
    params.validate();
    CHECK_THROWS_AS((TypicalityParams{0.0, 0.25}.validate()), std::domain_error);
    CHECK_THROWS_AS((TypicalityParams{0.1, 1.5}.validate()), std::domain_error);
    double prev = -1.0;
    int threshold = -1;
    for (int n : {4, 6, 8, 10}) {
        const auto tp = typical_projector(rho, n, params.delta);
        CHECK(tp.diag.mass > prev);
        prev = tp.diag.mass;
        if (threshold < 0 && tp.diag.mass >= 1.0 - params.epsilon)
            threshold = n;
    }
    CHECK(threshold == 8);   // empirical threshold for epsilon = 0.25

    SECTION("conditional expectation grows as well") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 0.75;
        a(1, 1) = 0.25;
        const Ensemble ens{{0.5, 0.5}, {a, Matrix::Identity(2, 2) / 2.0}};
        double prev_mass = -1.0;
        for (int n : {4, 6, 8}) {
            const double mass = expected_cond_typical_mass(ens, n, 0.35);
            CHECK(mass > prev_mass);
            prev_mass = mass;
        }
    }
}
