#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <json.hpp>

#include "bmac/discrete_mac.hpp"
#include "bmac/fock.hpp"
#include "bmac/io.hpp"
#include "bmac/rates.hpp"
#include "bmac/rng.hpp"

using namespace bmac;
using namespace bmac::dmac;

namespace {

PureStateMAC random_mac(Rng& rng, int dx, int dy, int d) {
    PureStateMAC mac;
    mac.dx = dx;
    mac.dy = dy;
    mac.d = d;
    for (int i = 0; i < dx * dy; ++i) {
        Vector v(d);
        for (int c = 0; c < d; ++c) v[c] = rng.uniform_disk(1.0);
        v.normalize();
        mac.phi.push_back(v);
    }
    return mac;
}

InputDists random_dists(Rng& rng, const PureStateMAC& mac) {
    InputDists dists{std::vector<double>(mac.dx), std::vector<double>(mac.dy)};
    for (auto* p : {&dists.px, &dists.py}) {
        double sum = 0.0;
        for (auto& v : *p) sum += (v = rng.uniform_pos());
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < p->size(); ++i) {
            (*p)[i] /= sum;
            acc += (*p)[i];
        }
        p->back() = 1.0 - acc;
    }
    return dists;
}

}  // namespace

TEST_CASE("cq entropies") {
    SECTION("binary XOR channel with uniform inputs") {
        const auto mac = xor_mac();
        const auto e = cq_entropies(mac, uniform_dists(mac));
        CHECK(e.h_b == Catch::Approx(1.0).margin(1e-12));
        CHECK(e.h_b_given_x == Catch::Approx(1.0).margin(1e-12));
        CHECK(e.hmin_b_given_y == Catch::Approx(1.0).margin(1e-12));
        CHECK(e.i_x_b == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("identical outputs carry no information") {
        PureStateMAC mac;
        mac.dx = mac.dy = 2;
        mac.d = 3;
        Vector v = Vector::Zero(3);
        v[1] = 1.0;
        mac.phi.assign(4, v);
        const auto e = cq_entropies(mac, uniform_dists(mac));
        CHECK(e.h_b == Catch::Approx(0.0).margin(1e-12));
        CHECK(e.h_b_given_x == Catch::Approx(0.0).margin(1e-12));
        CHECK(e.hmin_b_given_x == Catch::Approx(0.0).margin(1e-9));
    }
    SECTION("trivial second alphabet makes B deterministic given x") {
        Rng rng(2);
        auto mac = random_mac(rng, 3, 1, 4);
        const auto e = cq_entropies(mac, uniform_dists(mac));
        CHECK(e.h_b_given_x == Catch::Approx(0.0).margin(1e-10));
        CHECK(e.i_x_b == Catch::Approx(e.h_b).margin(1e-10));
    }
    SECTION("operator inequality holds on random instances") {
        Rng rng(5);
        for (int t = 0; t < 25; ++t) {
            auto mac = random_mac(rng, 2 + int(rng.below(3)),
                                  2 + int(rng.below(3)), 2 + int(rng.below(3)));
            const auto dists = random_dists(rng, mac);
            CHECK_NOTHROW(cq_entropies(mac, dists));
            const auto e = cq_entropies(mac, dists);
            CHECK(e.i_x_b >= -1e-9);
            CHECK(e.i_y_b >= -1e-9);
            CHECK(e.hmin_b_given_x <= e.h_b_given_x + 1e-9);
            CHECK(e.hmin_b_given_y <= e.h_b_given_y + 1e-9);
        }
    }
}

TEST_CASE("achievable regions from entropies") {
    SECTION("XOR channel region") {
        const auto mac = xor_mac();
        const auto regions =
            achievable_regions(cq_entropies(mac, uniform_dists(mac)));
        CHECK(regions.first.r1_max == Catch::Approx(1.0).margin(1e-12));
        CHECK(regions.first.r2_max == Catch::Approx(1.0).margin(1e-12));
        CHECK(regions.first.sum_max == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("all-identical channel collapses to the origin") {
        PureStateMAC mac;
        mac.dx = mac.dy = 2;
        mac.d = 2;
        Vector v = Vector::Zero(2);
        v[0] = 1.0;
        mac.phi.assign(4, v);
        const auto regions =
            achievable_regions(cq_entropies(mac, uniform_dists(mac)));
        CHECK(regions.hull.vertices.size() == 1);
    }
    SECTION("silenced second sender") {
        Rng rng(3);
        auto mac = random_mac(rng, 3, 1, 4);
        const auto e = cq_entropies(mac, uniform_dists(mac));
        const auto regions = achievable_regions(e);
        CHECK(regions.first.r2_max == Catch::Approx(0.0).margin(1e-10));
        CHECK(regions.first.r1_max ==
              Catch::Approx(e.hmin_b_given_y).margin(1e-12));
    }
}

TEST_CASE("corner equality check") {
    SECTION("matches the closed-form conditions of the bosonic channel") {
        CHECK(corner_equality_check(
            to_cq_entropies(rates::entropies({0.5, 10.0, 8.0}))));
        CHECK_FALSE(corner_equality_check(
            to_cq_entropies(rates::entropies({0.5, 1.0, 1.0}))));
        Rng rng(17);
        for (int t = 0; t < 100; ++t) {
            const rates::ChannelParams p{rng.uniform(), rng.uniform(0, 25),
                                         rng.uniform(0, 25)};
            CHECK(corner_equality_check(to_cq_entropies(rates::entropies(p))) ==
                  rates::equality_conditions(p));
        }
    }
    SECTION("all-zero entropies trivially satisfy it") {
        CHECK(corner_equality_check(CqEntropies{}));
    }
}

TEST_CASE("random-coding error bound") {
    CqEntropies unit;
    unit.h_b = unit.h_b_given_x = unit.hmin_b_given_y = 1.0;
    SECTION("hand-substituted values") {
        CHECK(error_bound(0.0, 0.0, 1, 1, 1, unit) ==
              Catch::Approx(2.449489742783178).margin(1e-9));
        CHECK(error_bound(0.01, 0.0, 1, 1, 1, unit) ==
              Catch::Approx(3.016809750418044).margin(1e-9));
    }
    SECTION("decays monotonically in n") {
        double prev = 10.0;
        for (int n = 1; n <= 40; ++n) {
            const double b = error_bound(0.0, 0.0, n, 1, 1, unit);
            CHECK(b < prev);
            prev = b;
        }
        CHECK(prev < 1e-5);
    }
}

TEST_CASE("sequential decoding simulation") {
    const auto mac = xor_mac();
    const auto dists = uniform_dists(mac);
    SECTION("rates (0,0) decode perfectly") {
        const auto est = simulate_sequential(mac, dists, {0.0, 0.0}, 4, 5, 1);
        CHECK(est.mean == 0.0);
        CHECK(est.sen_bound_violations == 0);
    }
    SECTION("error decreases inside the region (light sweep)") {
        const auto e4 = simulate_sequential(mac, dists, {0.3, 0.3}, 4, 120, 21,
                                            SimOptions{.trials_per_codebook = 4});
        const auto e8 = simulate_sequential(mac, dists, {0.3, 0.3}, 8, 120, 21,
                                            SimOptions{.trials_per_codebook = 4});
        CHECK(significantly_greater(e4, e8));
        CHECK(e4.sen_bound_violations == 0);
        CHECK(e8.sen_bound_violations == 0);
    }
    SECTION("sum rate above H(B) fails badly") {
        const auto est = simulate_sequential(mac, dists, {0.75, 0.75}, 8, 40, 5,
                                             SimOptions{.trials_per_codebook = 4});
        CHECK(est.l_count == 64);
        CHECK(est.mean > 0.5);
    }
    SECTION("empirical error respects the analytic bound when informative") {
        const auto e8 = simulate_sequential(mac, dists, {0.3, 0.3}, 8, 100, 33,
                                            SimOptions{.trials_per_codebook = 4});
        const auto ent = cq_entropies(mac, dists);
        const double bound = error_bound(0.0, 0.0, 8, e8.l_count, e8.m_count, ent);
        REQUIRE(bound < 1.0);
        CHECK(e8.mean <= bound);
    }
    SECTION("dimension guard") {
        CHECK_THROWS_AS(
            simulate_sequential(mac, dists, {0.1, 0.1}, 15, 1, 1),
            resource_error);
    }
    SECTION("thread count does not change results") {
        const auto a = simulate_sequential(mac, dists, {0.3, 0.3}, 6, 16, 9,
                                           SimOptions{.trials_per_codebook = 3,
                                                      .threads = 1});
        const auto b = simulate_sequential(mac, dists, {0.3, 0.3}, 6, 16, 9,
                                           SimOptions{.trials_per_codebook = 3,
                                                      .threads = 2});
        CHECK(a.mean == b.mean);
        CHECK(a.stderr_ == b.stderr_);
    }
}

TEST_CASE("MAC JSON round trip") {
    Rng rng(77);
    const auto mac = random_mac(rng, 2, 3, 2);
    nlohmann::json j = mac;
    CHECK(j.at("dx") == 2);
    CHECK(j.at("phi").size() == 2);
    CHECK(j.at("phi").at(0).size() == 3);
    const auto back = j.get<PureStateMAC>();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 3; ++y)
            CHECK((back.state(x, y) - mac.state(x, y)).norm() < 1e-15);
}

TEST_CASE("discretized coherent channel approaches the closed forms") {
    // Sample the complex-Gaussian ensembles on centered square grids of
    // increasing size; the cq output entropy must drift toward g(N').
    const double eta = 0.5, nsa = 0.6, nsb = 0.6;
    const rates::EntropySet target = rates::entropies({eta, nsa, nsb});
    const fock::TruncationPolicy policy{60, 1e-6};
    double prev_gap = 1e9;
    // refine the mesh and widen the support together, else the limit is the
    // boxed Gaussian rather than the true one
    for (const auto& [side, extent_sigmas] :
         std::vector<std::pair<int, double>>{{3, 2.0}, {5, 3.0}, {9, 4.0}}) {
        auto grid_points = [&, side = side, extent_sigmas = extent_sigmas](double ns) {
            std::vector<std::pair<cplx, double>> pts;
            const double sigma = std::sqrt(ns / 2.0);
            const double extent = extent_sigmas * sigma;
            double wsum = 0.0;
            for (int a = 0; a < side; ++a)
                for (int b = 0; b < side; ++b) {
                    const double re =
                        side == 1 ? 0.0 : -extent + 2.0 * extent * a / (side - 1);
                    const double im =
                        side == 1 ? 0.0 : -extent + 2.0 * extent * b / (side - 1);
                    const double w = std::exp(-(re * re + im * im) / ns);
                    pts.push_back({cplx(re, im), w});
                    wsum += w;
                }
            for (auto& p : pts) p.second /= wsum;
            return pts;
        };
        const auto pa = grid_points(nsa);
        const auto pb = grid_points(nsb);
        PureStateMAC mac;
        mac.dx = static_cast<int>(pa.size());
        mac.dy = static_cast<int>(pb.size());
        mac.d = policy.dim;
        InputDists dists;
        for (const auto& [amp, w] : pa) dists.px.push_back(w);
        for (const auto& [amp, w] : pb) dists.py.push_back(w);
        for (const auto& [alpha, wa] : pa)
            for (const auto& [beta, wb] : pb) {
                Vector v = fock::coherent_fock(
                    coherent::mix_output(eta, alpha, beta), policy);
                v.normalize();
                mac.phi.push_back(v);
            }
        const auto e = cq_entropies(mac, dists);
        const double gap = std::abs(e.h_b - target.h_b) +
                           std::abs(e.h_b_given_x - target.h_b_given_x);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.01);
}
