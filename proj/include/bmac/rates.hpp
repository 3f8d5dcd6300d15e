#ifndef BMAC_RATES_HPP
#define BMAC_RATES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bmac/common.hpp"

namespace bmac::rates {

// Slack used when evaluating the region-equality inequalities, so points on
// the boundary resolve deterministically.
inline constexpr double kEqualitySlack = 1e-12;

// Relative tolerance for comparing region vertices.
inline constexpr double kVertexTol = 1e-9;

struct ChannelParams {
    double eta;   // beamsplitter transmissivity in [0,1]
    double nsa;   // sender 1 mean photon budget
    double nsb;   // sender 2 mean photon budget

    void validate() const {
        if (!(eta >= 0.0 && eta <= 1.0) || !std::isfinite(eta))
            throw std::domain_error("eta must lie in [0,1]");
        if (!(nsa >= 0.0) || !std::isfinite(nsa))
            throw std::domain_error("nsa must be finite and >= 0");
        if (!(nsb >= 0.0) || !std::isfinite(nsb))
            throw std::domain_error("nsb must be finite and >= 0");
    }

    // Mean photon number reaching the receiver: eta*nsa + (1-eta)*nsb.
    double received_photons() const { return eta * nsa + (1.0 - eta) * nsb; }
};

struct RateRegion {
    double r1_max;   // bits per channel use
    double r2_max;
    double sum_max;
};

struct EntropySet {
    double h_b;
    double h_b_given_x;
    double h_b_given_y;
    double hmin_b_given_x;
    double hmin_b_given_y;
};

struct RatePoint {
    double r1;
    double r2;
};

// Convex region boundary in the (R1,R2) plane: counterclockwise vertices
// starting at (0,0), closed under dominance toward the axes.
struct PolygonRegion {
    std::vector<RatePoint> vertices;
};

enum class BaselineKind { heterodyne, homodyne };

// Entropy of a thermal state with mean photon number x, in bits:
// (x+1)log2(x+1) - x log2 x, continuous at 0.
inline double g_function(double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error("g_function: argument must be finite and >= 0");
    if (x == 0.0) return 0.0;
    return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

inline EntropySet entropies(const ChannelParams& p) {
    p.validate();
    EntropySet e;
    e.h_b = g_function(p.received_photons());
    e.h_b_given_x = g_function((1.0 - p.eta) * p.nsb);
    e.h_b_given_y = g_function(p.eta * p.nsa);
    e.hmin_b_given_x = log2_1p((1.0 - p.eta) * p.nsb);
    e.hmin_b_given_y = log2_1p(p.eta * p.nsa);
    return e;
}

inline RateRegion yen_shapiro_region(const ChannelParams& p) {
    const EntropySet e = entropies(p);
    return {e.h_b_given_y, e.h_b_given_x, e.h_b};
}

// The two pentagons achievable with the plain sequential decoder, differing
// in which single-sender rate carries the min-entropy penalty.
inline std::pair<RateRegion, RateRegion> seq_regions(const ChannelParams& p) {
    const EntropySet e = entropies(p);
    RateRegion first{e.hmin_b_given_y, e.h_b_given_x, e.h_b};
    RateRegion second{e.h_b_given_y, e.hmin_b_given_x, e.h_b};
    return {first, second};
}

// Same bounds as yen_shapiro_region; kept as a separately named region since
// it is achieved by a different (modified-measurement) argument.
inline RateRegion full_vn_region(const ChannelParams& p) {
    return yen_shapiro_region(p);
}

// Conventional-receiver baselines, derived from the Shannon AWGN MAC:
// heterodyne sees a complex AWGN channel with unit shot-noise photon per
// mode, homodyne a real channel with quadrature noise 1/4 (see README).
inline RateRegion baseline_region(const ChannelParams& p, BaselineKind kind) {
    p.validate();
    const double na = p.eta * p.nsa;
    const double nb = (1.0 - p.eta) * p.nsb;
    const double np = p.received_photons();
    switch (kind) {
        case BaselineKind::heterodyne:
            return {log2_1p(na), log2_1p(nb), log2_1p(np)};
        case BaselineKind::homodyne:
            return {0.5 * log2_1p(4.0 * na), 0.5 * log2_1p(4.0 * nb),
                    0.5 * log2_1p(4.0 * np)};
    }
    throw usage_error("baseline_region: unknown kind");
}

inline BaselineKind baseline_kind_from_string(const std::string& s) {
    if (s == "heterodyne") return BaselineKind::heterodyne;
    if (s == "homodyne") return BaselineKind::homodyne;
    throw usage_error("unknown baseline kind: " + s);
}

// True iff the convex hull of the two sequential-decoder pentagons fills the
// whole Yen-Shapiro region.
inline bool equality_conditions(const ChannelParams& p) {
    const EntropySet e = entropies(p);
    return e.h_b - e.h_b_given_x <= e.hmin_b_given_y + kEqualitySlack &&
           e.h_b - e.h_b_given_y <= e.hmin_b_given_x + kEqualitySlack;
}

struct EqualityMapEntry {
    double nsa;
    double nsb;
    bool equal;
};

inline std::vector<EqualityMapEntry> equality_map(
    double eta, const std::vector<std::pair<double, double>>& ns_grid) {
    std::vector<EqualityMapEntry> out;
    out.reserve(ns_grid.size());
    for (const auto& [nsa, nsb] : ns_grid)
        out.push_back({nsa, nsb, equality_conditions({eta, nsa, nsb})});
    return out;
}

namespace detail {

inline bool near(const RatePoint& a, const RatePoint& b, double tol) {
    return std::abs(a.r1 - b.r1) <= tol && std::abs(a.r2 - b.r2) <= tol;
}

inline double cross(const RatePoint& o, const RatePoint& a,
                    const RatePoint& b) {
    return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

// Monotone-chain convex hull; collinear points are dropped. Returns CCW
// order starting from the lexicographically smallest point.
inline std::vector<RatePoint> convex_hull(std::vector<RatePoint> pts,
                                          double scale) {
    const double point_tol = 1e-12 * std::max(1.0, scale);
    const double cross_tol = 1e-12 * std::max(1.0, scale * scale);
    std::sort(pts.begin(), pts.end(), [](const RatePoint& a, const RatePoint& b) {
        return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](const RatePoint& a, const RatePoint& b) {
                              return near(a, b, point_tol);
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<RatePoint> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower hull
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= cross_tol)
            --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper hull
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= cross_tol)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace detail

// Vertex polygon of a pentagon-shaped rate region: (0,0), the R1-axis
// vertex, the one or two corner points where the sum constraint meets the
// single-rate constraints, and the R2-axis vertex.
inline PolygonRegion region_geometry(const RateRegion& r) {
    if (r.r1_max < 0 || r.r2_max < 0 || r.sum_max < 0)
        throw std::domain_error("region_geometry: negative rate bound");
    // Guard against float error making the sum constraint look active when
    // it cannot be.
    const double sum = std::min(r.sum_max, r.r1_max + r.r2_max);
    std::vector<RatePoint> pts;
    pts.push_back({0.0, 0.0});
    pts.push_back({std::min(r.r1_max, sum), 0.0});
    if (sum - r.r1_max >= 0.0) pts.push_back({r.r1_max, sum - r.r1_max});
    if (sum - r.r2_max >= 0.0) pts.push_back({sum - r.r2_max, r.r2_max});
    pts.push_back({0.0, std::min(r.r2_max, sum)});
    const double scale =
        std::max({1.0, r.r1_max, r.r2_max, sum});
    std::vector<RatePoint> out;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : out)
            if (detail::near(p, q, 1e-12 * scale)) { dup = true; break; }
        if (!dup) out.push_back(p);
    }
    return {out};
}

// Convex hull of the union of two pentagon regions (time sharing between
// the operating points of the two).
inline PolygonRegion hull_region(const RateRegion& a, const RateRegion& b) {
    std::vector<RatePoint> pts;
    for (const auto& v : region_geometry(a).vertices) pts.push_back(v);
    for (const auto& v : region_geometry(b).vertices) pts.push_back(v);
    const double scale = std::max(
        {1.0, a.r1_max, a.r2_max, a.sum_max, b.r1_max, b.r2_max, b.sum_max});
    auto hull = detail::convex_hull(std::move(pts), scale);
    // Rotate so (0,0) leads; the hull of regions anchored at the origin
    // always contains it.
    for (std::size_t i = 0; i < hull.size(); ++i) {
        if (hull[i].r1 == 0.0 && hull[i].r2 == 0.0) {
            std::rotate(hull.begin(), hull.begin() + static_cast<long>(i),
                        hull.end());
            break;
        }
    }
    return {hull};
}

inline bool polygons_equal(const PolygonRegion& a, const PolygonRegion& b,
                           double rel_tol = kVertexTol) {
    if (a.vertices.size() != b.vertices.size()) return false;
    for (std::size_t i = 0; i < a.vertices.size(); ++i) {
        const auto& p = a.vertices[i];
        const auto& q = b.vertices[i];
        const double t1 = rel_tol * std::max({1.0, std::abs(p.r1), std::abs(q.r1)});
        const double t2 = rel_tol * std::max({1.0, std::abs(p.r2), std::abs(q.r2)});
        if (std::abs(p.r1 - q.r1) > t1 || std::abs(p.r2 - q.r2) > t2)
            return false;
    }
    return true;
}

inline bool region_contains(const RateRegion& r, const RatePoint& p,
                            double tol = 1e-12) {
    return p.r1 >= -tol && p.r2 >= -tol && p.r1 <= r.r1_max + tol &&
           p.r2 <= r.r2_max + tol && p.r1 + p.r2 <= r.sum_max + tol;
}

// Largest R1+R2 attained by any vertex of the polygon.
inline double max_sum_rate(const PolygonRegion& poly) {
    double best = 0.0;
    for (const auto& v : poly.vertices) best = std::max(best, v.r1 + v.r2);
    return best;
}

}  // namespace bmac::rates

#endif
