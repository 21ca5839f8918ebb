#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "trapmodes/structure.hpp"

using namespace trapmodes;

namespace {

// Torus-like body: the arc below eta = 0 of the circle centred (c, h), radius R > h.
struct Segment {
    double c = 3.0, h = 0.3, R = 1.0;

    double half_width() const { return std::sqrt(R * R - h * h); }

    BodySection body(int n = 240) const
    {
        BodySection b;
        const double beta = std::asin(h / R);
        for (int i = 0; i <= n; ++i) {
            const double t = M_PI + beta + (M_PI - 2 * beta) * i / n;
            b.wetted.points.push_back({c + R * std::cos(t), std::min(0.0, h + R * std::sin(t))});
        }
        b.wetted.points.front().eta = b.wetted.points.back().eta = 0.0;
        b.wetted.left_end = {EndKind::FreeSurface, c - half_width()};
        b.wetted.right_end = {EndKind::FreeSurface, c + half_width()};
        b.inner_radius = c - half_width();
        b.outer_radius = c + half_width();
        b.superstructure_height = 0.5;
        return b;
    }

    // int over the submerged region of 2 pi rho * g(rho, eta), rho-integral done in closed form
    double moment(int eta_power, bool radial) const
    {
        auto f = [&](double eta) {
            const double w = std::sqrt(std::max(0.0, R * R - (eta - h) * (eta - h)));
            const double r1 = c - w, r2 = c + w;
            const double ring = radial ? 0.5 * M_PI * (std::pow(r2, 4) - std::pow(r1, 4)) : M_PI * (r2 * r2 - r1 * r1);
            return ring * std::pow(eta, eta_power);
        };
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, h - R, 0.0, 15, 1e-14);
    }
};

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(BodyMomentsTest, SegmentAgainstPappus)
{
    const Segment seg;
    const auto b = seg.body();
    const auto m = body_moments(b);
    // Pappus: segment area times 2 pi c
    const double area = seg.R * seg.R * std::acos(seg.h / seg.R) - seg.h * seg.half_width();
    EXPECT_LE(relative(m.displaced_volume, 2 * M_PI * seg.c * area), 1e-8);
    EXPECT_LE(relative(m.displaced_volume, seg.moment(0, false)), 1e-8);
    EXPECT_LE(relative(m.buoyancy_center_eta, seg.moment(1, false) / seg.moment(0, false)), 1e-8);
    const double ri = b.inner_radius, ro = b.outer_radius;
    EXPECT_DOUBLE_EQ(m.I_D, M_PI * (ro * ro - ri * ri));
    EXPECT_EQ(m.I_D_i[0], 0.0);
    EXPECT_EQ(m.I_D_i[1], 0.0);
    EXPECT_EQ(m.I_D_12, 0.0);
    EXPECT_DOUBLE_EQ(m.I_D_11, 0.25 * M_PI * (std::pow(ro, 4) - std::pow(ri, 4)));
    EXPECT_EQ(m.I_D_11, m.I_D_22);
    EXPECT_EQ(m.buoyancy_horizontal[0], 0.0);
}

TEST(BodyMomentsTest, SlabMomentsAgainstAreaIntegrals)
{
    const Segment seg{2.0, 0.1, 0.8};
    const auto c = body_interpolant(seg.body());
    const auto s = curve_moments_below(c, 1.0);
    EXPECT_LE(relative(s.volume, seg.moment(0, false)), 1e-9);
    EXPECT_LE(relative(s.first, seg.moment(1, false)), 1e-9);
    EXPECT_LE(relative(s.second, seg.moment(2, false)), 1e-9);
    EXPECT_LE(relative(s.radial, seg.moment(0, true)), 1e-9);
}

TEST(BodyMomentsTest, SelfIntersectionRejected)
{
    auto b = Segment{}.body(40);
    std::swap(b.wetted.points[10], b.wetted.points[30]);
    EXPECT_THROW(body_moments(b), GeometryError);
}

TEST(Ballast, UniformPlanAtHullCentroid)
{
    auto b = Segment{}.body();
    const auto c = body_interpolant(b);
    const auto hull = hull_moments_below(b, c, b.superstructure_height);
    const double V = curve_moments_below(c, 1.0).volume;
    b.ballast = plan_ballast(b, hull.first / hull.volume);
    // the whole hull filled at density V / V_hull
    const auto bal = ballast_moments(b, c);
    EXPECT_LE(relative(bal.volume, V), 1e-10);
    EXPECT_NEAR(bal.first / bal.volume, hull.first / hull.volume, 1e-8);
    double dense = 0.0;
    for (const auto& l : b.ballast.layers) dense = std::max(dense, l.density);
    EXPECT_NEAR(dense, V / hull.volume, 1e-8);
}

TEST(Ballast, LowCentreOfMassIsStable)
{
    auto b = Segment{}.body();
    const double lo = lowest_point(b);
    b.ballast = plan_ballast(b, lo + 0.05);
    const auto bal = ballast_moments(b, body_interpolant(b));
    EXPECT_LE(relative(bal.volume, body_moments(b).displaced_volume), 1e-10);
    EXPECT_NEAR(bal.first / bal.volume, lo + 0.05, 1e-8);
    ASSERT_EQ(b.ballast.layers.size(), 2u);
    EXPECT_GT(b.ballast.layers[0].density, 0.0);
    EXPECT_EQ(b.ballast.layers[1].density, 0.0);
    const auto m = assemble_matrices(b);
    EXPECT_GT(m.K_hat_eigenvalues.minCoeff(), 0.0);
}

TEST(Ballast, TopHeavyPlanIsUnstable)
{
    // deep narrow body: the waterplane is too small to right a mass concentrated at the top
    const Segment seg{1.2, -0.9, 1.0};
    auto b = seg.body();
    EXPECT_LE(relative(body_moments(b).displaced_volume,
                       2 * M_PI * seg.c * (std::acos(seg.h / seg.R) - seg.h * seg.half_width())), 1e-8);
    b.ballast = plan_ballast(b, 0.45);
    EXPECT_GT(b.ballast.layers[1].density, 0.0);
    const auto bal = ballast_moments(b, body_interpolant(b));
    EXPECT_NEAR(bal.first / bal.volume, 0.45, 1e-8);
    EXPECT_LE(compute_matrices(b).K_hat_eigenvalues.minCoeff(), 0.0);
    EXPECT_THROW(assemble_matrices(b), StabilityViolation);
}

TEST(Ballast, UnreachableTargets)
{
    auto b = Segment{}.body();
    EXPECT_THROW(plan_ballast(b, 2.0), Infeasible);
    EXPECT_THROW(plan_ballast(b, lowest_point(b) - 0.1), Infeasible);
}

TEST(Matrices, LayoutAndOracle)
{
    // uniform density over the hull: moments from the closed-form slabs plus the superstructure box
    const Segment seg;
    auto b = seg.body();
    const auto c = body_interpolant(b);
    const auto hull = hull_moments_below(b, c, b.superstructure_height);
    b.ballast = plan_ballast(b, lowest_point(b) + 0.1);
    const auto m = compute_matrices(b);
    const auto bm = body_moments(b);
    const auto bal = ballast_moments(b, c);
    const double mass = bal.volume, yG = bal.first / mass;
    const double Iyy = bal.second - mass * yG * yG;
    EXPECT_EQ(m.E0(0, 0), m.E0(1, 1));
    EXPECT_EQ(m.E0(0, 0), m.E0(3, 3));
    EXPECT_NEAR(m.E0(2, 2), bal.radial, 1e-14 * bal.radial);
    EXPECT_NEAR(m.E0(4, 4), 0.5 * bal.radial + Iyy, 1e-12);
    EXPECT_EQ(m.E0(4, 4), m.E0(5, 5));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            if (i != j) EXPECT_EQ(m.E0(i, j), 0.0);
            EXPECT_EQ(m.K0(i, j), m.K0(j, i));
            if (i < 3 || j < 3) EXPECT_EQ(m.K0(i, j), 0.0);
        }
    EXPECT_EQ(m.K_hat(0, 0), bm.I_D);
    EXPECT_NEAR(m.K_hat(1, 1), bm.I_D_22 + bm.I_B_y, 1e-12);
    EXPECT_EQ(m.K_hat(1, 1), m.K_hat(2, 2));
    EXPECT_EQ(m.K_hat(0, 1), 0.0);
    EXPECT_EQ(m.K_hat(1, 2), 0.0);
    // I_B_y = int_B (y - y_G) dV for the displaced volume
    const double V = seg.moment(0, false), S1 = seg.moment(1, false);
    EXPECT_NEAR(bm.I_B_y, S1 - V * yG, 1e-8 * V);
    EXPECT_GT(m.E0_min_eigenvalue, 0.0);
    EXPECT_GT(hull.volume, V);
}

namespace {

void expect_valid(const Structure& s, std::size_t n)
{
    ASSERT_EQ(s.bodies.size(), n);
    ASSERT_EQ(s.matrices.size(), n);
    int enclosing = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& b = s.bodies[k];
        enclosing += b.wetted.encloses_ring;
        EXPECT_EQ(b.wetted.left_end.kind, EndKind::FreeSurface);
        EXPECT_EQ(b.wetted.right_end.kind, EndKind::FreeSurface);
        EXPECT_EQ(b.inner_radius, b.wetted.points.front().rho);
        EXPECT_EQ(b.outer_radius, b.wetted.points.back().rho);
        EXPECT_EQ(b.wetted.points.front().eta, 0.0);
        EXPECT_EQ(b.wetted.points.back().eta, 0.0);
        EXPECT_LE(b.wetted.max_residual, 1e-8);
        if (k > 0) EXPECT_LT(s.bodies[k - 1].outer_radius, b.inner_radius);
        // Archimedes and stability
        const auto bm = body_moments(b);
        const auto bal = ballast_moments(b, body_interpolant(b));
        EXPECT_LE(std::abs(bal.volume - bm.displaced_volume) / bm.displaced_volume, 1e-10) << k;
        EXPECT_NEAR(bal.first / bal.volume, b.ballast.center_of_mass_eta, 1e-8);
        EXPECT_GT(s.matrices[k].K_hat_eigenvalues.minCoeff(), 0.0);
        EXPECT_GT(s.matrices[k].E0_min_eigenvalue, 0.0);
        EXPECT_EQ(s.chi(k)[3], b.H);
    }
    EXPECT_EQ(enclosing, 1);
    EXPECT_GT(min_body_distance(s), 0.0);
}

} // namespace

TEST(Synthesis, FourTwoBodyTypes)
{
    const auto mp = ModeParams::make(1);
    for (auto h : std::vector<std::vector<double>>{{0, 0}, {0.1, 0.1}, {0.1, 0}, {0, 0.1}}) {
        const auto s = synthesize(mp, h);
        expect_valid(s, 2);
        EXPECT_EQ(ring_body_index(s), 1u);
        EXPECT_EQ(s.bodies[0].H, h[0]);
        EXPECT_EQ(s.bodies[1].H, h[1]);
        EXPECT_LT(s.bodies[0].outer_radius, mp.rho_r);
    }
}

TEST(Synthesis, ThreeBodiesModeSix)
{
    const auto s = synthesize(ModeParams::make(6), {0, 0.05, 0});
    expect_valid(s, 3);
    EXPECT_EQ(ring_body_index(s), 2u);
    EXPECT_EQ(s.bodies[1].H, 0.05);
}

TEST(Synthesis, Errors)
{
    const auto mp = ModeParams::make(1);
    EXPECT_THROW(synthesize(mp, {0, 0, 0}), InsufficientExtrema);
    EXPECT_THROW(synthesize(mp, {0}), DomainError);
    EXPECT_THROW(synthesize(mp, {0, -0.1}), DomainError);
}

TEST(Synthesis, HeaveBoundKeepsExtremumCount)
{
    const auto mp = ModeParams::make(6);
    const double hm = estimate_h_max(mp, 3);
    ASSERT_GT(hm, 0.0);
    ASSERT_LT(hm, 1.0);
    EXPECT_GE(structure_extrema(mp, hm, 3).size(), 2u);
    EXPECT_LT(structure_extrema(mp, hm + 2.0 / 4096, 3).size(), 2u);
}
