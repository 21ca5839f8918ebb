#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "trapmodes/verify.hpp"

using namespace trapmodes;

namespace {

const Structure& two_body(double h0, double h1)
{
    static std::map<std::pair<double, double>, Structure> cache;
    auto it = cache.find({h0, h1});
    if (it == cache.end()) it = cache.emplace(std::make_pair(h0, h1), synthesize(ModeParams::make(1), {h0, h1})).first;
    return it->second;
}

const std::vector<std::pair<double, double>> kTypes{{0, 0}, {0.1, 0.1}, {0.1, 0}, {0, 0.1}};

Structure scaled(Structure s, std::size_t k, double f)
{
    auto& b = s.bodies[k];
    for (auto& p : b.wetted.points) p = {p.rho * f, p.eta * f};
    b.inner_radius *= f;
    b.outer_radius *= f;
    return s;
}

} // namespace

TEST(Kinematic, AllTwoBodyTypes)
{
    for (auto [h0, h1] : kTypes) {
        const auto& s = two_body(h0, h1);
        for (std::size_t k = 0; k < s.bodies.size(); ++k) EXPECT_LE(check_kinematic(s, k), 1e-6) << h0 << h1 << k;
    }
}

TEST(Kinematic, PerturbedCurvesAreDetected)
{
    const auto& s = two_body(0.1, 0);
    for (std::size_t k = 0; k < s.bodies.size(); ++k) {
        EXPECT_GT(check_kinematic(scaled(s, k, 1.01), k), 1e-3) << k;
        // interior vertices shifted sideways by 1e-3
        auto t = s;
        auto& pts = t.bodies[k].wetted.points;
        for (std::size_t i = 1; i + 1 < pts.size(); ++i) pts[i].rho += 1e-3;
        EXPECT_GT(check_kinematic(t, k), 1e-3) << k;
    }
}

TEST(MotionEquations, SymmetryAndHeave)
{
    for (auto [h0, h1] : kTypes) {
        const auto& s = two_body(h0, h1);
        for (std::size_t k = 0; k < s.bodies.size(); ++k) {
            const auto r = check_motion_equations(s, k);
            EXPECT_LE(std::abs(r[0]), 1e-5) << h0 << h1 << k;
            for (int i = 1; i < 6; ++i) EXPECT_LE(r[i], 1e-10) << i;
            // halving the surface-quadrature step changes the residual by < 10% of the tolerance
            const auto coarse = detail::motion_residuals(s, k, 4);
            EXPECT_LT(std::abs(coarse[0] - r[0]), 1e-6);
        }
    }
}

TEST(MotionEquations, PerturbedHeavingBodyFails)
{
    // a heaving body that is not a level line of psi^(H) violates the heave equation
    const auto& s = two_body(0.1, 0.1);
    auto t = scaled(s, 0, 1.01);
    t.matrices[0] = compute_matrices(t.bodies[0]);
    EXPECT_GT(std::abs(check_motion_equations(t, 0)[0]), 1e-5);
}

TEST(WaterVolume, ReproducesExactVolume)
{
    const auto& s = two_body(0, 0);
    const std::vector<TruncationDomain> doms{{10, 5}, {14, 9}};
    const auto v = water_volume_integral(s, doms, [](double rho, double) { return 2 * M_PI * rho; });
    for (std::size_t j = 0; j < doms.size(); ++j) {
        double exact = M_PI * doms[j].b * doms[j].b * doms[j].d;
        for (const auto& b : s.bodies) exact -= body_moments(b).displaced_volume;
        EXPECT_NEAR(v[j], exact, 1e-9 * exact) << j;
    }
    EXPECT_THROW(water_volume_integral(s, {{3, 5}}, [](double, double) { return 1.0; }), DomainError);
    EXPECT_THROW(water_volume_integral(s, {{20, 10}, {10, 5}}, [](double, double) { return 1.0; }), DomainError);
}

TEST(WaterVolume, RingIsInsideTheRingBody)
{
    const auto& s = two_body(0, 0);
    const auto& b = s.bodies[ring_body_index(s)];
    EXPECT_LT(b.inner_radius, s.mode.rho_r);
    EXPECT_GT(b.outer_radius, s.mode.rho_r);
    EXPECT_GT(guard_distance(s), 0.02);
}

TEST(Equipartition, ConvergesOnSmallDomains)
{
    const auto& s = two_body(0, 0);
    const auto e = check_equipartition(s, {{10, 5}, {20, 10}});
    ASSERT_EQ(e.size(), 2u);
    EXPECT_GT(e[0].gap, e[1].gap);
    EXPECT_LT(e[1].gap, 1e-5);
    EXPECT_GT(e[1].lhs, 0.0);
}

TEST(Equipartition, HeavingBodiesContribute)
{
    const auto& s = two_body(0.1, 0.1);
    const auto e = check_equipartition(s, {{10, 5}, {20, 10}});
    EXPECT_GT(e[0].gap, e[1].gap);
    EXPECT_LT(e[1].gap, 1e-4);
}

TEST(GreenIdentity, ClosureAndLimit)
{
    const auto& s = two_body(0, 0);
    const double b = 10.0;
    const auto g = check_green_identity(s, b);
    ASSERT_EQ(g.lateral.size(), 5u);
    const double a = s.mode.rho_r;
    for (std::size_t i = 0; i < g.depths.size(); ++i) {
        const double d = g.depths[i];
        EXPECT_LE(g.closure[i], 1e-10) << d;
        // closed form of the lateral term through the kernel integrals
        const double ks2 = kernel_integral(Trig::SinMinusCos, 1, 1, a, b, -d, 2);
        const double kc1 = kernel_integral(Trig::CosPlusSin, 1, 1, a, b, -d, 1);
        const double L = 4 * M_PI * b * ((1 - d) * ks2 + kc1);
        EXPECT_NEAR(g.lateral[i], L, 1e-8 * g.scale + 1e-8 * std::abs(L)) << d;
        if (i > 0) {
            EXPECT_LT(std::abs(g.bottom[i]), std::abs(g.bottom[i - 1]));
            EXPECT_LT(std::abs(g.lateral[i] + g.direct), std::abs(g.lateral[i - 1] + g.direct));
        }
    }
    // the ring body alone: the direct integral vanishes, and the lateral term tends to it
    EXPECT_LE(std::abs(g.direct), 1e-5 * g.scale);
    EXPECT_LE(g.limit_gap, 1e-4);
    EXPECT_THROW(check_green_identity(s, 3.0), DomainError);
}

TEST(FarField, TrappedDecaysFast)
{
    for (int m : {1, 2, 6}) EXPECT_LE(check_far_field(ModeParams::make(m)), -1.4) << m;
}

TEST(FarField, RestoredWaveDecaysLikeInverseSqrt)
{
    for (int m : {1, 2, 6}) {
        const double e = check_far_field(ModeField(bessel_zero({ZeroFamily::J1, m}) + 0.5));
        EXPECT_GE(e, -0.6) << m;
        EXPECT_LE(e, -0.4) << m;
    }
}

TEST(Report, DefaultDomainsContainStructure)
{
    const auto& s = two_body(0, 0);
    const auto d = default_domains(s);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d.back().b, 40.0);
    EXPECT_EQ(d.back().d, 20.0);
    const auto s6 = synthesize(ModeParams::make(6), {0, 0.05, 0});
    const auto d6 = default_domains(s6);
    EXPECT_GT(d6[0].b, s6.bodies.back().outer_radius);
    EXPECT_GT(d6[0].d, -lowest_point(s6.bodies.back()));
}
