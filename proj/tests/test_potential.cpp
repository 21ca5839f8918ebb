#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "trapmodes/potential.hpp"

using namespace trapmodes;
namespace bm = boost::math;

namespace {

// Independent evaluation of phi with Boost Bessel functions and Boost's
// Gauss-Kronrod on [0, inf); only used away from the ring.
double phi_oracle(double rho, double eta, double a)
{
    auto T = [eta](double k) { return (k * std::cos(k * eta) + std::sin(k * eta)) * k * k / (k * k + 1.0); };
    const double e = std::exp(eta), pi2 = M_PI * M_PI;
    double err = 0.0;
    if (rho < a) {
        auto f = [&](double k) {
            if (k == 0.0) return 0.0;
            return T(k) * bm::cyl_bessel_i(0, k * rho) * bm::cyl_bessel_k(1, k * a);
        };
        const double v = bm::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 80.0 / (a - rho), 20, 1e-13, &err);
        return 2.0 * v - pi2 * e * bm::cyl_bessel_j(0, rho) * bm::cyl_neumann(1, a);
    }
    auto f = [&](double k) {
        if (k == 0.0) return 0.0;
        return T(k) * bm::cyl_bessel_k(0, k * rho) * bm::cyl_bessel_i(1, k * a);
    };
    const double v = bm::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 80.0 / (rho - a), 20, 1e-13, &err);
    return -2.0 * v - pi2 * e * bm::cyl_neumann(0, rho) * bm::cyl_bessel_j(1, a);
}

} // namespace

TEST(Quadrature, AdaptiveKnownIntegrals)
{
    auto r = integrate_adaptive<2>([](double x) { return Vec<2>{std::sin(x), std::exp(-x) * x}; }, 0.0, M_PI);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value[0], 2.0, 1e-14);
    EXPECT_NEAR(r.value[1], 1.0 - (1.0 + M_PI) * std::exp(-M_PI), 1e-14);
}

TEST(Quadrature, SemiInfiniteOscillatory)
{
    // int_0^inf e^{-k} cos(3k) dk = 1/10, int_0^inf sin(k)/(1+k^2) slow-decaying case checked against Boost
    auto r = integrate_semi_infinite<1>([](double k) { return Vec<1>{std::exp(-k) * std::cos(3 * k)}; }, 1.0, 3.0);
    EXPECT_NEAR(r.value[0], 0.1, 1e-13);
    auto s = integrate_semi_infinite<1>([](double k) { return Vec<1>{k * std::sin(2 * k) / (1 + k * k)}; }, 0.0, 2.0);
    EXPECT_NEAR(s.value[0], 0.5 * M_PI * std::exp(-2.0), 1e-9);
    EXPECT_THROW(integrate_semi_infinite<1>([](double) { return Vec<1>{1.0}; }, 0.0, 0.0), SingularPoint);
}

TEST(KernelIntegral, ClosedFormOracle)
{
    // int_0^inf k I_mu(a k) K_mu(b k) dk = (a/b)^mu / (b^2 - a^2)
    for (int mu : {0, 1})
        for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 2}, {0.5, 3}, {2, 2.5}}) {
            const double want = std::pow(a / b, mu) / (b * b - a * a);
            const double got = kernel_integral(Trig::None, mu, mu, a, b, 0.0, 1);
            EXPECT_NEAR(got / want, 1.0, 1e-8) << mu << " " << a << " " << b;
        }
    EXPECT_NEAR(kernel_integral(Trig::None, 1, 1, 1.0, 2.0, 0.0, 1), 1.0 / 6.0, 1e-9);
    EXPECT_NEAR(kernel_integral(Trig::None, 0, 0, 1.0, 2.0, 0.0, 1), 1.0 / 3.0, 1e-9);
}

TEST(KernelIntegral, TrigWeightedAgainstBoost)
{
    for (auto [sigma, tau, eta] : std::vector<std::array<double, 3>>{{1, 2, -0.5}, {0.3, 3.8, -2}, {3, 3.5, 0}}) {
        for (int power : {2, 3, 4}) {
            auto f = [&](double k) {
                if (k == 0.0) return 0.0;
                return (k * std::sin(k * eta) - std::cos(k * eta)) * bm::cyl_bessel_i(1, k * sigma) *
                       bm::cyl_bessel_k(1, k * tau) * std::pow(k, power) / (k * k + 1);
            };
            double err;
            const double want =
                bm::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 90.0 / (tau - sigma), 25, 1e-13, &err);
            const double got = kernel_integral(Trig::SinMinusCos, 1, 1, sigma, tau, eta, power);
            EXPECT_NEAR(got, want, 1e-9 * (1 + std::abs(want))) << sigma << " " << tau << " " << eta << " " << power;
        }
    }
    EXPECT_EQ(kernel_integral(Trig::CosPlusSin, 1, 1, 0.0, 2.0, -1.0, 2), 0.0);
    EXPECT_THROW(kernel_integral(Trig::CosPlusSin, 1, 1, 2.0, 2.0, 0.0, 2), SingularPoint);
    EXPECT_THROW(kernel_integral(Trig::CosPlusSin, 1, 1, 3.0, 2.0, -1.0, 2), DomainError);
}

TEST(ModeParamsTest, Derived)
{
    const auto mp = ModeParams::make(3, 2.0, 9.81);
    EXPECT_EQ(mp.nu, 4.0 / 9.81);
    EXPECT_NEAR(mp.rho_r, bm::cyl_bessel_j_zero(1.0, 3), 1e-9);
    EXPECT_THROW(ModeParams::make(0), DomainError);
    EXPECT_THROW(ModeParams::make(1, -1.0), DomainError);
}

TEST(Potential, MatchesIndependentQuadrature)
{
    for (int m : {1, 2}) {
        const auto mp = ModeParams::make(m);
        for (FieldPoint p : {FieldPoint{0.5, -0.3}, FieldPoint{2.0, -1.0}, FieldPoint{mp.rho_r + 1.5, -0.7},
                             FieldPoint{mp.rho_r - 1.0, 0.0}})
            EXPECT_NEAR(phi(p, mp), phi_oracle(p.rho, p.eta, mp.rho_r), 1e-9) << m << " " << p.rho << " " << p.eta;
    }
}

TEST(Potential, BranchContinuity)
{
    const auto mp = ModeParams::make(1);
    const ModeField f(mp);
    const double a = mp.rho_r, h = 1e-12;
    for (int i = 0; i < 20; ++i) {
        const double eta = -5.0 + 4.9 * i / 19.0;
        const auto in = f.fields(a - h, eta), out = f.fields(a + h, eta);
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(in[j], out[j], 1e-7) << eta << " component " << j;
    }
}

TEST(Potential, FreeSurfaceCondition)
{
    for (int m : {1, 2}) {
        const auto mp = ModeParams::make(m);
        const ModeField f(mp);
        int tested = 0;
        for (int i = 0; i < 60 && tested < 50; ++i) {
            const double rho = 0.05 + 3.0 * mp.rho_r * i / 59.0;
            if (std::abs(rho - mp.rho_r) < 0.05) continue;
            const auto v = f.fields(rho, 0.0);
            EXPECT_LE(std::abs(v[2] - v[0]), 1e-7 * std::max(1.0, std::abs(v[0]))) << rho;
            ++tested;
        }
    }
    const auto v = ModeField(ModeParams::make(1)).fields(1.0, 0.0);
    EXPECT_NEAR(v[2] - v[0], 0.0, 1e-7);
}

TEST(Potential, GradientsAgainstFiniteDifferences)
{
    const auto mp = ModeParams::make(1);
    const ModeField f(mp);
    const double h = 1e-5;
    for (FieldPoint p : {FieldPoint{2.0, -1.0}, FieldPoint{0.7, -0.2}, FieldPoint{5.0, -1.5}, FieldPoint{3.5, -0.4}}) {
        const auto c = f.fields(p.rho, p.eta);
        const auto r = f.fields(p.rho + h, p.eta), l = f.fields(p.rho - h, p.eta);
        const auto u = f.fields(p.rho, p.eta + h), d = f.fields(p.rho, p.eta - h);
        const double scale = 1e-6 * std::max(1.0, std::hypot(c[1], c[2]));
        EXPECT_NEAR((r[0] - l[0]) / (2 * h), c[1], scale);
        EXPECT_NEAR((u[0] - d[0]) / (2 * h), c[2], scale);
        // Stokes relations, with psi differentiated numerically
        EXPECT_NEAR((r[3] - l[3]) / (2 * h), p.rho * c[2], scale * p.rho);
        EXPECT_NEAR((u[3] - d[3]) / (2 * h), -p.rho * c[1], scale * p.rho);
    }
    EXPECT_EQ(f.fields(0.0, -1.0)[1], 0.0);
}

TEST(Potential, Harmonic)
{
    const auto mp = ModeParams::make(1);
    const ModeField f(mp);
    const double h = 1e-4;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double rho = 0.3 + 7.5 * i / 19.0, eta = -0.2 - 4.0 * j / 19.0;
            if (std::hypot(rho - mp.rho_r, eta) < 0.3) continue;
            const auto c = f.fields(rho, eta);
            const double prr = (f.fields(rho + h, eta)[0] - 2 * c[0] + f.fields(rho - h, eta)[0]) / (h * h);
            const double pee = (f.fields(rho, eta + h)[0] - 2 * c[0] + f.fields(rho, eta - h)[0]) / (h * h);
            EXPECT_LE(std::abs(prr + c[1] / rho + pee), 1e-5) << rho << " " << eta;
        }
}

TEST(StreamFunction, AxisAndNormalisation)
{
    const auto mp = ModeParams::make(1);
    for (double eta : {0.0, -0.5, -3.0}) EXPECT_EQ(psi({0.0, eta}, mp), 0.0);
    double near = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double t = 2 * M_PI * i / 16;
        const double eta = -0.5 * std::abs(std::sin(t));
        near = std::max(near, std::abs(psi({mp.rho_r + 0.5 * std::cos(t), eta}, mp)));
    }
    for (double t : {0.05, 0.4, 0.8, 1.2, 1.5}) {
        const FieldPoint far{mp.rho_r + 50 * std::cos(t), -50 * std::sin(t)};
        EXPECT_LE(std::abs(psi(far, mp)), 1e-3 * near) << t;
    }
}

TEST(StreamFunction, HeaveModification)
{
    const auto mp = ModeParams::make(1);
    const FieldPoint p{2.0, -0.5};
    EXPECT_EQ(psi_heave(p, mp, 0.0), psi(p, mp));
    EXPECT_DOUBLE_EQ(psi_heave(p, mp, 0.1), psi(p, mp) - 0.05 * 4.0);
    EXPECT_EQ(psi_heave({0.0, -1.0}, mp, 0.3), 0.0);
    const auto s = field_sample(p, mp, 0.1);
    EXPECT_EQ(s.psi_heave, psi_heave(p, mp, 0.1));
    EXPECT_NEAR(s.grad_psi_heave[0], s.grad_psi[0] - 0.1 * p.rho, 1e-15);
}

TEST(StreamFunction, SingularRing)
{
    const auto mp = ModeParams::make(1);
    EXPECT_THROW(phi({mp.rho_r, 0.0}, mp), SingularPoint);
    EXPECT_THROW(psi({mp.rho_r + 5e-7, 0.0}, mp), SingularPoint);
    EXPECT_NO_THROW(psi({mp.rho_r + 1e-5, 0.0}, mp));
    EXPECT_THROW(phi({1.0, 0.5}, mp), DomainError);
}

TEST(Lambda, VanishesOnAxisAndDecaysWithM)
{
    auto max_lambda = [](int m) {
        const auto mp = ModeParams::make(m);
        const double hi = bessel_zero({ZeroFamily::J1, 3});
        double mx = 0.0;
        for (int i = 1; i <= 120; ++i) mx = std::max(mx, std::abs(lambda_trace(hi * i / 120.0, mp, LambdaPart::Value)));
        return mx;
    };
    EXPECT_EQ(lambda_trace(0.0, ModeParams::make(6), LambdaPart::Value), 0.0);
    const std::vector<int> ms{6, 10, 14, 20};
    std::vector<double> lx, ly;
    for (int m : ms) {
        lx.push_back(std::log(double(m)));
        ly.push_back(std::log(max_lambda(m)));
    }
    for (std::size_t i = 1; i < ly.size(); ++i) EXPECT_LT(ly[i], ly[i - 1]);
    const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 4; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    // decays at least as fast as the m^{-5/2} bound, within 25%
    EXPECT_LE(sxy / sxx, -2.5 * 0.75);
}

TEST(Lambda, DerivativesAgainstFiniteDifferences)
{
    const auto mp = ModeParams::make(6);
    const double h = 1e-5;
    for (double rho : {1.0, 3.0, 8.0}) {
        const double d = (lambda_trace(rho + h, mp, LambdaPart::Value) - lambda_trace(rho - h, mp, LambdaPart::Value)) /
                         (2 * h);
        EXPECT_NEAR(lambda_trace(rho, mp, LambdaPart::DRho), d, 1e-7);
    }
}
