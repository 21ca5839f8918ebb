#pragma once

// Trapped-mode potential phi_m, Stokes stream function psi_m and their
// gradients in dimensionless meridional coordinates (rho, eta) = (nu|x|, nu y).
//
//   T_phi(k, eta) = k cos(k eta) + sin(k eta),   T_psi(k, eta) = k sin(k eta) - cos(k eta)
//
// rho < a:  phi = 2 int T_phi I0(k rho) K1(k a) k^2/(k^2+1) dk - pi^2 e^eta J0(rho) Y1(a)
// rho > a:  phi = -2 int T_phi K0(k rho) I1(k a) k^2/(k^2+1) dk - pi^2 e^eta Y0(rho) J1(a)
//
// The minus sign on the outer integral is what makes the two branches (and
// their gradients) continuous across rho = a. With a = j_{1,m} the J1(a) wave
// term vanishes; it is kept so that an off-zero radius can be probed.

#include <array>
#include <cmath>
#include <numbers>

#include "trapmodes/errors.hpp"
#include "trapmodes/quadrature.hpp"
#include "trapmodes/specfun.hpp"

namespace trapmodes {

inline constexpr double singular_guard = 1e-6;

struct ModeParams {
    int m = 1;
    double omega = 1.0;
    double g = 1.0;
    double nu = 1.0;
    double rho_r = 0.0;

    static ModeParams make(int m, double omega = 1.0, double g = 1.0)
    {
        if (m < 1) throw DomainError("mode index must be >= 1");
        if (!(omega > 0.0) || !(g > 0.0)) throw DomainError("omega and g must be positive");
        return {m, omega, g, omega * omega / g, bessel_zero({ZeroFamily::J1, m})};
    }
};

struct FieldPoint {
    double rho = 0.0;
    double eta = 0.0;
};

struct FieldSample {
    double phi = 0.0;
    double psi = 0.0;                       // plain stream function
    std::array<double, 2> grad_phi{};       // (d/drho, d/deta)
    std::array<double, 2> grad_psi{};
    double psi_heave = 0.0;                 // psi - H rho^2 / 2
    std::array<double, 2> grad_psi_heave{};
};

enum class Trig { CosPlusSin, SinMinusCos, None };

namespace detail {

inline double trig_factor(Trig t, double k, double eta)
{
    switch (t) {
    case Trig::CosPlusSin: return k * std::cos(k * eta) + std::sin(k * eta);
    case Trig::SinMinusCos: return k * std::sin(k * eta) - std::cos(k * eta);
    case Trig::None: return 1.0;
    }
    return 0.0;
}

inline void check_point(double rho, double eta, double a)
{
    if (!(rho >= 0.0) || !(eta <= 0.0)) throw DomainError("field point outside the closed quadrant");
    if (std::hypot(rho - a, eta) < singular_guard) throw SingularPoint("field point inside the ring guard");
}

} // namespace detail

// int_0^inf T(k, eta) I_inner(k sigma) K_outer(k tau) w(k) dk with
// w = k^power/(k^2+1), or w = k^power when trig is None.
inline double kernel_integral(Trig trig, int inner_order, int outer_order, double sigma, double tau,
                              double eta, int power)
{
    if (!(sigma >= 0.0) || !(tau >= sigma)) throw DomainError("kernel requires 0 <= sigma <= tau");
    if (!(eta <= 0.0)) throw DomainError("kernel requires eta <= 0");
    if (power < 0 || power > 4) throw DomainError("kernel power out of range");
    if (std::hypot(tau - sigma, eta) < singular_guard) throw SingularPoint("kernel at the ring point");
    const double delta = tau - sigma;
    auto f = [&](double k) {
        const double w = trig == Trig::None ? std::pow(k, power) : std::pow(k, power) / (k * k + 1.0);
        const double ii = bessel_i_scaled(inner_order, k * sigma);
        if (ii == 0.0) return Vec<1>{0.0};
        const double kk = bessel_k_scaled(outer_order, k * tau);
        return Vec<1>{detail::trig_factor(trig, k, eta) * ii * kk * std::exp(-k * delta) * w};
    };
    const double freq = trig == Trig::None ? 0.0 : std::abs(eta);
    return integrate_semi_infinite<1>(f, delta, freq).value[0];
}

// Evaluates (phi, phi_rho, phi_eta, psi) for a ring of dimensionless radius a.
class ModeField {
public:
    explicit ModeField(const ModeParams& mp) : ModeField(mp.rho_r) {}

    explicit ModeField(double ring_radius) : a_(ring_radius)
    {
        const auto v = bessel_jy01(a_);
        y1a_ = v.y1;
        j1a_ = v.j1;
    }

    static ModeField with_wave(double ring_radius) { return ModeField(ring_radius); }

    double ring_radius() const { return a_; }
    double y1a() const { return y1a_; }
    double j1a() const { return j1a_; }

    // {phi, phi_rho, phi_eta, psi}
    std::array<double, 4> fields(double rho, double eta) const
    {
        detail::check_point(rho, eta, a_);
        constexpr double pi2 = std::numbers::pi * std::numbers::pi;
        const double e = std::exp(eta);
        const double freq = std::abs(eta);
        if (rho <= a_) {
            const double delta = a_ - rho;
            auto f = [&](double k) {
                const double x = k * rho;
                const double i0 = bessel_i_scaled(0, x), i1 = bessel_i_scaled(1, x);
                const double k1 = detail::k_scaled(1, k * a_) * std::exp(-k * delta);
                const double w2 = k * k / (k * k + 1.0), w3 = k * w2;
                const double s = std::sin(k * eta), c = std::cos(k * eta);
                const double tp = k * c + s, ts = k * s - c;
                return Vec<4>{tp * i0 * k1 * w2, tp * i1 * k1 * w3, ts * i0 * k1 * w3, ts * i1 * k1 * w2};
            };
            const auto v = integrate_semi_infinite<4>(f, delta, freq).value;
            double j0 = 1.0, j1 = 0.0;
            if (rho > 0.0) {
                const auto b = bessel_jy01(rho);
                j0 = b.j0;
                j1 = b.j1;
            }
            return {2.0 * v[0] - pi2 * e * j0 * y1a_, 2.0 * v[1] + pi2 * e * j1 * y1a_,
                    -2.0 * v[2] - pi2 * e * j0 * y1a_, -pi2 * rho * e * j1 * y1a_ - 2.0 * rho * v[3]};
        }
        const double delta = rho - a_;
        auto f = [&](double k) {
            const auto kk = detail::k01_scaled(k * rho);
            const double i1 = bessel_i_scaled(1, k * a_) * std::exp(-k * delta);
            const double w2 = k * k / (k * k + 1.0), w3 = k * w2;
            const double s = std::sin(k * eta), c = std::cos(k * eta);
            const double tp = k * c + s, ts = k * s - c;
            return Vec<4>{tp * kk[0] * i1 * w2, tp * kk[1] * i1 * w3, ts * kk[0] * i1 * w3, ts * kk[1] * i1 * w2};
        };
        const auto u = integrate_semi_infinite<4>(f, delta, freq).value;
        const auto b = bessel_jy01(rho);
        return {-2.0 * u[0] - pi2 * e * b.y0 * j1a_, 2.0 * u[1] + pi2 * e * b.y1 * j1a_,
                2.0 * u[2] - pi2 * e * b.y0 * j1a_, -2.0 * rho * u[3] - pi2 * rho * e * b.y1 * j1a_};
    }

    FieldSample sample(FieldPoint p, double H = 0.0) const
    {
        const auto f = fields(p.rho, p.eta);
        FieldSample s;
        s.phi = f[0];
        s.grad_phi = {f[1], f[2]};
        s.psi = f[3];
        // Stokes relations: psi_rho = rho phi_eta, psi_eta = -rho phi_rho
        s.grad_psi = {p.rho * f[2], -p.rho * f[1]};
        s.psi_heave = f[3] - 0.5 * H * p.rho * p.rho;
        s.grad_psi_heave = {p.rho * (f[2] - H), -p.rho * f[1]};
        return s;
    }

    // Lambda(rho, 0) = psi / Y1(a) + pi^2 rho J1(rho) and its first derivatives.
    std::array<double, 3> lambda(double rho) const
    {
        if (!(rho >= 0.0) || !(rho < a_)) throw DomainError("lambda is defined inside the ring radius");
        if (rho == 0.0) return {0.0, 0.0, 0.0};
        const auto f = fields(rho, 0.0);
        // integral parts: psi_int = -2 rho v3, phi_eta_int = -2 v2, phi_rho_int = 2 v1
        const auto b = bessel_jy01(rho);
        constexpr double pi2 = std::numbers::pi * std::numbers::pi;
        const double psi_int = f[3] + pi2 * rho * b.j1 * y1a_;
        const double phie_int = f[2] + pi2 * b.j0 * y1a_;
        const double phir_int = f[1] - pi2 * b.j1 * y1a_;
        // d/drho [rho I1(k rho)] = k rho I0(k rho); d/deta T_psi = k T_phi
        return {psi_int / y1a_, rho * phie_int / y1a_, -rho * phir_int / y1a_};
    }

private:
    double a_;
    double y1a_ = 0.0;
    double j1a_ = 0.0;
};

inline double phi(FieldPoint p, const ModeParams& mp) { return ModeField(mp).fields(p.rho, p.eta)[0]; }
inline double psi(FieldPoint p, const ModeParams& mp) { return ModeField(mp).fields(p.rho, p.eta)[3]; }

inline double psi_heave(FieldPoint p, const ModeParams& mp, double H)
{
    if (!(H >= 0.0)) throw DomainError("heave amplitude must be >= 0");
    const double v = psi(p, mp);
    return H == 0.0 ? v : v - 0.5 * H * p.rho * p.rho;
}

inline FieldSample field_sample(FieldPoint p, const ModeParams& mp, double H = 0.0)
{
    return ModeField(mp).sample(p, H);
}

enum class LambdaPart { Value, DRho, DEta };

inline double lambda_trace(double rho, const ModeParams& mp, LambdaPart part)
{
    const auto l = ModeField(mp).lambda(rho);
    return l[static_cast<int>(part)];
}

} // namespace trapmodes
