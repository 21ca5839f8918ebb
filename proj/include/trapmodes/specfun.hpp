#pragma once

// Cylinder functions of orders 0, 1, 2 for real positive arguments, and the
// positive zeros of J0 and J1.
//
// Strategy per kind:
//   J, Y : ascending series for x < 2, Steed's continued fractions on [2, 25),
//          Hankel's asymptotic expansion from 25 on.
//   I    : ascending series up to 25, asymptotic expansion beyond.
//   K    : logarithmic series up to 2, Steed's CF2 on (2, 25], asymptotic beyond.
// The exponentially scaled variants are what the kernel quadrature uses.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "trapmodes/errors.hpp"

namespace trapmodes {

enum class BesselKind { J, Y, I, K };

namespace detail {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;
inline constexpr double eps = std::numeric_limits<double>::epsilon();
inline constexpr double jy_cf_lo = 2.0;
inline constexpr double jy_asym = 25.0;
inline constexpr double ik_asym = 25.0;
inline constexpr double k_series = 2.0;

// Coefficient a_k(n) = prod_{j=1..k} (4n^2 - (2j-1)^2) / (k! 8^k), built
// incrementally by the callers.
inline double asym_ratio(int n, int k)
{
    const double mu = 4.0 * n * n;
    const double odd = 2.0 * k - 1.0;
    return (mu - odd * odd) / (8.0 * k);
}

// sum_{k>=0} (x/2)^{2k+n} / (k! (k+n)!)
inline double i_series(int n, double x)
{
    const double q = 0.25 * x * x;
    double term = 1.0;
    for (int j = 1; j <= n; ++j) term *= 0.5 * x / j;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (k * double(k + n));
        sum += term;
        if (term < eps * sum * 0.25) break;
    }
    return sum;
}

// e^{-x} I_n(x) ~ (2 pi x)^{-1/2} sum (-1)^k a_k(n) / x^k
inline double i_asym_scaled(int n, double x)
{
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double next = -term * asym_ratio(n, k) / x;
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < eps * std::abs(sum) * 0.25) break;
    }
    return sum / std::sqrt(2.0 * pi * x);
}

// e^{x} K_n(x) ~ (pi / 2x)^{1/2} sum a_k(n) / x^k
inline double k_asym_scaled(int n, double x)
{
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double next = term * asym_ratio(n, k) / x;
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < eps * std::abs(sum) * 0.25) break;
    }
    return sum * std::sqrt(pi / (2.0 * x));
}

inline double i_scaled(int n, double x)
{
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x <= ik_asym) return i_series(n, x) * std::exp(-x);
    return i_asym_scaled(n, x);
}

// K0, K1 for 0 < x <= 2 from the logarithmic series.
inline std::array<double, 2> k01_series(double x)
{
    const double q = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    // K0 = -(ln(x/2) + gamma) I0 + sum_{k>=1} H_k q^k / (k!)^2
    double t0 = 1.0, i0 = 1.0, s0 = 0.0, h = 0.0;
    // K1 = 1/x + ln(x/2) I1 - (x/4) sum_{k>=0} (psi(k+1) + psi(k+2)) q^k / (k!(k+1)!)
    double t1 = 1.0, i1 = 1.0, s1 = 0.0;
    s1 += (-euler_gamma + (1.0 - euler_gamma));
    for (int k = 1; k < 200; ++k) {
        t0 *= q / (double(k) * k);
        t1 *= q / (double(k) * (k + 1));
        h += 1.0 / k;
        i0 += t0;
        i1 += t1;
        s0 += h * t0;
        const double psi_sum = (h - euler_gamma) + (h + 1.0 / (k + 1) - euler_gamma);
        s1 += psi_sum * t1;
        if (t0 < eps * 1e-3 && t1 < eps * 1e-3) break;
    }
    i1 *= 0.5 * x;
    const double k0 = -(lg + euler_gamma) * i0 + s0;
    const double k1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
    return {k0, k1};
}

// e^x K0, e^x K1 for 2 < x by Steed's CF2 (Temme's normalisation).
inline std::array<double, 2> k01_cf2_scaled(double x)
{
    const double xi = 1.0 / x;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 10000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
        if (i == 9999) throw ConvergenceError("K continued fraction did not converge");
    }
    h = a1 * h;
    const double k0 = std::sqrt(pi / (2.0 * x)) / s;
    const double k1 = k0 * (x + 0.5 - h) * xi;
    return {k0, k1};
}

inline std::array<double, 2> k01_scaled(double x)
{
    if (x <= k_series) {
        const auto k = k01_series(x);
        const double e = std::exp(x);
        return {k[0] * e, k[1] * e};
    }
    if (x <= ik_asym) return k01_cf2_scaled(x);
    return {k_asym_scaled(0, x), k_asym_scaled(1, x)};
}

inline double k_scaled(int n, double x)
{
    const auto k = k01_scaled(x);
    if (n == 0) return k[0];
    if (n == 1) return k[1];
    return k[0] + 2.0 / x * k[1];
}

struct JY01 {
    double j0, j1, y0, y1;
};

inline JY01 jy01_series(double x)
{
    const double q = -0.25 * x * x;
    const double lg = std::log(0.5 * x);
    double t0 = 1.0, j0 = 1.0, s0 = 0.0, h = 0.0;
    double t1 = 1.0, j1 = 1.0, s1 = (-euler_gamma) + (1.0 - euler_gamma);
    for (int k = 1; k < 200; ++k) {
        t0 *= q / (double(k) * k);
        t1 *= q / (double(k) * (k + 1));
        h += 1.0 / k;
        j0 += t0;
        j1 += t1;
        s0 += h * t0;
        s1 += ((h - euler_gamma) + (h + 1.0 / (k + 1) - euler_gamma)) * t1;
        if (std::abs(t0) < eps * 1e-3 && std::abs(t1) < eps * 1e-3) break;
    }
    j1 *= 0.5 * x;
    // Y0 = (2/pi)(ln(x/2) + gamma) J0 - (2/pi) sum H_k (-x^2/4)^k / (k!)^2
    const double y0 = 2.0 / pi * ((lg + euler_gamma) * j0 - s0);
    // Y1 = -2/(pi x) + (2/pi) ln(x/2) J1 - (x / 2pi) sum (psi(k+1)+psi(k+2)) (-x^2/4)^k / (k!(k+1)!)
    const double y1 = -2.0 / (pi * x) + 2.0 / pi * lg * j1 - x / (2.0 * pi) * s1;
    return {j0, j1, y0, y1};
}

// Steed's method (CF1 + CF2) at order 0; Y1 from the CF2 pair, J1 = -J0'.
inline JY01 jy01_steed(double x)
{
    constexpr double fpmin = 1e-300;
    const double xi = 1.0 / x, xi2 = 2.0 * xi;
    const double w = xi2 / pi;
    // CF1 for f = J0'/J0
    int isign = 1;
    double h = fpmin, b = 0.0, d = 0.0, c = h;
    for (int i = 0; i < 100000; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b - 1.0 / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = c * d;
        h = del * h;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) < eps) break;
        if (i == 99999) throw ConvergenceError("J continued fraction did not converge");
    }
    const double f = h;
    const double rjl = isign * fpmin;
    // CF2: p + iq = (J0' + iY0') / (J0 + iY0)
    double a = 0.25;
    double p = -0.5 * xi, q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fact = a * xi / (p * p + q * q);
    double cr = br + q * fact, ci = bi + p * fact;
    double den = br * br + bi * bi;
    double dr = br / den, di = -bi / den;
    double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for (int i = 2; i < 100000; ++i) {
        a += 2 * (i - 1);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if (std::abs(dr) + std::abs(di) < fpmin) dr = fpmin;
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if (std::abs(cr) + std::abs(ci) < fpmin) cr = fpmin;
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (std::abs(dlr - 1.0) + std::abs(dli) < eps) break;
        if (i == 99999) throw ConvergenceError("J/Y continued fraction did not converge");
    }
    const double gam = (p - f) / q;
    double j0 = std::sqrt(w / ((p - f) * gam + q));
    j0 = std::copysign(j0, rjl);
    const double j1 = -f * j0;
    const double y0 = j0 * gam;
    const double y0p = y0 * (p + q / gam);
    return {j0, j1, y0, -y0p};
}

inline JY01 jy01_asym(double x)
{
    // Hankel: J_n = sqrt(2/(pi x)) (P cos chi - Q sin chi), Y_n = sqrt(2/(pi x)) (P sin chi + Q cos chi)
    auto pq = [x](int n) {
        double P = 1.0, Q = 0.0, term = 1.0;
        for (int k = 1; k < 80; ++k) {
            const double next = term * asym_ratio(n, k) / x;
            if (std::abs(next) >= std::abs(term)) break;
            term = next;
            // a_k / x^k enters P with sign (-1)^{k/2} for even k, Q with (-1)^{(k-1)/2} for odd k
            const int r = k % 4;
            if (r == 0) P += term;
            else if (r == 1) Q += term;
            else if (r == 2) P -= term;
            else Q -= term;
            if (std::abs(term) < eps * 1e-2) break;
        }
        return std::array<double, 2>{P, Q};
    };
    const double s = std::sin(x), c = std::cos(x);
    const double r2 = std::numbers::sqrt2 / 2.0;
    const double amp = std::sqrt(2.0 / (pi * x));
    // chi0 = x - pi/4, chi1 = x - 3pi/4
    const double c0 = (c + s) * r2, s0 = (s - c) * r2;
    const double c1 = (s - c) * r2, s1 = -(s + c) * r2;
    const auto a0 = pq(0), a1 = pq(1);
    return {amp * (a0[0] * c0 - a0[1] * s0), amp * (a1[0] * c1 - a1[1] * s1),
            amp * (a0[0] * s0 + a0[1] * c0), amp * (a1[0] * s1 + a1[1] * c1)};
}

} // namespace detail

// J0, J1, Y0, Y1 in one call (x > 0).
inline detail::JY01 bessel_jy01(double x)
{
    if (!(x > 0.0)) throw DomainError("J/Y pair requires x > 0");
    if (x < detail::jy_cf_lo) return detail::jy01_series(x);
    if (x < detail::jy_asym) return detail::jy01_steed(x);
    return detail::jy01_asym(x);
}

// e^{-x} I_n(x), n in {0,1,2}, x >= 0.
inline double bessel_i_scaled(int n, double x)
{
    if (n < 0 || n > 2) throw DomainError("I order must be 0, 1 or 2");
    if (!(x >= 0.0)) throw DomainError("I requires x >= 0");
    return detail::i_scaled(n, x);
}

// e^{x} K_n(x), n in {0,1,2}, x > 0.
inline double bessel_k_scaled(int n, double x)
{
    if (n < 0 || n > 2) throw DomainError("K order must be 0, 1 or 2");
    if (!(x > 0.0)) throw DomainError("K requires x > 0");
    return detail::k_scaled(n, x);
}

inline double bessel(BesselKind kind, int order, double x)
{
    using detail::pi;
    switch (kind) {
    case BesselKind::J:
    case BesselKind::Y: {
        if (order < 0 || order > 1) throw DomainError("J/Y order must be 0 or 1");
        if (kind == BesselKind::J) {
            if (!(x >= 0.0)) throw DomainError("J requires x >= 0");
            if (x == 0.0) return order == 0 ? 1.0 : 0.0;
        } else if (!(x > 0.0)) {
            throw DomainError("Y requires x > 0");
        }
        const auto v = bessel_jy01(x);
        if (kind == BesselKind::J) return order == 0 ? v.j0 : v.j1;
        return order == 0 ? v.y0 : v.y1;
    }
    case BesselKind::I: {
        const double s = bessel_i_scaled(order, x);
        if (x > 700.0) {
            const double r = s * std::exp(x);
            if (std::isinf(r)) throw OverflowError("I(x) overflows at x = " + std::to_string(x));
            return r;
        }
        if (x <= detail::ik_asym) return detail::i_series(order, x);
        return s * std::exp(x);
    }
    case BesselKind::K: {
        if (order < 0 || order > 2) throw DomainError("K order must be 0, 1 or 2");
        if (!(x > 0.0)) throw DomainError("K requires x > 0");
        if (x <= detail::k_series) {
            const auto k = detail::k01_series(x);
            return order == 0 ? k[0] : order == 1 ? k[1] : k[0] + 2.0 / x * k[1];
        }
        return detail::k_scaled(order, x) * std::exp(-x);
    }
    }
    throw DomainError("unknown Bessel kind");
}

enum class ZeroFamily { J0, J1 };

struct BesselZeroIndex {
    ZeroFamily family;
    int m;
};

inline constexpr int max_zero_index = 100000;

// m-th positive zero of J0 or J1: McMahon start, Newton inside a sign-change bracket.
inline double bessel_zero(BesselZeroIndex idx)
{
    if (idx.m < 1) throw DomainError("zero index must be >= 1");
    if (idx.m > max_zero_index) throw ConvergenceError("zero index beyond supported range");
    const bool one = idx.family == ZeroFamily::J1;
    const double beta = (idx.m + (one ? 0.25 : -0.25)) * detail::pi;
    const double guess = one ? beta - 3.0 / (8.0 * beta) : beta + 1.0 / (8.0 * beta);
    auto f = [one](double x) {
        const auto v = bessel_jy01(x);
        // value and derivative: J0' = -J1, J1' = J0 - J1/x
        return one ? std::array<double, 2>{v.j1, v.j0 - v.j1 / x} : std::array<double, 2>{v.j0, -v.j1};
    };
    double lo = guess - 0.4, hi = guess + 0.4;
    double flo = f(lo)[0], fhi = f(hi)[0];
    if (flo * fhi > 0.0) throw ConvergenceError("zero bracket failed");
    double x = guess;
    for (int it = 0; it < 100; ++it) {
        const auto v = f(x);
        if (v[0] == 0.0) return x;
        if ((v[0] < 0.0) == (flo < 0.0)) lo = x;
        else hi = x;
        double next = x - v[0] / v[1];
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4.0 * detail::eps * x) return next;
        x = next;
    }
    throw ConvergenceError("zero iteration did not converge");
}

} // namespace trapmodes
