#pragma once

// Smooth reconstruction of a traced meridional curve and solid-of-revolution
// moments of the region it cuts off below the free surface.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "trapmodes/errors.hpp"
#include "trapmodes/potential.hpp"

namespace trapmodes {

// Chord-length parameterised piecewise Lagrange interpolant: degree 5 inside
// each interval, degree 6 (centred 7-point stencil) for vertex derivatives.
class CurveInterpolant {
public:
    explicit CurveInterpolant(std::vector<FieldPoint> pts) : p_(std::move(pts))
    {
        if (p_.size() < 7) throw GeometryError("curve needs at least 7 vertices");
        t_.resize(p_.size());
        t_[0] = 0.0;
        for (std::size_t i = 1; i < p_.size(); ++i) {
            const double d = std::hypot(p_[i].rho - p_[i - 1].rho, p_[i].eta - p_[i - 1].eta);
            if (!(d > 0.0)) throw GeometryError("repeated vertex");
            t_[i] = t_[i - 1] + d;
        }
    }

    std::size_t size() const { return p_.size(); }
    std::size_t intervals() const { return p_.size() - 1; }
    const std::vector<FieldPoint>& points() const { return p_; }
    double t(std::size_t i) const { return t_[i]; }

    // position and derivative d/dt at parameter t within interval i
    std::array<double, 4> eval(std::size_t i, double t) const
    {
        const std::size_t s = window(i, 6, 2);
        return lagrange(s, 6, t);
    }

    // derivative at vertex i from the 7-point stencil
    std::array<double, 2> vertex_derivative(std::size_t i) const
    {
        const std::size_t s = window(i, 7, 3);
        const auto v = lagrange(s, 7, t_[i]);
        return {v[2], v[3]};
    }

    // unit normal pointing into the body (left of the left-to-right traversal)
    std::array<double, 2> vertex_normal(std::size_t i) const
    {
        const auto d = vertex_derivative(i);
        const double n = std::hypot(d[0], d[1]);
        return {-d[1] / n, d[0] / n};
    }

private:
    std::size_t window(std::size_t i, std::size_t len, std::size_t back) const
    {
        const std::size_t n = p_.size();
        std::size_t s = i >= back ? i - back : 0;
        if (s + len > n) s = n - len;
        return s;
    }

    std::array<double, 4> lagrange(std::size_t s, std::size_t len, double t) const
    {
        double x = 0, y = 0, dx = 0, dy = 0;
        for (std::size_t j = s; j < s + len; ++j) {
            double l = 1.0, dl = 0.0;
            for (std::size_t m = s; m < s + len; ++m) {
                if (m == j) continue;
                const double inv = 1.0 / (t_[j] - t_[m]);
                dl = dl * (t - t_[m]) * inv + l * inv;
                l *= (t - t_[m]) * inv;
            }
            x += l * p_[j].rho;
            y += l * p_[j].eta;
            dx += dl * p_[j].rho;
            dy += dl * p_[j].eta;
        }
        return {x, y, dx, dy};
    }

    std::vector<FieldPoint> p_;
    std::vector<double> t_;
};

// Gauss-Legendre nodes/weights on [-1, 1] for n in {4, 8, 16}.
inline void gauss_rule(int n, std::vector<double>& x, std::vector<double>& w)
{
    auto fill = [&](const auto& ab, const auto& wt) {
        x.clear();
        w.clear();
        const bool odd = n % 2 == 1;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            if (ab[i] == 0.0 && odd) {
                x.push_back(0.0);
                w.push_back(wt[i]);
                continue;
            }
            x.push_back(-ab[i]);
            w.push_back(wt[i]);
            x.push_back(ab[i]);
            w.push_back(wt[i]);
        }
    };
    using boost::math::quadrature::gauss;
    switch (n) {
    case 4: fill(gauss<double, 4>::abscissa(), gauss<double, 4>::weights()); break;
    case 8: fill(gauss<double, 8>::abscissa(), gauss<double, 8>::weights()); break;
    case 16: fill(gauss<double, 16>::abscissa(), gauss<double, 16>::weights()); break;
    default: throw DomainError("unsupported Gauss rule");
    }
}

// Moments of an axisymmetric region: volume, int eta dV, int eta^2 dV, int rho^2 dV.
struct SlabMoments {
    double volume = 0.0;
    double first = 0.0;
    double second = 0.0;
    double radial = 0.0;

    SlabMoments operator-(const SlabMoments& o) const
    {
        return {volume - o.volume, first - o.first, second - o.second, radial - o.radial};
    }
    SlabMoments operator+(const SlabMoments& o) const
    {
        return {volume + o.volume, first + o.first, second + o.second, radial + o.radial};
    }
    SlabMoments scaled(double s) const { return {s * volume, s * first, s * second, s * radial}; }
};

// Moments of the region between a left-to-right wetted curve and the free
// surface, restricted to eta < cut; Green's theorem turns each volume
// integral into a line integral (the horizontal pieces contribute nothing).
inline SlabMoments curve_moments_below(const CurveInterpolant& c, double cut, int order = 8)
{
    std::vector<double> gx, gw;
    gauss_rule(order, gx, gw);
    SlabMoments m;
    const double tp = 2.0 * std::numbers::pi;
    auto integrate = [&](std::size_t i, double a, double b) {
        const double h = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t q = 0; q < gx.size(); ++q) {
            const auto v = c.eval(i, mid + h * gx[q]);
            const double r2 = v[0] * v[0], e = v[1], de = v[3] * gw[q] * h;
            m.volume += tp * 0.5 * r2 * de;
            m.first += tp * 0.5 * r2 * e * de;
            m.second += tp * 0.5 * r2 * e * e * de;
            m.radial += tp * 0.25 * r2 * r2 * de;
        }
    };
    for (std::size_t i = 0; i < c.intervals(); ++i) {
        const double a = c.t(i), b = c.t(i + 1);
        // split the interval where eta(t) crosses the cut
        constexpr int probes = 8;
        std::vector<double> knots{a};
        double prev_t = a, prev_f = c.eval(i, a)[1] - cut;
        for (int k = 1; k <= probes; ++k) {
            const double tk = a + (b - a) * k / probes;
            const double fk = c.eval(i, tk)[1] - cut;
            if ((prev_f < 0.0) != (fk < 0.0)) {
                double lo = prev_t, hi = tk, flo = prev_f;
                for (int it = 0; it < 80; ++it) {
                    const double md = 0.5 * (lo + hi);
                    const double fm = c.eval(i, md)[1] - cut;
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = md;
                        flo = fm;
                    } else {
                        hi = md;
                    }
                }
                knots.push_back(0.5 * (lo + hi));
            }
            prev_t = tk;
            prev_f = fk;
        }
        knots.push_back(b);
        for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
            const double md = 0.5 * (knots[k] + knots[k + 1]);
            if (c.eval(i, md)[1] < cut) integrate(i, knots[k], knots[k + 1]);
        }
    }
    return m;
}

// Annular box r_in < rho < r_out, 0 < eta < h.
inline SlabMoments box_moments(double r_in, double r_out, double h)
{
    const double pi = std::numbers::pi;
    const double area = pi * (r_out * r_out - r_in * r_in);
    return {area * h, area * h * h / 2.0, area * h * h * h / 3.0,
            0.5 * pi * (std::pow(r_out, 4) - std::pow(r_in, 4)) * h};
}

// True if segments p1p2 and q1q2 properly intersect.
inline bool segments_cross(FieldPoint p1, FieldPoint p2, FieldPoint q1, FieldPoint q2)
{
    auto orient = [](FieldPoint a, FieldPoint b, FieldPoint c) {
        return (b.rho - a.rho) * (c.eta - a.eta) - (b.eta - a.eta) * (c.rho - a.rho);
    };
    const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

inline bool self_intersects(const std::vector<FieldPoint>& p)
{
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        for (std::size_t j = i + 2; j + 1 < p.size(); ++j)
            if (segments_cross(p[i], p[i + 1], p[j], p[j + 1])) return true;
    return false;
}

inline bool polylines_cross(const std::vector<FieldPoint>& a, const std::vector<FieldPoint>& b)
{
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        for (std::size_t j = 0; j + 1 < b.size(); ++j)
            if (segments_cross(a[i], a[i + 1], b[j], b[j + 1])) return true;
    return false;
}

inline double polyline_distance(const std::vector<FieldPoint>& a, const std::vector<FieldPoint>& b)
{
    auto seg_dist = [](FieldPoint p, FieldPoint s0, FieldPoint s1) {
        const double dx = s1.rho - s0.rho, dy = s1.eta - s0.eta;
        const double l2 = dx * dx + dy * dy;
        double u = l2 > 0 ? ((p.rho - s0.rho) * dx + (p.eta - s0.eta) * dy) / l2 : 0.0;
        u = std::clamp(u, 0.0, 1.0);
        return std::hypot(p.rho - s0.rho - u * dx, p.eta - s0.eta - u * dy);
    };
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : a)
        for (std::size_t j = 0; j + 1 < b.size(); ++j) best = std::min(best, seg_dist(p, b[j], b[j + 1]));
    for (const auto& p : b)
        for (std::size_t j = 0; j + 1 < a.size(); ++j) best = std::min(best, seg_dist(p, a[j], a[j + 1]));
    return best;
}

} // namespace trapmodes
