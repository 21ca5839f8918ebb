#pragma once

// Numerical certification of a synthesized structure: kinematic condition on
// every wetted surface, the six motion equations per body, the energy
// equipartition identity on truncated cylinders, far-field decay and the
// Green identity behind the heave equation.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "trapmodes/errors.hpp"
#include "trapmodes/geometry.hpp"
#include "trapmodes/structure.hpp"

namespace trapmodes {

struct TruncationDomain {
    double b = 0.0;  // cylinder radius
    double d = 0.0;  // depth
};

struct VerifyTolerances {
    double bc = 1e-6;
    double motion = 1e-5;
    double symmetry = 1e-10;
    double equipartition = 0.02;
    double far_field = -1.4;
};

struct EquipartitionEntry {
    TruncationDomain domain;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

struct VerificationReport {
    std::vector<double> bc_residuals;
    std::vector<std::array<double, 6>> motion_eq_residuals;
    std::vector<double> motion_refinement;  // largest change of a motion residual when the surface rule is doubled
    std::vector<EquipartitionEntry> equipartition;
    double guard_distance = 0.0;            // distance from the ring to the nearest wetted curve
    double far_field_exponent = 0.0;
    VerifyTolerances tol;
    bool passed = false;
};

namespace detail {

// Quantities of one wetted surface integrated over the revolved curve.
struct SurfaceSums {
    double area = 0.0;
    double max_abs_phi = 0.0;
    double heave = 0.0;      // int phi n_eta dS
    double radial = 0.0;     // int phi n_rho rho ds (meridional, azimuthal factor left out)
    double moment = 0.0;     // int phi [(eta - y0) n_rho - rho n_eta] rho ds
    double green = 0.0;      // int (phi n_eta - (eta + 1) dphi/dn) dS
    double green_abs = 0.0;  // same with absolute values of both terms
};

inline SurfaceSums surface_sums(const ModeField& f, const CurveInterpolant& c, double y0, int order)
{
    std::vector<double> gx, gw;
    gauss_rule(order, gx, gw);
    const double tp = 2.0 * std::numbers::pi;
    SurfaceSums s;
    for (std::size_t i = 0; i < c.intervals(); ++i) {
        const double a = c.t(i), b = c.t(i + 1);
        const double h = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t q = 0; q < gx.size(); ++q) {
            const auto v = c.eval(i, mid + h * gx[q]);
            const double rho = v[0], eta = std::min(v[1], 0.0), w = gw[q] * h;
            const auto fl = f.fields(rho, eta);
            const double speed = std::hypot(v[2], v[3]);
            // n ds = (-deta, drho) dt, pointing into the body
            const double nr = -v[3], ne = v[2];
            s.area += tp * rho * speed * w;
            s.max_abs_phi = std::max(s.max_abs_phi, std::abs(fl[0]));
            s.heave += tp * fl[0] * ne * rho * w;
            s.radial += fl[0] * nr * rho * w;
            s.moment += fl[0] * ((eta - y0) * nr - rho * ne) * rho * w;
            const double dn = fl[1] * nr + fl[2] * ne;
            s.green += tp * (fl[0] * ne - (eta + 1.0) * dn) * rho * w;
            s.green_abs += tp * (std::abs(fl[0] * ne) + std::abs((eta + 1.0) * dn)) * rho * w;
        }
    }
    return s;
}

inline std::array<double, 6> motion_residuals(const Structure& s, std::size_t k, int order)
{
    const auto& b = s.bodies[k];
    const ModeField f(s.mode);
    const auto c = body_interpolant(b);
    const auto bm = body_moments(b);
    const double mass = s.matrices.size() > k ? s.matrices[k].E0(0, 0) : ballast_moments(b, c).volume;
    const double y0 = b.ballast.center_of_mass_eta;
    const auto sums = surface_sums(f, c, y0, order);

    // azimuthal trapezoid sums of the odd factors
    constexpr int nt = 64;
    double cs = 0.0, sn = 0.0, yaw = 0.0;
    for (int j = 0; j < nt; ++j) {
        const double th = 2.0 * std::numbers::pi * j / nt;
        const double ct = std::cos(th), st = std::sin(th);
        cs += ct;
        sn += st;
        yaw += st * ct - ct * st;  // x2 n_x1 - x1 n_x2 on a surface of revolution
    }
    const double dth = 2.0 * std::numbers::pi / nt;
    const double H = b.H;
    const double heave = H * mass + sums.heave - H * bm.I_D;
    const double scale = sums.area * sums.max_abs_phi + H * (bm.I_D + mass);
    return {heave / scale,
            std::abs(cs * dth * sums.radial) / scale,
            std::abs(sn * dth * sums.radial) / scale,
            std::abs(yaw * dth * sums.radial) / scale,
            std::abs(cs * dth * sums.moment) / scale,
            std::abs(sn * dth * sums.moment) / scale};
}

} // namespace detail

inline double check_kinematic(const Structure& s, std::size_t k)
{
    const auto& b = s.bodies.at(k);
    const ModeField f(s.mode);
    const auto c = body_interpolant(b);
    double worst = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& p = c.points()[i];
        const auto fl = f.fields(p.rho, std::min(p.eta, 0.0));
        const auto n = c.vertex_normal(i);
        const double r = std::abs(n[0] * fl[1] + n[1] * (fl[2] - b.H)) / std::max(std::hypot(fl[1], fl[2]), 1e-12);
        worst = std::max(worst, r);
    }
    return worst;
}

// Relative residuals [heave, surge, sway, yaw, roll, pitch] of the motion
// equations; the heave entry is signed, the rest are magnitudes.
inline std::array<double, 6> check_motion_equations(const Structure& s, std::size_t k)
{
    return detail::motion_residuals(s, k, 8);
}

namespace detail {

// Distances along the ray origin + r u at which it crosses the wetted curve.
// Besides sign changes between vertices, a nearly grazing interval is searched
// for a pair of crossings hidden between two vertices on the same side.
inline void ray_crossings(const CurveInterpolant& c, FieldPoint o, double ux, double uy, std::vector<double>& out)
{
    const auto& p = c.points();
    auto side = [&](double x, double y) { return (x - o.rho) * uy - (y - o.eta) * ux; };
    auto push = [&](std::size_t i, double t) {
        const auto v = c.eval(i, t);
        const double r = (v[0] - o.rho) * ux + (v[1] - o.eta) * uy;
        if (r > 0.0) out.push_back(r);
    };
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const double g0 = side(p[i].rho, p[i].eta), g1 = side(p[i + 1].rho, p[i + 1].eta);
        const double along0 = (p[i].rho - o.rho) * ux + (p[i].eta - o.eta) * uy;
        const double along1 = (p[i + 1].rho - o.rho) * ux + (p[i + 1].eta - o.eta) * uy;
        if (along0 <= 0.0 && along1 <= 0.0) continue;
        auto g = [&](double t) {
            const auto v = c.eval(i, t);
            return side(v[0], v[1]);
        };
        const double t0 = c.t(i), t1 = c.t(i + 1);
        if ((g0 < 0.0) != (g1 < 0.0)) {
            push(i, bracket_root(g, t0, t1, g0, g1));
            continue;
        }
        if (std::min(std::abs(g0), std::abs(g1)) > 0.1 * (t1 - t0)) continue;
        // golden-section search for the point of the interval closest to the far side
        const double sgn = g0 < 0.0 ? -1.0 : 1.0;
        auto h = [&](double t) { return sgn * g(t); };
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = t0, hi = t1;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double h1 = h(x1), h2 = h(x2);
        for (int it = 0; it < 60 && hi - lo > 1e-14 * (t1 - t0); ++it) {
            if (h1 < h2) {
                hi = x2;
                x2 = x1;
                h2 = h1;
                x1 = hi - gr * (hi - lo);
                h1 = h(x1);
            } else {
                lo = x1;
                x1 = x2;
                h1 = h2;
                x2 = lo + gr * (hi - lo);
                h2 = h(x2);
            }
        }
        const double tm = 0.5 * (lo + hi), gm = g(tm);
        if ((gm < 0.0) == (g0 < 0.0)) continue;
        push(i, bracket_root(g, t0, tm, g0, gm));
        push(i, bracket_root(g, tm, t1, gm, g1));
    }
}

// Extreme polar angles (in (pi, 2 pi)) of the submerged curve seen from o,
// located on the interpolant: a panel edge at a vertex angle would leave the
// grazing sliver beyond it invisible to the angular quadrature.
inline std::pair<double, double> angular_extent(const CurveInterpolant& c, FieldPoint o)
{
    const double tp = 2.0 * std::numbers::pi;
    auto angle = [&](double x, double y) { return std::atan2(y - o.eta, x - o.rho) + tp; };
    const auto& p = c.points();
    std::size_t imin = 0, imax = 0;
    double lo = tp, hi = 0.5 * tp;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].eta >= 0.0) continue;
        const double th = angle(p[i].rho, p[i].eta);
        if (th < lo) lo = th, imin = i;
        if (th > hi) hi = th, imax = i;
    }
    if (!(lo < hi)) return {lo, hi};
    auto refine = [&](std::size_t iv, double sgn, double& best) {
        for (std::size_t i = iv > 0 ? iv - 1 : 0; i <= iv && i + 1 < p.size(); ++i) {
            auto f = [&](double t) {
                const auto v = c.eval(i, t);
                return sgn * angle(v[0], std::min(v[1], 0.0));
            };
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double a = c.t(i), b = c.t(i + 1);
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a), f1 = f(x1), f2 = f(x2);
            for (int it = 0; it < 80; ++it) {
                if (f1 > f2) {
                    b = x2, x2 = x1, f2 = f1, x1 = b - gr * (b - a), f1 = f(x1);
                } else {
                    a = x1, x1 = x2, f1 = f2, x2 = a + gr * (b - a), f2 = f(x2);
                }
            }
            best = sgn > 0 ? std::max(best, sgn * std::max(f1, f2)) : std::min(best, sgn * std::max(f1, f2));
        }
    };
    refine(imax, 1.0, hi);
    refine(imin, -1.0, lo);
    return {lo, hi};
}

inline double ray_exit(double a, double ux, double uy, const TruncationDomain& dom)
{
    double r = dom.d / -uy;
    if (ux > 0.0) r = std::min(r, (dom.b - a) / ux);
    if (ux < 0.0) r = std::min(r, a / -ux);
    return r;
}

} // namespace detail

inline std::vector<TruncationDomain> default_domains(const Structure& s)
{
    double outer = 0.0;
    for (const auto& b : s.bodies) outer = std::max(outer, b.outer_radius);
    const double b0 = std::max(10.0, 10.0 * std::ceil((outer + 5.0) / 10.0));
    return {{b0, b0 / 2}, {2 * b0, b0}, {4 * b0, 2 * b0}};
}

// Integral of g(rho, eta) over the water part of nested truncated cylinders,
// in meridional coordinates (the caller includes the 2 pi rho factor). The
// region is swept by rays from the ring point, which always lies inside the
// ring body, so no guard region is needed.
template <class G>
std::vector<double> water_volume_integral(const Structure& s, const std::vector<TruncationDomain>& domains, G&& g,
                                          double rel_tol = 1e-8)
{
    double outer = 0.0, deepest = 0.0;
    for (const auto& b : s.bodies) {
        outer = std::max(outer, b.outer_radius);
        deepest = std::min(deepest, lowest_point(b));
    }
    for (std::size_t j = 0; j < domains.size(); ++j) {
        if (!(domains[j].b > outer) || !(domains[j].d > -deepest))
            throw DomainError("truncation domain does not contain the structure");
        if (j > 0 && (domains[j].b < domains[j - 1].b || domains[j].d < domains[j - 1].d))
            throw DomainError("truncation domains must be nested");
    }
    constexpr std::size_t nd_max = 8;
    const std::size_t nd = domains.size();
    if (nd == 0 || nd > nd_max) throw DomainError("between one and eight truncation domains are supported");
    const std::size_t ring = ring_body_index(s);
    const double a = s.mode.rho_r;
    const FieldPoint o{a, 0.0};
    std::vector<CurveInterpolant> curves;
    for (const auto& b : s.bodies) curves.push_back(body_interpolant(b));

    std::vector<double> gx, gw;
    gauss_rule(16, gx, gw);

    auto ray = [&](double th) {
        Vec<nd_max> out{};
        const double ux = std::cos(th), uy = std::sin(th);
        std::vector<double> cr;
        for (const auto& c : curves) detail::ray_crossings(c, o, ux, uy, cr);
        std::sort(cr.begin(), cr.end());
        std::vector<double> limits(nd);
        for (std::size_t j = 0; j < nd; ++j) limits[j] = detail::ray_exit(a, ux, uy, domains[j]);
        // water intervals: the ray starts inside the ring body
        std::vector<std::pair<double, double>> water;
        bool inside = true;
        double start = 0.0;
        for (double r : cr) {
            if (inside) start = r;
            else water.push_back({start, r});
            inside = !inside;
        }
        if (!inside) water.push_back({start, limits.back()});
        for (auto [lo, hi] : water) {
            hi = std::min(hi, limits.back());
            if (!(hi > lo)) continue;
            std::vector<double> cuts{lo};
            for (double r = lo; r < hi;) {
                double nx = std::max(1.5 * r, r + 0.05);
                for (double l : limits)
                    if (l > r && l < nx) nx = l;
                r = std::min(nx, hi);
                cuts.push_back(r);
            }
            for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
                const double h = 0.5 * (cuts[p + 1] - cuts[p]), m = 0.5 * (cuts[p + 1] + cuts[p]);
                double sum = 0.0;
                for (std::size_t q = 0; q < gx.size(); ++q) {
                    const double r = m + h * gx[q];
                    sum += gw[q] * h * g(std::max(a + r * ux, 0.0), r * uy) * r;
                }
                for (std::size_t j = 0; j < nd; ++j)
                    if (cuts[p + 1] <= limits[j] * (1 + 1e-14)) out[j] += sum;
            }
        }
        return out;
    };

    // angular breakpoints: domain corners and the angular extent of every body
    const double pi = std::numbers::pi;
    std::vector<double> breaks{pi, 2 * pi};
    for (const auto& dm : domains) {
        breaks.push_back(std::atan2(-dm.d, dm.b - a) + 2 * pi);
        breaks.push_back(std::atan2(-dm.d, -a) + 2 * pi);
    }
    for (std::size_t k = 0; k < s.bodies.size(); ++k) {
        if (k == ring) continue;
        const auto [lo, hi] = detail::angular_extent(curves[k], o);
        if (lo < hi) {
            breaks.push_back(lo);
            breaks.push_back(hi);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> total(nd, 0.0);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] - breaks[i] > 1e-12)) continue;
        const auto r = integrate_adaptive<nd_max>(ray, breaks[i], breaks[i + 1], rel_tol, 1e-300, 2000);
        if (!r.converged) throw QuadratureError("volume quadrature did not converge");
        for (std::size_t j = 0; j < nd; ++j) total[j] += r.value[j];
    }
    return total;
}

// Equipartition identity on nested truncated cylinders (dimensionless, nu = 1):
// int |grad phi|^2 + sum H^2 m = int_F phi^2 + sum H^2 I_D.
inline std::vector<EquipartitionEntry> check_equipartition(const Structure& s,
                                                           std::vector<TruncationDomain> domains = {},
                                                           double rel_tol = 1e-8)
{
    if (domains.empty()) domains = default_domains(s);
    const ModeField f(s.mode);
    const double tp = 2.0 * std::numbers::pi;
    const auto kinetic = water_volume_integral(
        s, domains,
        [&](double rho, double eta) {
            const auto fl = f.fields(rho, eta);
            return tp * rho * (fl[1] * fl[1] + fl[2] * fl[2]);
        },
        rel_tol);
    const std::size_t nd = domains.size();

    // free surface outside the waterplanes
    std::vector<EquipartitionEntry> out;
    double body_kin = 0.0, body_pot = 0.0;
    for (std::size_t k = 0; k < s.bodies.size(); ++k) {
        const double H = s.bodies[k].H;
        const double mass = s.matrices.size() > k ? s.matrices[k].E0(0, 0)
                                                  : ballast_moments(s.bodies[k], body_interpolant(s.bodies[k])).volume;
        body_kin += H * H * mass;
        body_pot += H * H * body_moments(s.bodies[k]).I_D;
    }
    for (std::size_t j = 0; j < nd; ++j) {
        double pot = 0.0, lo = 0.0;
        auto fs = [&](double r) { return Vec<1>{tp * r * std::pow(f.fields(r, 0.0)[0], 2)}; };
        for (const auto& b : s.bodies) {
            if (b.inner_radius > lo) pot += integrate_adaptive<1>(fs, lo, b.inner_radius, 1e-12).value[0];
            lo = b.outer_radius;
        }
        pot += integrate_adaptive<1>(fs, lo, domains[j].b, 1e-12).value[0];
        EquipartitionEntry e;
        e.domain = domains[j];
        e.lhs = kinetic[j] + body_kin;
        e.rhs = pot + body_pot;
        e.gap = std::abs(e.lhs - e.rhs) / std::max(std::abs(e.lhs), std::abs(e.rhs));
        out.push_back(e);
    }
    return out;
}

// Least-squares log-log slope of the surface envelope sqrt(phi^2 + phi_rho^2)
// over [3a, 12a]; the envelope removes the zeros of an outgoing wave term.
inline double check_far_field(const ModeField& f, int samples = 60)
{
    const double a = f.ring_radius();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < samples; ++i) {
        const double r = 3.0 * a * std::pow(4.0, double(i) / (samples - 1));
        const auto v = f.fields(r, 0.0);
        const double x = std::log(r), y = std::log(std::hypot(v[0], v[1]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = samples;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double check_far_field(const ModeParams& mp) { return check_far_field(ModeField(mp)); }

struct GreenIdentityReport {
    double direct = 0.0;       // int_S (phi dn Y - Y dn phi) over the ring body
    double scale = 0.0;        // same with absolute values
    std::vector<double> depths;
    std::vector<double> lateral;
    std::vector<double> bottom;
    std::vector<double> closure;  // |direct + lateral + bottom| / scale per depth
    double extrapolated_lateral = 0.0;
    double limit_gap = 0.0;       // |extrapolated lateral + direct| / scale
};

// Second Green identity for phi and Y = eta + 1 on the water part of C_{b,d}
// outside the ring body; the free surface contributes nothing.
inline GreenIdentityReport check_green_identity(const Structure& s, double b,
                                                std::vector<double> depths = {10, 20, 40, 80, 160})
{
    const std::size_t ring = ring_body_index(s);
    double outer = 0.0;
    for (const auto& body : s.bodies) outer = std::max(outer, body.outer_radius);
    if (!(b > outer)) throw DomainError("cylinder radius must exceed every body radius");
    if (depths.size() < 3) throw DomainError("at least three depths are needed");
    const ModeField f(s.mode);
    const double a = s.mode.rho_r, tp = 2.0 * std::numbers::pi;
    const auto sums = detail::surface_sums(f, body_interpolant(s.bodies[ring]), 0.0, 8);
    GreenIdentityReport g;
    g.direct = sums.green;
    g.scale = sums.green_abs;
    for (double d : depths) {
        if (!(d > -lowest_point(s.bodies[ring]))) throw DomainError("depth does not contain the ring body");
        auto lat = integrate_adaptive<1>([&](double e) { return Vec<1>{(e + 1.0) * f.fields(b, e)[1]}; }, -d, 0.0,
                                         1e-11, 1e-300, 2000);
        auto bot_f = [&](double r) {
            const auto v = f.fields(r, -d);
            return Vec<1>{tp * r * (-v[0] + (1.0 - d) * v[2])};
        };
        const double bot = integrate_adaptive<1>(bot_f, 0.0, a, 1e-11).value[0] +
                           integrate_adaptive<1>(bot_f, a, b, 1e-11).value[0];
        if (!lat.converged) throw QuadratureError("lateral integral did not converge");
        const double L = -tp * b * lat.value[0];
        g.depths.push_back(d);
        g.lateral.push_back(L);
        g.bottom.push_back(bot);
        g.closure.push_back(std::abs(g.direct + L + bot) / (g.scale + std::abs(L) + std::abs(bot)));
    }
    const std::size_t n = g.lateral.size();
    const double l0 = g.lateral[n - 3], l1 = g.lateral[n - 2], l2 = g.lateral[n - 1];
    const double den = (l2 - l1) - (l1 - l0);
    g.extrapolated_lateral = den != 0.0 ? l2 - (l2 - l1) * (l2 - l1) / den : l2;
    g.limit_gap = std::abs(g.extrapolated_lateral + g.direct) / g.scale;
    return g;
}

inline double guard_distance(const Structure& s)
{
    const FieldPoint ring{s.mode.rho_r, 0.0};
    double d = std::numeric_limits<double>::infinity();
    for (const auto& b : s.bodies) d = std::min(d, polyline_distance({ring}, b.wetted.points));
    return d;
}

inline VerificationReport verify_structure(const Structure& s, VerifyTolerances tol = {},
                                           std::vector<TruncationDomain> domains = {})
{
    VerificationReport r;
    r.tol = tol;
    bool ok = true;
    for (std::size_t k = 0; k < s.bodies.size(); ++k) {
        r.bc_residuals.push_back(check_kinematic(s, k));
        ok = ok && r.bc_residuals.back() <= tol.bc;
        const auto fine = detail::motion_residuals(s, k, 8);
        const auto coarse = detail::motion_residuals(s, k, 4);
        r.motion_eq_residuals.push_back(fine);
        double change = 0.0;
        for (int i = 0; i < 6; ++i) change = std::max(change, std::abs(fine[i] - coarse[i]));
        r.motion_refinement.push_back(change);
        ok = ok && std::abs(fine[0]) <= tol.motion && change < 0.1 * tol.motion;
        for (int i = 1; i < 6; ++i) ok = ok && fine[i] <= tol.symmetry;
    }
    r.guard_distance = guard_distance(s);
    r.equipartition = check_equipartition(s, domains);
    for (std::size_t j = 0; j < r.equipartition.size(); ++j)
        if (j > 0 && r.equipartition[j].gap > r.equipartition[j - 1].gap) ok = false;
    ok = ok && !r.equipartition.empty() && r.equipartition.back().gap <= tol.equipartition;
    r.far_field_exponent = check_far_field(s.mode);
    ok = ok && r.far_field_exponent <= tol.far_field;
    r.passed = ok;
    return r;
}

} // namespace trapmodes
