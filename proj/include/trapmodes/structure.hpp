#pragma once

// Synthesis of axisymmetric floating structures whose wetted surfaces are
// level lines of psi^(H_k), together with ballast planning and the
// equilibrium matrices E0, K0 of every body.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trapmodes/errors.hpp"
#include "trapmodes/geometry.hpp"
#include "trapmodes/levelset.hpp"

namespace trapmodes {

struct BallastLayer {
    double eta_lo;
    double eta_hi;
    double density;  // relative to water
};

struct DensityPlan {
    std::vector<BallastLayer> layers;
    double center_of_mass_eta = 0.0;
};

struct BodySection {
    LevelCurve wetted;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    double superstructure_height = 0.5;
    double H = 0.0;
    DensityPlan ballast;
};

struct BodyMoments {
    double I_D = 0.0;                   // waterplane area
    std::array<double, 2> I_D_i{};      // first moments of the waterplane
    double I_D_11 = 0.0, I_D_22 = 0.0, I_D_12 = 0.0;
    double I_B_y = 0.0;                 // int_B (y - y_G) dV
    double displaced_volume = 0.0;
    double buoyancy_center_eta = 0.0;
    std::array<double, 2> buoyancy_horizontal{};  // int_B x_i dV, zero by symmetry
};

struct EquilibriumMatrices {
    Eigen::Matrix<double, 6, 6> E0 = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 6> K0 = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix3d K_hat = Eigen::Matrix3d::Zero();
    Eigen::Vector3d K_hat_eigenvalues = Eigen::Vector3d::Zero();
    double E0_min_eigenvalue = 0.0;
};

struct Structure {
    ModeParams mode;
    std::vector<BodySection> bodies;
    std::vector<EquilibriumMatrices> matrices;
    double h_max = 0.0;  // largest tested heave amplitude keeping the extremum count (0 = not estimated)

    std::array<double, 6> chi(std::size_t k) const { return {0, 0, 0, bodies[k].H, 0, 0}; }
};

struct SynthesisOptions {
    double level_offset = 0.05;      // fraction of each extremum value
    double ring_offset = 0.25;       // distance from the ring where the ring body meets the surface
    double superstructure_height = 0.5;
    double ballast_fraction = 0.2;   // centre of mass at lowest + fraction * (y_B - lowest)
    int max_shrink = 8;
    double step = 0.02;
};

inline CurveInterpolant body_interpolant(const BodySection& b) { return CurveInterpolant(b.wetted.points); }

inline double lowest_point(const BodySection& b)
{
    double lo = 0.0;
    for (const auto& p : b.wetted.points) lo = std::min(lo, p.eta);
    return lo;
}

// Moments of B-hat (submerged part plus superstructure box) below eta = cut.
inline SlabMoments hull_moments_below(const BodySection& b, const CurveInterpolant& c, double cut)
{
    SlabMoments m = curve_moments_below(c, std::min(cut, 0.0));
    if (cut > 0.0)
        m = m + box_moments(b.inner_radius, b.outer_radius, std::min(cut, b.superstructure_height));
    return m;
}

inline SlabMoments ballast_moments(const BodySection& b, const CurveInterpolant& c)
{
    SlabMoments total;
    const double lowest = lowest_point(b);
    for (const auto& l : b.ballast.layers) {
        if (l.density == 0.0) continue;
        // a layer starting at the lowest vertex also takes whatever the interpolant dips below it
        const auto below = l.eta_lo <= lowest ? SlabMoments{} : hull_moments_below(b, c, l.eta_lo);
        total = total + (hull_moments_below(b, c, l.eta_hi) - below).scaled(l.density);
    }
    return total;
}

inline BodyMoments body_moments(const BodySection& b)
{
    const auto c = body_interpolant(b);
    if (self_intersects(b.wetted.points)) throw GeometryError("wetted curve intersects itself");
    BodyMoments m;
    const double pi = std::numbers::pi;
    const double ri = b.inner_radius, ro = b.outer_radius;
    m.I_D = pi * (ro * ro - ri * ri);
    m.I_D_i = {0.0, 0.0};
    m.I_D_11 = m.I_D_22 = 0.25 * pi * (std::pow(ro, 4) - std::pow(ri, 4));
    m.I_D_12 = 0.0;
    const auto sub = curve_moments_below(c, 1.0);
    m.displaced_volume = sub.volume;
    m.buoyancy_center_eta = sub.first / sub.volume;
    m.buoyancy_horizontal = {0.0, 0.0};  // axisymmetric body
    const auto bal = ballast_moments(b, c);
    const double yG = bal.volume > 0 ? bal.first / bal.volume : 0.0;
    m.I_B_y = sub.first - sub.volume * yG;
    return m;
}

inline DensityPlan plan_ballast(const BodySection& b, double target)
{
    const auto c = body_interpolant(b);
    const double lowest = lowest_point(b);
    const double top = b.superstructure_height;
    const double V = curve_moments_below(c, 1.0).volume;
    if (!(V > 0.0)) throw GeometryError("body displaces no water");
    if (!(target > lowest) || !(target < top)) throw Infeasible("centre of mass outside the body's vertical extent");
    const auto full = hull_moments_below(b, c, top);
    const double full_centroid = full.first / full.volume;
    DensityPlan plan;
    plan.center_of_mass_eta = target;
    if (target <= full_centroid) {
        // dense bottom slab [lowest, cut], void above
        auto f = [&](double cut) {
            const auto m = hull_moments_below(b, c, cut);
            return m.first / m.volume - target;
        };
        const double lo = lowest + 1e-12 * std::max(1.0, std::abs(lowest));
        const double flo = f(lo), fhi = f(top);
        const double cut = fhi > 0.0 ? detail::bracket_root(f, lo, top, flo, fhi) : top;
        const auto m = hull_moments_below(b, c, cut);
        plan.layers = {{lowest, cut, V / m.volume}, {cut, top, 0.0}};
    } else {
        // dense top slab [cut, top], void below
        auto f = [&](double cut) {
            const auto m = full - hull_moments_below(b, c, cut);
            return m.first / m.volume - target;
        };
        const double hi = top - 1e-9;
        const double flo = f(lowest), fhi = f(hi);
        if (!(fhi > 0.0)) throw Infeasible("centre of mass too close to the top");
        const double cut = flo >= 0.0 ? lowest : detail::bracket_root(f, lowest, hi, flo, fhi);
        const auto m = full - hull_moments_below(b, c, cut);
        plan.layers = {{lowest, cut, 0.0}, {cut, top, V / m.volume}};
    }
    return plan;
}

// Assembles E0, K0 without enforcing stability.
inline EquilibriumMatrices compute_matrices(const BodySection& b)
{
    const auto c = body_interpolant(b);
    const auto bm = body_moments(b);
    const auto bal = ballast_moments(b, c);
    if (!(bal.volume > 0.0)) throw Infeasible("body has no ballast");
    const double mass = bal.volume;
    const double yG = bal.first / mass;
    const double Iyy = bal.second - mass * yG * yG;
    const double I11 = 0.5 * bal.radial, I22 = 0.5 * bal.radial;
    EquilibriumMatrices out;
    out.E0.diagonal() << mass, mass, I11 + I22, mass, I22 + Iyy, I11 + Iyy;
    out.K_hat << bm.I_D, bm.I_D_i[1], -bm.I_D_i[0],
                 bm.I_D_i[1], bm.I_D_22 + bm.I_B_y, -bm.I_D_12,
                 -bm.I_D_i[0], -bm.I_D_12, bm.I_D_11 + bm.I_B_y;
    out.K0.block<3, 3>(3, 3) = out.K_hat;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> kes(out.K_hat);
    out.K_hat_eigenvalues = kes.eigenvalues();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> ees(out.E0);
    out.E0_min_eigenvalue = ees.eigenvalues().minCoeff();
    return out;
}

inline EquilibriumMatrices assemble_matrices(const BodySection& b)
{
    auto m = compute_matrices(b);
    if (!(m.K_hat_eigenvalues.minCoeff() > 0.0)) throw StabilityViolation("restoring block is not positive definite");
    if (!(m.E0_min_eigenvalue > 0.0)) throw StabilityViolation("mass matrix is not positive definite");
    return m;
}

namespace detail {

// Level-line body hanging below the trace between the two crossings of level v around rho_c.
inline LevelCurve body_from_extremum(const ModeParams& mp, double H, double v, double rho_c, double lo_bound,
                                     double hi_bound, double step)
{
    FreeSurfaceTrace tr(mp, H);
    auto g = [&](double r) { return tr.value(r) - v; };
    const double g0 = g(rho_c);
    auto find = [&](int dir) {
        const double bound = dir < 0 ? lo_bound : hi_bound;
        double prev = rho_c, gp = g0;
        const double ds = 0.02;
        for (double r = rho_c + dir * ds;; r += dir * ds) {
            if ((dir < 0 && r <= bound) || (dir > 0 && r >= bound)) r = bound;
            const double gr = g(r);
            if ((gr < 0.0) != (gp < 0.0)) return bracket_root(g, std::min(prev, r), std::max(prev, r),
                                                               dir < 0 ? gr : gp, dir < 0 ? gp : gr);
            if (r == bound) throw OverlapUnresolvable("level does not recross the surface inside its interval");
            prev = r;
            gp = gr;
        }
    };
    const double left = find(-1), right = find(+1);
    auto c = trace_level_curve(mp, H, v, {left, 0.0}, step);
    if (c.left_end.kind != EndKind::FreeSurface || c.right_end.kind != EndKind::FreeSurface ||
        std::abs(c.right_end.rho - right) > 1e-6 * std::max(1.0, right))
        throw OverlapUnresolvable("level line does not close onto the neighbouring crossing");
    return c;
}

inline LevelCurve ring_body(const ModeParams& mp, double H, double delta, double step)
{
    FreeSurfaceTrace tr(mp, H);
    const double a = mp.rho_r;
    const double v = std::max(tr.value(a - delta), tr.value(a + delta));
    auto g = [&](double r) { return tr.value(r) - v; };
    const double lo = a - delta, hi = a - 10 * trace_guard;
    const double left = g(lo) == 0.0 ? lo : bracket_root(g, lo, hi, g(lo), g(hi));
    auto c = trace_level_curve(mp, H, v, {left, 0.0}, step);
    if (!c.encloses_ring) throw OverlapUnresolvable("ring body does not enclose the ring");
    return c;
}

} // namespace detail

// Extrema of psi^(H) on (0, j_{1,N}) excluding the ring guard, ordered from the axis.
inline std::vector<TraceFeature> structure_extrema(const ModeParams& mp, double H, int N)
{
    const double hi = bessel_zero({ZeroFamily::J1, N});
    const double a = mp.rho_r;
    const double gap = 0.05;
    std::vector<TraceFeature> out;
    if (hi < a - gap) return find_trace_extrema(mp, H, {0.0, hi});
    out = find_trace_extrema(mp, H, {0.0, a - gap});
    if (hi > a + gap) {
        const auto more = find_trace_extrema(mp, H, {a + gap, hi});
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

// Largest H on [0, cap] for which psi^(H) keeps N - 1 extrema on (0, j_{1,N}).
inline double estimate_h_max(const ModeParams& mp, int N, double cap = 1.0)
{
    auto ok = [&](double H) { return int(structure_extrema(mp, H, N).size()) >= N - 1; };
    if (!ok(0.0)) return 0.0;
    if (ok(cap)) return cap;
    double lo = 0.0, hi = cap;
    for (int i = 0; i < 12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

inline void finish_body(BodySection& b, double ballast_fraction)
{
    const auto c = body_interpolant(b);
    const double yB = curve_moments_below(c, 1.0).first / curve_moments_below(c, 1.0).volume;
    const double lo = lowest_point(b);
    b.ballast = plan_ballast(b, lo + ballast_fraction * (yB - lo));
}

inline Structure synthesize(const ModeParams& mp, const std::vector<double>& heave, SynthesisOptions opt = {})
{
    const int N = int(heave.size());
    if (N < 2) throw DomainError("a structure needs at least two bodies");
    for (double h : heave)
        if (!(h >= 0.0)) throw DomainError("heave amplitudes must be non-negative");

    // extremum per body, counted from the axis
    std::vector<TraceFeature> picks;
    for (int k = 0; k < N - 1; ++k) {
        const auto ex = structure_extrema(mp, heave[k], N);
        if (int(ex.size()) < N - 1)
            throw InsufficientExtrema("psi^(H) has " + std::to_string(ex.size()) + " extrema on (0, j_{1," +
                                      std::to_string(N) + "}); " + std::to_string(N - 1) + " needed");
        picks.push_back(ex[k]);
    }
    double offset = opt.level_offset, delta = opt.ring_offset;
    std::string last_error = "no attempt";
    for (int attempt = 0; attempt <= opt.max_shrink; ++attempt, offset *= 0.5, delta *= 0.5) {
        try {
            Structure s;
            s.mode = mp;
            for (int k = 0; k < N - 1; ++k) {
                const double lo_b = k == 0 ? 1e-6 : picks[k - 1].rho;
                const double hi_b = k + 1 < N - 1 ? picks[k + 1].rho : mp.rho_r - 10 * trace_guard;
                const double hi = picks[k].rho < mp.rho_r ? std::min(hi_b, mp.rho_r - 10 * trace_guard) : 1e3;
                const double lo = picks[k].rho > mp.rho_r ? std::max(lo_b, mp.rho_r + 10 * trace_guard) : lo_b;
                const double v = picks[k].value * (1.0 - offset);
                BodySection b;
                b.wetted = detail::body_from_extremum(mp, heave[k], v, picks[k].rho, lo, hi, opt.step);
                if (b.wetted.encloses_ring) throw OverlapUnresolvable("extremum body encloses the ring");
                b.H = heave[k];
                s.bodies.push_back(std::move(b));
            }
            BodySection ring;
            ring.wetted = detail::ring_body(mp, heave[N - 1], delta, opt.step);
            ring.H = heave[N - 1];
            s.bodies.push_back(std::move(ring));

            std::sort(s.bodies.begin(), s.bodies.end(), [](const BodySection& x, const BodySection& y) {
                return x.wetted.left_end.rho < y.wetted.left_end.rho;
            });
            for (auto& b : s.bodies) {
                b.inner_radius = b.wetted.left_end.rho;
                b.outer_radius = b.wetted.right_end.rho;
                b.superstructure_height = opt.superstructure_height;
            }
            for (std::size_t k = 0; k + 1 < s.bodies.size(); ++k)
                if (!(s.bodies[k].outer_radius < s.bodies[k + 1].inner_radius))
                    throw OverlapUnresolvable("waterlines overlap");
            for (std::size_t i = 0; i < s.bodies.size(); ++i)
                for (std::size_t j = i + 1; j < s.bodies.size(); ++j)
                    if (polylines_cross(s.bodies[i].wetted.points, s.bodies[j].wetted.points))
                        throw OverlapUnresolvable("wetted curves intersect");
            for (auto& b : s.bodies) {
                finish_body(b, opt.ballast_fraction);
                s.matrices.push_back(assemble_matrices(b));
            }
            return s;
        } catch (const OverlapUnresolvable& e) {
            last_error = e.what();
        }
    }
    throw OverlapUnresolvable("could not separate the bodies: " + last_error);
}

inline std::size_t ring_body_index(const Structure& s)
{
    for (std::size_t k = 0; k < s.bodies.size(); ++k)
        if (s.bodies[k].wetted.encloses_ring) return k;
    throw GeometryError("no body encloses the ring");
}

inline double min_body_distance(const Structure& s)
{
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.bodies.size(); ++i)
        for (std::size_t j = i + 1; j < s.bodies.size(); ++j)
            d = std::min(d, polyline_distance(s.bodies[i].wetted.points, s.bodies[j].wetted.points));
    return d;
}

} // namespace trapmodes
