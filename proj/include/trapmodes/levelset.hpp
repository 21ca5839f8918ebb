#pragma once

// Free-surface trace analysis and tracing of level lines {psi^(H) = v} in the
// quadrant Q = {rho >= 0, eta <= 0}.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "trapmodes/errors.hpp"
#include "trapmodes/potential.hpp"

namespace trapmodes {

// Half-width of the excluded neighbourhood of the ring point along the free surface.
inline constexpr double trace_guard = 1e-6;

enum class FeatureKind { Zero, Min, Max, SingularApproach };

struct TraceFeature {
    FeatureKind kind;
    double rho;
    double value;
};

enum class EndKind { FreeSurface, Infinity, Axis };

struct CurveEnd {
    EndKind kind = EndKind::FreeSurface;
    double rho = 0.0;
};

struct LevelCurve {
    double level = 0.0;
    double H = 0.0;
    std::vector<FieldPoint> points;
    CurveEnd left_end, right_end;
    bool encloses_ring = false;
    double max_residual = 0.0;
};

struct StagnationPoint {
    FieldPoint location;
    double level = 0.0;
    double residual = 0.0;  // |grad psi^(H)| at the location
};

struct SearchBox {
    double rho_lo, rho_hi, eta_lo, eta_hi;
};

struct TraceOptions {
    double step = 0.02;            // initial arc-length step
    double min_step = 1e-9;
    double max_turn = 0.03;        // radians of tangent rotation per step
    double residual_tol = 1e-11;   // corrector target
    double accept_residual = 1e-9; // worst residual tolerated at a vertex
    double infinity_arc = 40.0;
    double arc_cap = 400.0;
    double stagnation_grad = 1e-9;
};

// psi^(H) restricted to the free surface, with its rho-derivative rho (phi - H).
class FreeSurfaceTrace {
public:
    FreeSurfaceTrace(const ModeParams& mp, double H) : field_(mp), H_(H) {}

    double ring_radius() const { return field_.ring_radius(); }

    std::array<double, 2> value_and_slope(double rho) const
    {
        const auto f = field_.fields(rho, 0.0);
        return {f[3] - 0.5 * H_ * rho * rho, rho * (f[0] - H_)};
    }
    double value(double rho) const { return value_and_slope(rho)[0]; }
    // slope / rho, well conditioned near the axis
    double reduced_slope(double rho) const { return field_.fields(rho, 0.0)[0] - H_; }

private:
    ModeField field_;
    double H_;
};

inline std::vector<std::pair<double, double>> free_surface_trace(const ModeParams& mp, double H, double rho_max,
                                                                  int n)
{
    if (n < 100) throw DomainError("trace needs at least 100 samples");
    if (!(rho_max > mp.rho_r)) throw DomainError("rho_max must exceed the ring radius");
    if (!(H >= 0.0)) throw DomainError("heave amplitude must be >= 0");
    FreeSurfaceTrace tr(mp, H);
    const double a = mp.rho_r;
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) {
        double rho = rho_max * i / n;
        if (std::abs(rho - a) < trace_guard) rho = rho < a ? a - trace_guard : a + trace_guard;
        out.emplace_back(rho, tr.value(rho));
    }
    return out;
}

namespace detail {

template <class F>
double bracket_root(F&& f, double lo, double hi, double flo, double fhi)
{
    boost::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
}

inline std::vector<double> trace_grid(double lo, double hi, int n)
{
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = lo + (hi - lo) * i / n;
    return g;
}

} // namespace detail

// Local extrema of the free-surface trace on (lo, hi), which must not contain the ring point.
inline std::vector<TraceFeature> find_trace_extrema(const ModeParams& mp, double H, std::pair<double, double> interval,
                                                    int samples = 0)
{
    auto [lo, hi] = interval;
    const double a = mp.rho_r;
    if (!(hi > lo)) throw DomainError("empty trace interval");
    if (lo < a + trace_guard && hi > a - trace_guard)
        throw DomainError("trace interval must exclude the ring guard");
    FreeSurfaceTrace tr(mp, H);
    lo = std::max(lo, 1e-6);
    if (samples <= 0) samples = std::max(200, int(40.0 * (hi - lo)));
    const auto grid = detail::trace_grid(lo, hi, samples);
    std::vector<double> d(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) d[i] = tr.reduced_slope(grid[i]);
    std::vector<TraceFeature> out;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (d[i] == 0.0 || (d[i] < 0.0) == (d[i + 1] < 0.0)) continue;
        const double r = detail::bracket_root([&](double x) { return tr.reduced_slope(x); }, grid[i], grid[i + 1],
                                              d[i], d[i + 1]);
        out.push_back({d[i] < 0.0 ? FeatureKind::Min : FeatureKind::Max, r, tr.value(r)});
    }
    return out;
}

// Sign changes of psi^(H)(rho, 0) - v on (lo, hi) (the ring guard must be excluded).
inline std::vector<double> find_trace_crossings(const FreeSurfaceTrace& tr, double v, double lo, double hi,
                                                int samples)
{
    const auto grid = detail::trace_grid(lo, hi, samples);
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = tr.value(grid[i]) - v;
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (f[i] == 0.0) {
            out.push_back(grid[i]);
            continue;
        }
        if ((f[i] < 0.0) == (f[i + 1] < 0.0)) continue;
        out.push_back(detail::bracket_root([&](double x) { return tr.value(x) - v; }, grid[i], grid[i + 1], f[i],
                                           f[i + 1]));
    }
    return out;
}

inline std::vector<TraceFeature> find_trace_zeros(const ModeParams& mp, double H, std::pair<double, double> interval,
                                                  int samples = 0)
{
    FreeSurfaceTrace tr(mp, H);
    const double lo = std::max(interval.first, 1e-6);
    if (samples <= 0) samples = std::max(200, int(40.0 * (interval.second - lo)));
    std::vector<TraceFeature> out;
    for (double r : find_trace_crossings(tr, 0.0, lo, interval.second, samples))
        out.push_back({FeatureKind::Zero, r, 0.0});
    return out;
}

// Predictor-corrector marching along {psi^(H) = v}.
class LevelTracer {
public:
    LevelTracer(const ModeParams& mp, double H, double v, TraceOptions opt = {})
        : field_(mp), H_(H), v_(v), opt_(opt)
    {
    }

    struct Eval {
        double F;                  // psi^(H) - v
        std::array<double, 2> g;   // grad psi^(H)
        double phi;
    };

    Eval eval(FieldPoint p) const
    {
        const auto f = field_.fields(p.rho, p.eta);
        return {f[3] - 0.5 * H_ * p.rho * p.rho - v_, {p.rho * (f[2] - H_), -p.rho * f[1]}, f[0]};
    }

    double level() const { return v_; }
    double heave() const { return H_; }
    const ModeField& field() const { return field_; }

    struct Marched {
        std::vector<FieldPoint> points;  // excludes the start point
        CurveEnd end;
        double max_residual = 0.0;
    };

    // March from p0 in the direction `dir` (+1 / -1 along the rotated gradient),
    // or along `initial` if given. `avoid` keeps steps small near a saddle.
    Marched march(FieldPoint p0, int dir, std::optional<std::array<double, 2>> initial = std::nullopt,
                  std::optional<FieldPoint> avoid = std::nullopt) const
    {
        Marched out;
        FieldPoint p = p0;
        Eval ep = eval(p);
        double step = opt_.step;
        double arc = 0.0;
        std::array<double, 2> t = tangent(ep, dir);
        if (initial) {
            const double s = (*initial)[0] * t[0] + (*initial)[1] * t[1];
            if (s < 0.0) {
                dir = -dir;
                t = tangent(ep, dir);
            }
        }
        const double a = field_.ring_radius();
        auto ring_dist = [a](FieldPoint q) { return std::hypot(q.rho - a, q.eta); };
        for (;;) {
            if (arc > opt_.arc_cap) throw ConvergenceError("level line did not terminate");
            double max_step = std::min(0.5, 0.05 + 0.05 * ring_dist(p));
            if (avoid) max_step = std::min(max_step, std::max(1e-4, 0.5 * std::hypot(p.rho - avoid->rho, p.eta - avoid->eta)));
            step = std::min(step, max_step);

            bool accepted = false;
            for (int tries = 0; tries < 60 && !accepted; ++tries) {
                if (step < opt_.min_step) throw ConvergenceError("level line step underflow");
                FieldPoint q0{p.rho + step * t[0], p.eta + step * t[1]};
                if (q0.rho < 0.0) {
                    // only v = 0 lines can reach the axis, where psi^(H) vanishes identically
                    const double s = p.rho / std::max(-t[0], 1e-300);
                    if (s <= 1.2 * step) {
                        out.points.push_back({0.0, std::min(0.0, p.eta + s * t[1])});
                        out.end = {EndKind::Axis, 0.0};
                        return out;
                    }
                    step *= 0.5;
                    continue;
                }
                if (q0.eta > 0.0) {
                    auto landing = land(p, q0, step);
                    if (!landing) {
                        step *= 0.5;
                        continue;
                    }
                    const double dland = std::hypot(landing->rho - p.rho, landing->eta - p.eta);
                    if (dland < 0.2 * step && !out.points.empty()) out.points.pop_back();
                    out.points.push_back(*landing);
                    out.end = {EndKind::FreeSurface, landing->rho};
                    return out;
                }
                auto corr = correct(q0);
                if (!corr) {
                    step *= 0.5;
                    continue;
                }
                auto [q, eq, iters] = *corr;
                const double moved = std::hypot(q.rho - q0.rho, q.eta - q0.eta);
                const auto tq = tangent(eq, dir);
                const double turn = std::acos(std::clamp(tq[0] * t[0] + tq[1] * t[1], -1.0, 1.0));
                if (iters > 3 || moved > 0.3 * step || turn > opt_.max_turn) {
                    step *= 0.5;
                    continue;
                }
                if (q.eta > 0.0) {
                    auto landing = land(p, q, step);
                    if (!landing) {
                        step *= 0.5;
                        continue;
                    }
                    out.points.push_back(*landing);
                    out.end = {EndKind::FreeSurface, landing->rho};
                    return out;
                }
                if (ring_dist(q) < 10 * singular_guard) throw SingularPoint("level line entered the ring guard");
                out.max_residual = std::max(out.max_residual, std::abs(eq.F));
                arc += std::hypot(q.rho - p.rho, q.eta - p.eta);
                out.points.push_back(q);
                p = q;
                ep = eq;
                t = tq;
                accepted = true;
                if (turn < 0.3 * opt_.max_turn && iters <= 2) step *= 1.5;
            }
            if (!accepted) throw ConvergenceError("level line corrector failed");

            if (arc > opt_.infinity_arc && escaping(out.points)) {
                out.end = {EndKind::Infinity, 0.0};
                return out;
            }
        }
    }

    std::array<double, 2> tangent(const Eval& e, int dir) const
    {
        const double n = std::hypot(e.g[0], e.g[1]);
        if (n < opt_.stagnation_grad) throw StagnationEncountered("gradient vanishes on the level line");
        return {dir * -e.g[1] / n, dir * e.g[0] / n};
    }

    struct Corrected {
        FieldPoint q;
        Eval e;
        int iters;
    };

    std::optional<Corrected> correct(FieldPoint q) const
    {
        for (int it = 0; it <= 6; ++it) {
            if (q.rho < 0.0) return std::nullopt;
            const double a = field_.ring_radius();
            if (std::hypot(q.rho - a, std::min(q.eta, 0.0)) < singular_guard) return std::nullopt;
            const Eval e = eval({q.rho, std::min(q.eta, 0.0)});
            if (std::abs(e.F) <= opt_.residual_tol) return Corrected{{q.rho, std::min(q.eta, 0.0)}, e, it};
            const double g2 = e.g[0] * e.g[0] + e.g[1] * e.g[1];
            if (g2 < opt_.stagnation_grad * opt_.stagnation_grad) return std::nullopt;
            q.rho -= e.F * e.g[0] / g2;
            q.eta -= e.F * e.g[1] / g2;
            if (q.eta > 0.0 && it == 6) return std::nullopt;
        }
        // accept a slightly looser residual rather than fail on quadrature noise
        const Eval e = eval({q.rho, std::min(q.eta, 0.0)});
        if (std::abs(e.F) <= opt_.accept_residual && q.eta <= 0.0) return Corrected{q, e, 7};
        return std::nullopt;
    }

    // Point where the level line between p (below) and q (above / on the
    // surface) meets eta = 0, solved on the free-surface trace.
    std::optional<FieldPoint> land(FieldPoint p, FieldPoint q, double step) const
    {
        const double s = -p.eta / (q.eta - p.eta);
        double r = p.rho + s * (q.rho - p.rho);
        const double a = field_.ring_radius();
        for (int it = 0; it < 30; ++it) {
            if (r <= 0.0 || std::abs(r - a) < trace_guard) return std::nullopt;
            const Eval e = eval({r, 0.0});
            const double slope = e.g[0];
            if (std::abs(e.F) <= opt_.residual_tol) {
                if (std::hypot(r - p.rho, p.eta) > 2.0 * step) return std::nullopt;
                return FieldPoint{r, 0.0};
            }
            if (slope == 0.0) return std::nullopt;
            double dr = -e.F / slope;
            if (std::abs(dr) > step) dr = std::copysign(step, dr);
            r += dr;
        }
        return std::nullopt;
    }

private:
    static bool escaping(const std::vector<FieldPoint>& pts)
    {
        if (pts.size() < 8) return false;
        const std::size_t start = pts.size() - pts.size() / 4;
        bool rho_up = true, rho_down = true, eta_down = true;
        for (std::size_t i = start; i + 1 < pts.size(); ++i) {
            rho_up &= pts[i + 1].rho >= pts[i].rho;
            rho_down &= pts[i + 1].rho <= pts[i].rho;
            eta_down &= pts[i + 1].eta <= pts[i].eta;
        }
        return rho_up || eta_down || (rho_down && eta_down);
    }

    ModeField field_;
    double H_;
    double v_;
    TraceOptions opt_;
};

namespace detail {

inline void finish_curve(LevelCurve& c, const ModeParams& mp)
{
    auto end_order = [](const CurveEnd& e) {
        switch (e.kind) {
        case EndKind::Axis: return -1.0;
        case EndKind::FreeSurface: return e.rho;
        case EndKind::Infinity: return 1e300;
        }
        return 0.0;
    };
    if (end_order(c.left_end) > end_order(c.right_end)) {
        std::reverse(c.points.begin(), c.points.end());
        std::swap(c.left_end, c.right_end);
    }
    c.encloses_ring = c.left_end.kind == EndKind::FreeSurface && c.right_end.kind == EndKind::FreeSurface &&
                      c.left_end.rho < mp.rho_r && c.right_end.rho > mp.rho_r;
}

} // namespace detail

inline LevelCurve trace_level_curve(const ModeParams& mp, double H, double v, FieldPoint seed, double step = 0.02,
                                    TraceOptions opt = {})
{
    opt.step = step;
    LevelTracer tr(mp, H, v, opt);
    const auto e0 = tr.eval(seed);
    if (std::abs(e0.F) > 1e-6) throw SeedOffLevel("seed is not on the requested level");
    if (std::hypot(e0.g[0], e0.g[1]) <= opt.stagnation_grad) throw StagnationEncountered("seed is a critical point");

    // polish the seed (on the surface: along the trace only)
    FieldPoint s = seed;
    if (seed.eta == 0.0) {
        if (auto l = tr.land({seed.rho, -1e-300}, seed, 1e-3)) s = *l;
    } else if (auto c = tr.correct(seed)) {
        s = c->q;
    }
    LevelCurve c;
    c.level = v;
    c.H = H;
    if (s.eta == 0.0) {
        // march into the water
        auto t = tr.tangent(tr.eval(s), +1);
        const int dir = t[1] < 0.0 ? +1 : -1;
        auto m = tr.march(s, dir);
        c.points.push_back(s);
        c.points.insert(c.points.end(), m.points.begin(), m.points.end());
        c.left_end = {EndKind::FreeSurface, s.rho};
        c.right_end = m.end;
        c.max_residual = std::max(std::abs(tr.eval(s).F), m.max_residual);
    } else {
        auto a = tr.march(s, +1), b = tr.march(s, -1);
        std::reverse(b.points.begin(), b.points.end());
        c.points = b.points;
        c.points.push_back(s);
        c.points.insert(c.points.end(), a.points.begin(), a.points.end());
        c.left_end = b.end;
        c.right_end = a.end;
        c.max_residual = std::max({std::abs(tr.eval(s).F), a.max_residual, b.max_residual});
    }
    detail::finish_curve(c, mp);
    return c;
}

// Every level line of psi^(H) = v that meets the free surface in (0, rho_max).
inline std::vector<LevelCurve> find_level_curves(const ModeParams& mp, double H, double v, double rho_max,
                                                 double step = 0.02, int samples = 0)
{
    FreeSurfaceTrace tr(mp, H);
    const double a = mp.rho_r;
    if (samples <= 0) samples = std::max(400, int(60.0 * rho_max));
    std::vector<double> seeds;
    // graded sampling towards the ring on both sides, uniform elsewhere
    auto add = [&](double lo, double hi) {
        for (double r : find_trace_crossings(tr, v, lo, hi, std::max(20, int(samples * (hi - lo) / rho_max))))
            seeds.push_back(r);
    };
    const double near = std::min(0.1, 0.5 * a);
    add(1e-6, a - near);
    for (double d = near; d > 1e-5; d *= 0.1) {
        add(a - d, a - 0.1 * d);
        add(a + 0.1 * d, a + d);
    }
    if (rho_max > a + near) add(a + near, rho_max);
    std::sort(seeds.begin(), seeds.end());

    std::vector<LevelCurve> curves;
    auto consumed = [&](double r) {
        for (const auto& c : curves)
            for (const auto* e : {&c.left_end, &c.right_end})
                if (e->kind == EndKind::FreeSurface && std::abs(e->rho - r) < 1e-7 * std::max(1.0, r)) return true;
        return false;
    };
    for (double r : seeds) {
        if (consumed(r)) continue;
        curves.push_back(trace_level_curve(mp, H, v, {r, 0.0}, step));
    }
    return curves;
}

inline std::array<double, 2> stagnation_residual(const ModeField& f, double H, FieldPoint p)
{
    const auto v = f.fields(p.rho, p.eta);
    return {v[2] - H, -v[1]};
}

// All interior zeros of grad psi^(H) found from local minima of |grad| on a coarse grid.
inline std::vector<StagnationPoint> find_stagnation_points(const ModeParams& mp, double H, SearchBox box,
                                                          int nrho = 48, int neta = 32)
{
    const ModeField field(mp);
    const double a = mp.rho_r;
    if (box.eta_hi > -2 * singular_guard && box.rho_lo < a && box.rho_hi > a && box.eta_hi > -1e-3)
        throw DomainError("search box must exclude the ring guard");
    std::vector<std::vector<double>> g(nrho + 1, std::vector<double>(neta + 1));
    auto at = [&](int i, int j) {
        return FieldPoint{box.rho_lo + (box.rho_hi - box.rho_lo) * i / nrho,
                          box.eta_lo + (box.eta_hi - box.eta_lo) * j / neta};
    };
    for (int i = 0; i <= nrho; ++i)
        for (int j = 0; j <= neta; ++j) {
            const auto r = stagnation_residual(field, H, at(i, j));
            g[i][j] = std::hypot(r[0], r[1]);
        }
    std::vector<StagnationPoint> found;
    for (int i = 0; i <= nrho; ++i)
        for (int j = 0; j <= neta; ++j) {
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii > nrho || jj > neta) continue;
                    if (g[ii][jj] < g[i][j]) {
                        is_min = false;
                        break;
                    }
                }
            if (!is_min) continue;
            // Newton on (phi_eta - H, -phi_rho) = 0 with a finite-difference Jacobian
            FieldPoint p = at(i, j);
            bool ok = false;
            for (int it = 0; it < 40; ++it) {
                const auto r = stagnation_residual(field, H, p);
                const double res = std::hypot(r[0], r[1]) * p.rho;
                if (res <= 1e-10) {
                    ok = true;
                    break;
                }
                const double h = 1e-5;
                const auto rp = stagnation_residual(field, H, {p.rho + h, p.eta});
                const auto rm = stagnation_residual(field, H, {p.rho - h, p.eta});
                const auto ep = stagnation_residual(field, H, {p.rho, p.eta + h});
                const auto em = stagnation_residual(field, H, {p.rho, p.eta - h});
                const double J00 = (rp[0] - rm[0]) / (2 * h), J01 = (ep[0] - em[0]) / (2 * h);
                const double J10 = (rp[1] - rm[1]) / (2 * h), J11 = (ep[1] - em[1]) / (2 * h);
                const double det = J00 * J11 - J01 * J10;
                if (det == 0.0) break;
                double dr = -(J11 * r[0] - J01 * r[1]) / det;
                double de = -(-J10 * r[0] + J00 * r[1]) / det;
                const double len = std::hypot(dr, de);
                const double cap = 0.25 * std::max(box.rho_hi - box.rho_lo, box.eta_hi - box.eta_lo);
                if (len > cap) {
                    dr *= cap / len;
                    de *= cap / len;
                }
                p.rho += dr;
                p.eta += de;
                if (p.rho < box.rho_lo || p.rho > box.rho_hi || p.eta < box.eta_lo || p.eta > box.eta_hi) break;
            }
            if (!ok) continue;
            bool dup = false;
            for (const auto& s : found)
                if (std::hypot(s.location.rho - p.rho, s.location.eta - p.eta) < 1e-6) dup = true;
            if (dup) continue;
            const auto f = field.fields(p.rho, p.eta);
            const auto r = stagnation_residual(field, H, p);
            found.push_back({p, f[3] - 0.5 * H * p.rho * p.rho, std::hypot(r[0], r[1]) * p.rho});
        }
    std::sort(found.begin(), found.end(),
              [](const StagnationPoint& x, const StagnationPoint& y) { return x.location.rho < y.location.rho; });
    return found;
}

inline SearchBox default_stagnation_box(const ModeParams& mp)
{
    return {0.25, mp.rho_r + 3.0, -6.0, -0.1};
}

// The right-most stagnation point in the box (the one fixing the critical level).
inline StagnationPoint find_stagnation(const ModeParams& mp, double H, std::optional<SearchBox> box = std::nullopt)
{
    if (!(H >= 0.0)) throw DomainError("heave amplitude must be >= 0");
    const auto pts = find_stagnation_points(mp, H, box.value_or(default_stagnation_box(mp)));
    if (pts.empty()) throw NotFound("no stagnation point in the search box");
    return pts.back();
}

// The level lines through a saddle of psi^(H): the four branches leaving the
// saddle are traced and opposite branches joined into two curves.
inline std::vector<LevelCurve> trace_critical_curves(const ModeParams& mp, double H, const StagnationPoint& sp,
                                                     double step = 0.02)
{
    TraceOptions opt;
    opt.step = step;
    LevelTracer tr(mp, H, sp.level, opt);
    const FieldPoint s = sp.location;
    // Hessian of psi^(H) from differences of its gradient
    const double h = 1e-4;
    auto grad = [&](FieldPoint p) { return tr.eval(p).g; };
    const auto gr = grad({s.rho + h, s.eta}), gl = grad({s.rho - h, s.eta});
    const auto gu = grad({s.rho, s.eta + h}), gd = grad({s.rho, s.eta - h});
    const double A = (gr[0] - gl[0]) / (2 * h), C = (gu[1] - gd[1]) / (2 * h);
    const double B = 0.5 * ((gu[0] - gd[0]) + (gr[1] - gl[1])) / (2 * h);
    // directions (x, y) with A x^2 + 2 B x y + C y^2 = 0
    std::vector<std::array<double, 2>> dirs;
    const double disc = B * B - A * C;
    if (disc <= 0.0) throw NotFound("stagnation point is not a saddle");
    if (std::abs(A) > std::abs(C)) {
        for (double sg : {-1.0, 1.0}) {
            const double x = (-B + sg * std::sqrt(disc)) / A;  // x per unit y
            const double n = std::hypot(x, 1.0);
            dirs.push_back({x / n, 1.0 / n});
        }
    } else {
        for (double sg : {-1.0, 1.0}) {
            const double y = (-B + sg * std::sqrt(disc)) / C;  // y per unit x
            const double n = std::hypot(1.0, y);
            dirs.push_back({1.0 / n, y / n});
        }
    }
    std::vector<LevelCurve> out;
    for (const auto& d : dirs) {
        std::vector<LevelTracer::Marched> halves;
        for (double sg : {1.0, -1.0}) {
            const double eps = 2e-3;
            FieldPoint p{s.rho + sg * eps * d[0], s.eta + sg * eps * d[1]};
            if (auto c = tr.correct(p)) p = c->q;
            auto m = tr.march(p, +1, std::array<double, 2>{sg * d[0], sg * d[1]}, s);
            m.points.insert(m.points.begin(), p);
            halves.push_back(std::move(m));
        }
        LevelCurve c;
        c.level = sp.level;
        c.H = H;
        std::reverse(halves[1].points.begin(), halves[1].points.end());
        c.points = halves[1].points;
        c.points.push_back(s);
        c.points.insert(c.points.end(), halves[0].points.begin(), halves[0].points.end());
        c.left_end = halves[1].end;
        c.right_end = halves[0].end;
        c.max_residual = std::max(halves[0].max_residual, halves[1].max_residual);
        detail::finish_curve(c, mp);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace trapmodes
