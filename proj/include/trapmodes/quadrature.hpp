#pragma once

// Vector-valued adaptive Gauss-Kronrod quadrature and a semi-infinite driver
// for integrands that decay like e^{-k delta} and/or oscillate like cos(k eta).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "trapmodes/errors.hpp"

namespace trapmodes {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct QuadResult {
    Vec<N> value{};
    Vec<N> error{};
    Vec<N> absval{};  // integral of |f|
    bool converged = true;
};

namespace detail {

struct GK15 {
    std::array<double, 8> x, wk;
    std::array<double, 4> wg;
};

inline const GK15& gk15_rule()
{
    static const GK15 rule = [] {
        GK15 r{};
        const auto& xk = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
        const auto& wk = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
        const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
        std::copy(xk.begin(), xk.end(), r.x.begin());
        std::copy(wk.begin(), wk.end(), r.wk.begin());
        std::copy(wg.begin(), wg.end(), r.wg.begin());
        return r;
    }();
    return rule;
}

template <std::size_t N, class F>
QuadResult<N> gk15(F& f, double a, double b)
{
    const auto& r = gk15_rule();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    QuadResult<N> out;
    Vec<N> gauss{};
    auto add = [&](const Vec<N>& v, double wk, double wg) {
        for (std::size_t j = 0; j < N; ++j) {
            out.value[j] += wk * v[j];
            out.absval[j] += wk * std::abs(v[j]);
            gauss[j] += wg * v[j];
        }
    };
    add(f(c), r.wk[0], r.wg[0]);
    for (int i = 1; i < 8; ++i) {
        const double wg = (i % 2 == 0) ? r.wg[i / 2] : 0.0;
        add(f(c - h * r.x[i]), r.wk[i], wg);
        add(f(c + h * r.x[i]), r.wk[i], wg);
    }
    for (std::size_t j = 0; j < N; ++j) {
        out.value[j] *= h;
        out.absval[j] *= std::abs(h);
        out.error[j] = std::abs(out.value[j] - h * gauss[j]);
    }
    return out;
}

} // namespace detail

// Globally adaptive bisection on [a, b]; per component the summed error must
// fall below max(abs_tol, rel_tol * integral of |f|).
template <std::size_t N, class F>
QuadResult<N> integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-13,
                                 double abs_tol = 1e-300, int max_segments = 400)
{
    struct Seg {
        double a, b;
        QuadResult<N> r;
        double key;
    };
    auto cmp = [](const Seg& s, const Seg& t) { return s.key < t.key; };
    std::priority_queue<Seg, std::vector<Seg>, decltype(cmp)> heap(cmp);

    QuadResult<N> total = detail::gk15<N>(f, a, b);
    auto key_of = [&](const QuadResult<N>& r, const QuadResult<N>& tot) {
        double k = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double tol = std::max(abs_tol, rel_tol * tot.absval[j]);
            k = std::max(k, r.error[j] / std::max(tol, 1e-300));
        }
        return k;
    };
    auto done = [&](const QuadResult<N>& tot) {
        for (std::size_t j = 0; j < N; ++j)
            if (tot.error[j] > std::max(abs_tol, rel_tol * tot.absval[j])) return false;
        return true;
    };
    heap.push({a, b, total, 0.0});
    int segments = 1;
    while (!done(total)) {
        if (segments >= max_segments) {
            total.converged = false;
            return total;
        }
        Seg s = heap.top();
        heap.pop();
        const double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b)) {
            total.converged = false;
            return total;
        }
        auto left = detail::gk15<N>(f, s.a, m);
        auto right = detail::gk15<N>(f, m, s.b);
        for (std::size_t j = 0; j < N; ++j) {
            total.value[j] += left.value[j] + right.value[j] - s.r.value[j];
            total.error[j] += left.error[j] + right.error[j] - s.r.error[j];
            total.absval[j] += left.absval[j] + right.absval[j] - s.r.absval[j];
            total.error[j] = std::max(total.error[j], 0.0);
        }
        heap.push({s.a, m, left, key_of(left, total)});
        heap.push({m, s.b, right, key_of(right, total)});
        ++segments;
    }
    return total;
}

// Wynn's epsilon algorithm on a sequence of partial sums; returns the
// highest even-column estimate.
inline double wynn_epsilon(const double* s, std::size_t n)
{
    if (n == 0) return 0.0;
    if (n < 3) return s[n - 1];
    std::vector<double> prev(n + 1, 0.0), cur(s, s + n), next;
    double best = s[n - 1];
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t len = n - k;
        next.assign(len, 0.0);
        for (std::size_t j = 0; j < len; ++j) {
            const double diff = cur[j + 1] - cur[j];
            if (diff == 0.0 || !std::isfinite(diff)) return k % 2 == 1 ? cur[len] : best;
            next[j] = prev[j + 1] + 1.0 / diff;
            if (!std::isfinite(next[j])) return best;
        }
        if (k % 2 == 0) best = next[len - 1];
        prev = cur;
        cur = next;
    }
    return best;
}

struct SemiInfiniteOptions {
    double tol = 1e-12;          // relative target of the total
    double panel_rel_tol = 1e-13;
    int max_panels = 4000;
    std::size_t wynn_window = 24;
};

// Integrate f over [0, inf). `decay` is the exponential rate of the envelope
// (0 if none), `frequency` the angular frequency of the oscillation (0 if none).
// Panel width follows the half-period pi/frequency, capped by 2/decay so each
// panel drops the envelope by at most e^{-2}.
template <std::size_t N, class F>
QuadResult<N> integrate_semi_infinite(F&& f, double decay, double frequency,
                                      const SemiInfiniteOptions& opt = {})
{
    if (!(decay > 0.0) && !(frequency > 0.0))
        throw SingularPoint("integrand neither decays nor oscillates");
    double h = std::numeric_limits<double>::infinity();
    if (frequency > 0.0) h = std::numbers::pi / frequency;
    if (decay > 0.0) h = std::min(h, 2.0 / decay);

    QuadResult<N> total;
    Vec<N> maxabs{};
    std::array<std::vector<double>, N> hist;
    Vec<N> prev_est{}, prev2_est{};

    auto add_panel = [&](double a, double b) {
        auto r = integrate_adaptive<N>(f, a, b, opt.panel_rel_tol);
        if (!r.converged) total.converged = false;
        for (std::size_t j = 0; j < N; ++j) {
            total.value[j] += r.value[j];
            total.error[j] += r.error[j];
            total.absval[j] += r.absval[j];
            maxabs[j] = std::max(maxabs[j], r.absval[j]);
        }
        return r;
    };

    // First panel: geometric split towards k = 0 where the Bessel factors vary on scale 1/tau.
    {
        double lo = 0.0, w = std::min(h, 0.5);
        while (lo < h) {
            const double hi = std::min(h, lo + w);
            add_panel(lo, hi);
            lo = hi;
            w *= 2.0;
        }
    }
    double k = h;
    for (int p = 1; p <= opt.max_panels; ++p) {
        const auto r = add_panel(k, k + h);
        k += h;
        for (std::size_t j = 0; j < N; ++j) hist[j].push_back(total.value[j]);

        bool tail_ok = decay > 0.0;
        if (tail_ok) {
            const double q = std::exp(-h * decay);
            // polynomial prefactors can grow by at most ((k+h)/k)^4 per panel
            const double grow = std::pow((k + h) / k, 4);
            const double ratio = q * grow;
            if (ratio >= 0.9) tail_ok = false;
            else
                for (std::size_t j = 0; j < N; ++j) {
                    const double tail = r.absval[j] * ratio / (1.0 - ratio);
                    const double scale = std::max(std::abs(total.value[j]), 1e-3 * maxabs[j]);
                    if (tail > opt.tol * scale) tail_ok = false;
                }
        }
        if (tail_ok) return total;

        if (frequency > 0.0 && p >= 4) {
            Vec<N> est{};
            bool agree = true;
            for (std::size_t j = 0; j < N; ++j) {
                const auto& s = hist[j];
                const std::size_t n = std::min(s.size(), opt.wynn_window);
                est[j] = wynn_epsilon(s.data() + (s.size() - n), n);
                const double scale = std::max(std::abs(est[j]), 1e-3 * maxabs[j]);
                if (!(std::abs(est[j] - prev_est[j]) <= opt.tol * scale) ||
                    !(std::abs(prev_est[j] - prev2_est[j]) <= 10 * opt.tol * scale))
                    agree = false;
            }
            if (agree) {
                for (std::size_t j = 0; j < N; ++j) {
                    total.error[j] += std::abs(est[j] - prev_est[j]) + std::abs(prev_est[j] - prev2_est[j]);
                    total.value[j] = est[j];
                }
                return total;
            }
            prev2_est = prev_est;
            prev_est = est;
        }
    }
    throw ConvergenceError("semi-infinite quadrature did not converge");
}

} // namespace trapmodes
