#pragma once

// Adaptive Dormand–Prince 5(4) integrator for complex state vectors, with the
// standard fourth-order continuous extension.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "strat/core.hpp"

namespace strat::ode {

template <std::size_t N>
using State = std::array<Complex, N>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  ///< 0 selects a step automatically
    std::size_t max_steps = 5'000'000;
};

/// Continuous extension of one accepted step, valid on [x0, x0 + h].
template <std::size_t N>
struct DenseStep {
    double x0 = 0.0;
    double h = 0.0;
    State<N> r1{}, r2{}, r3{}, r4{}, r5{};

    [[nodiscard]] double x1() const { return x0 + h; }

    [[nodiscard]] State<N> at(double x) const {
        const double s = (x - x0) / h;
        const double s1 = 1.0 - s;
        State<N> out;
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
        }
        return out;
    }
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

struct Result {
    double x = 0.0;          ///< where integration ended
    bool stopped = false;    ///< the observer requested an early stop
    Stats stats;
};

namespace detail {

// Butcher tableau of the Dormand–Prince 5(4) pair.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

template <std::size_t N>
double rms_norm(const State<N>& v, const State<N>& scale_ref, const Options& opt) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = opt.atol + opt.rtol * std::abs(scale_ref[i]);
        const double r = std::abs(v[i]) / sc;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(N));
}

template <std::size_t N>
bool all_finite(const State<N>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace detail

/// Integrates y' = f(x, y) from x0 to x1 (either direction) in place.
///
/// `f(x, y, dy)` fills dy. After each accepted step `observe(step, y)` is called
/// with the step's dense output and the new state; returning false stops the
/// integration. Throws IntegrationFailure if the step size underflows or the
/// step budget is exhausted.
template <std::size_t N, class Rhs, class Observer>
Result integrate(Rhs&& f, double x0, double x1, State<N>& y, const Options& opt, Observer&& observe) {
    using namespace detail;
    Result res;
    res.x = x0;
    if (x1 == x0) return res;
    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    const double hmax = std::min(opt.max_step, span);

    State<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
    double x = x0;
    f(x, y, k1);
    ++res.stats.evaluations;
    if (!all_finite(k1)) throw IntegrationFailure("non-finite derivative at start", x);

    double h = opt.initial_step;
    if (!(h > 0.0)) {
        const double d0 = rms_norm(y, y, opt);
        const double dd1 = rms_norm(k1, y, opt);
        double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / dd1;
        h0 = std::min(h0, hmax);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + dir * h0 * k1[i];
        f(x + dir * h0, ytmp, k2);
        ++res.stats.evaluations;
        for (std::size_t i = 0; i < N; ++i) err[i] = (k2[i] - k1[i]) / h0;
        const double dd2 = rms_norm(err, y, opt);
        const double dm = std::max(dd1, dd2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6 * span, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, hmax});
        if (!(h > 0.0) || !std::isfinite(h)) h = hmax;
    }
    h = std::min(h, hmax);

    bool last_rejected = false;
    const double tiny = 1e-14 * std::max(1.0, std::max(std::abs(x0), std::abs(x1)));
    while (true) {
        const double remaining = std::abs(x1 - x);
        if (remaining <= tiny * 1e-2) break;
        bool final_step = false;
        if (h >= remaining) {
            h = remaining;
            final_step = true;
        }
        if (h < tiny && !final_step) throw IntegrationFailure("step size underflow", x);
        if (res.stats.accepted + res.stats.rejected >= opt.max_steps) {
            throw IntegrationFailure("step budget exhausted", x);
        }
        const double hs = dir * h;

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a21 * k1[i]);
        f(x + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        f(x + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(x + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i) {
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        }
        f(x + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i) {
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        }
        f(x + hs, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i) {
            ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        }
        const double xnew = final_step ? x1 : x + hs;
        f(xnew, ynew, k7);
        res.stats.evaluations += 6;

        for (std::size_t i = 0; i < N; ++i) {
            err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
        State<N> ref;
        for (std::size_t i = 0; i < N; ++i) ref[i] = std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double enorm = rms_norm(err, ref, opt);
        const bool finite = all_finite(ynew) && all_finite(k7) && std::isfinite(enorm);

        if (finite && enorm <= 1.0) {
            DenseStep<N> step;
            step.x0 = x;
            step.h = xnew - x;
            for (std::size_t i = 0; i < N; ++i) {
                step.r1[i] = y[i];
                step.r2[i] = ynew[i] - y[i];
                step.r3[i] = hs * k1[i] - step.r2[i];
                step.r4[i] = step.r2[i] - hs * k7[i] - step.r3[i];
                step.r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            x = xnew;
            y = ynew;
            k1 = k7;
            ++res.stats.accepted;
            res.x = x;
            if (!observe(step, y)) {
                res.stopped = true;
                return res;
            }
            if (final_step) break;
            double fac = enorm > 0.0 ? 0.9 * std::pow(enorm, -0.2) : 5.0;
            fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
            h = std::min(h * fac, hmax);
            last_rejected = false;
        } else {
            ++res.stats.rejected;
            const double fac = finite ? std::max(0.2, 0.9 * std::pow(enorm, -0.2)) : 0.25;
            h *= fac;
            last_rejected = true;
        }
    }
    res.x = x1;
    return res;
}

/// Overload without an observer.
template <std::size_t N, class Rhs>
Result integrate(Rhs&& f, double x0, double x1, State<N>& y, const Options& opt) {
    return integrate<N>(std::forward<Rhs>(f), x0, x1, y, opt, [](const DenseStep<N>&, const State<N>&) { return true; });
}

}  // namespace strat::ode
