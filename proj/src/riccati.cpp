#include "strat/riccati.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "strat/coefficients.hpp"
#include "strat/evolution.hpp"

namespace strat::riccati {

namespace {

using State = ode::State<3>;

template <class F>
Complex gk(F&& f, double x0, double x1) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 21>::integrate(std::forward<F>(f), x0, x1, 0, 0.0);
}

}  // namespace

Trajectory::Point Trajectory::at(double x) const {
    if (steps.empty() || x <= xs.front()) return {q.front(), t.front(), rl.front()};
    if (x >= xs.back()) return {q.back(), t.back(), rl.back()};
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(std::distance(xs.begin(), it)) - 1;
    const State s = steps[std::min(i, steps.size() - 1)].at(x);
    return {s[0], std::exp(s[1]), s[2]};
}

Complex Trajectory::r_right(std::size_t i) const { return std::exp(-2.0 * kI * (kappa * xs[i])) * q[i]; }

Trajectory solve_riccati(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    const double kap = ctx.kappa();
    double piece_hi = profile.end();
    auto rhs = [&](double xs, const State& y, State& dy) {
        const double x = std::min(xs, piece_hi);
        const LocalCoefficients c = local_coefficients(profile, x, ctx);
        const Complex q = y[0];
        dy[0] = kI * kap * (c.m_minus * q * q + 2.0 * c.m_plus * q + c.m_minus);
        dy[1] = kI * kap * (c.m_minus * q + c.m_plus - 1.0);
        dy[2] = kI * kap * std::exp(2.0 * kI * (kap * x) + 2.0 * y[1]) * c.m_minus;
    };

    ode::Options opt;
    opt.rtol = tol.rtol;
    opt.atol = tol.atol;
    opt.max_step = evolution::phase_step_cap(ctx);

    Trajectory traj;
    traj.kappa = kap;
    traj.xs.push_back(profile.a());
    traj.q.push_back(0.0);
    traj.t.push_back(1.0);
    traj.rl.push_back(0.0);

    State y{};
    const auto pieces = profile.smooth_pieces();
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
        piece_hi = p + 2 < pieces.size() ? std::nextafter(pieces[p + 1], pieces[p]) : pieces[p + 1];
        State y_prev = y;
        double x_prev = pieces[p];
        bool blew = false;
        auto observe = [&](const ode::DenseStep<3>& step, const State& s) {
            if (std::abs(s[0]) > kBlowUpThreshold) {
                blew = true;
                return false;
            }
            traj.steps.push_back(step);
            traj.xs.push_back(step.x1());
            traj.q.push_back(s[0]);
            traj.t.push_back(std::exp(s[1]));
            traj.rl.push_back(s[2]);
            y_prev = s;
            x_prev = step.x1();
            return true;
        };
        double x_fail = 0.0;
        try {
            const auto r = ode::integrate<3>(rhs, pieces[p], pieces[p + 1], y, opt, observe);
            x_fail = r.x;
        } catch (const IntegrationFailure& e) {
            throw SpectralSingularity("Riccati step size underflow near a pole of Q", e.x());
        }
        if (!blew) continue;

        // Bisect for the |Q| = 1e8 crossing between the last good state and x_fail.
        double lo = x_prev;
        double hi = x_fail;
        State y_lo = y_prev;
        const double target = 1e-6 * profile.ell();
        ode::Options bopt = opt;
        bopt.rtol = std::min(opt.rtol, 1e-10);
        while (hi - lo > target) {
            const double mid = 0.5 * (lo + hi);
            State ym = y_lo;
            bool above = false;
            try {
                ode::integrate<3>(rhs, lo, mid, ym, bopt);
                above = !(std::abs(ym[0]) <= kBlowUpThreshold);
            } catch (const IntegrationFailure&) {
                above = true;
            }
            if (above) {
                hi = mid;
            } else {
                lo = mid;
                y_lo = ym;
            }
        }
        throw SpectralSingularity("Riccati solution blew up (|Q| > 1e8)", 0.5 * (lo + hi));
    }
    return traj;
}

Amplitudes final_amplitudes(const Trajectory& traj, const WaveContext& ctx) {
    const double x_end = traj.xs.back();
    return {traj.rl.back(), std::exp(-2.0 * kI * (ctx.kappa() * x_end)) * traj.q.back(), traj.t.back()};
}

Complex left_reflection_fourier(const MediumProfile& profile, const Trajectory& traj, const WaveContext& ctx) {
    const double kap = ctx.kappa();
    Complex sum{};
    for (const auto& step : traj.steps) {
        auto f = [&](double x) {
            const LocalCoefficients c = local_coefficients(profile, x, ctx);
            const Complex log_t = step.at(x)[1];
            return std::exp(2.0 * kI * (kap * x) + 2.0 * log_t) * c.m_minus;
        };
        sum += gk(f, step.x0, step.x1());
    }
    return kI * kap * sum;
}

Complex transmission_from_r_right(const MediumProfile& profile, const Trajectory& traj, const WaveContext& ctx) {
    const double kap = ctx.kappa();
    Complex sum{};
    for (const auto& step : traj.steps) {
        auto f = [&](double x) {
            const LocalCoefficients c = local_coefficients(profile, x, ctx);
            const Complex rr = std::exp(-2.0 * kI * (kap * x)) * step.at(x)[0];
            return std::exp(2.0 * kI * (kap * x)) * c.m_minus * rr + c.m_plus - 1.0;
        };
        sum += gk(f, step.x0, step.x1());
    }
    return std::exp(kI * kap * sum);
}

TransferMatrix2 truncated_matrix(const Trajectory& traj, double x) {
    const Trajectory::Point p = traj.at(x);
    const Complex rr = std::exp(-2.0 * kI * (traj.kappa * x)) * p.q;
    return matrix_from_amplitudes({p.rl, rr, p.t});
}

Amplitudes scatter(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    return final_amplitudes(solve_riccati(profile, ctx, tol), ctx);
}

}  // namespace strat::riccati
