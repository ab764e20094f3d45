#include "strat/linearx.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "strat/coefficients.hpp"
#include "strat/evolution.hpp"
#include "strat/ode.hpp"
#include "strat/riccati.hpp"

namespace strat::linearx {

namespace {

using State = ode::State<4>;  // (𝒳, 𝒳′, log η, ℛˡ)

constexpr std::size_t kScanNodes = 2048;
// Grid minima of |𝔪₋| below this fraction of the maximum get a Riccati buffer.
constexpr double kBufferTrigger = 1e-3;
// Buffers extend until |𝔪₋| is back above this fraction.
constexpr double kBufferExit = 1e-2;

double max_abs_m_minus(const MediumProfile& profile, const WaveContext& ctx, double x0, double x1,
                       std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n);
        m = std::max(m, std::abs(local_coefficients(profile, x, ctx).m_minus));
    }
    return m;
}

}  // namespace

XTrajectory solve_linear_x(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    const double kap = ctx.kappa();
    const double a = profile.a();
    const double scale = max_abs_m_minus(profile, ctx, a, profile.end(), 256);
    if (scale == 0.0) throw MMinusVanishes(a);
    const double floor = kMMinusZero * scale;

    double piece_hi = profile.end();
    auto rhs = [&](double xs, const State& y, State& dy) {
        const double x = std::min(xs, piece_hi);
        const LocalCoefficients c = local_coefficients(profile, x, ctx);
        if (std::abs(c.m_minus) < floor) throw MMinusVanishes(x);
        const Complex dlog = m_minus_derivative(profile, x, ctx) / c.m_minus;
        dy[0] = y[1];
        dy[1] = (dlog + 2.0 * kI * kap * c.m_plus) * y[1] + kap * kap * c.m_minus * c.m_minus * y[0];
        dy[2] = kI * kap * (c.m_plus - 1.0);
        const Complex ratio = std::exp(y[2]) / y[0];
        dy[3] = kI * kap * std::exp(2.0 * kI * (kap * x)) * c.m_minus * ratio * ratio;
    };

    ode::Options opt;
    opt.rtol = tol.rtol;
    opt.atol = tol.atol;
    opt.max_step = evolution::phase_step_cap(ctx);

    XTrajectory traj;
    traj.kappa = kap;
    traj.states.push_back({a, 1.0, 0.0, 1.0, 0.0});
    State y{Complex{1.0}, Complex{}, Complex{}, Complex{}};
    const auto pieces = profile.smooth_pieces();
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
        piece_hi = p + 2 < pieces.size() ? std::nextafter(pieces[p + 1], pieces[p]) : pieces[p + 1];
        if (p > 0) {
            // 𝒬 is continuous across the jump, so 𝒳′ = −i𝔎𝔪₋𝒬𝒳 follows 𝔪₋.
            const double xb = pieces[p];
            const Complex left = local_coefficients(profile, std::nextafter(xb, a), ctx).m_minus;
            const Complex right = local_coefficients(profile, xb, ctx).m_minus;
            if (std::abs(left) < floor) throw MMinusVanishes(xb);
            y[1] *= right / left;
        }
        auto observe = [&](const ode::DenseStep<4>& step, const State& s) {
            traj.states.push_back({step.x1(), s[0], s[1], std::exp(s[2]), s[3]});
            return true;
        };
        ode::integrate<4>(rhs, pieces[p], pieces[p + 1], y, opt, observe);
    }
    traj.m_minus_end = local_coefficients(profile, profile.end(), ctx).m_minus;
    return traj;
}

Amplitudes amplitudes_from_x(const XTrajectory& traj, const WaveContext& ctx) {
    const XState& s = traj.states.back();
    if (std::abs(s.chi) < kSingularM22) throw SpectralSingularity("X(a+l) vanishes", s.x);
    const double kap = ctx.kappa();
    const Complex rr = kI * std::exp(-2.0 * kI * (kap * s.x)) * s.dchi / (kap * traj.m_minus_end * s.chi);
    return {s.rl, rr, s.eta / s.chi};
}

TransferMatrix2 phase_matrix(const MediumProfile& profile, const WaveContext& ctx, double x0, double x1) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [&](double x) { return local_coefficients(profile, x, ctx).m_plus - 1.0; };
    const Complex phase = kI * ctx.kappa() * gauss_kronrod<double, 31>::integrate(f, x0, x1, 10, 1e-13);
    return {std::exp(phase), 0.0, 0.0, std::exp(-phase)};
}

DissectionResult dissect(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    const double a = profile.a();
    const double ell = profile.ell();
    const auto pieces = profile.smooth_pieces();
    auto mm = [&](double x) { return std::abs(local_coefficients(profile, x, ctx).m_minus); };

    // Scan every smooth piece, refine grid minima of |𝔪₋| and collect buffers.
    std::vector<std::pair<double, double>> buffers;
    double scale = 0.0;
    struct Sample {
        double x, m;
    };
    std::vector<std::vector<Sample>> scans;
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
        const double p0 = pieces[p];
        const double p1 = pieces[p + 1];
        const auto n = std::max<std::size_t>(
            64, static_cast<std::size_t>(static_cast<double>(kScanNodes) * (p1 - p0) / ell));
        std::vector<Sample> s(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            // Nudge the right edge inside the piece so jumps do not leak in.
            double x = p0 + (p1 - p0) * static_cast<double>(i) / static_cast<double>(n);
            if (i == n && p + 2 < pieces.size()) x = std::nextafter(p1, p0);
            s[i] = {x, mm(x)};
            scale = std::max(scale, s[i].m);
        }
        scans.push_back(std::move(s));
    }

    DissectionResult out;
    if (scale == 0.0) {
        out.matrix = phase_matrix(profile, ctx, a, profile.end());
        out.amplitudes = amplitudes_from_matrix(out.matrix);
        out.segments.push_back({a, profile.end(), Segment::Kind::Phase});
        return out;
    }

    const double half = ell / 128.0;
    for (std::size_t p = 0; p < scans.size(); ++p) {
        const auto& s = scans[p];
        const double p0 = pieces[p];
        const double p1 = pieces[p + 1];
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double left = i > 0 ? s[i - 1].m : s[i].m;
            const double right = i + 1 < s.size() ? s[i + 1].m : s[i].m;
            if (!(s[i].m <= left && s[i].m <= right && s[i].m < kBufferTrigger * scale)) continue;
            const double lo = i > 0 ? s[i - 1].x : s[i].x;
            const double hi = i + 1 < s.size() ? s[i + 1].x : s[i].x;
            double xz = s[i].x;
            if (hi > lo) {
                xz = boost::math::tools::brent_find_minima(mm, lo, hi, 40).first;
                if (mm(s[i].x) < mm(xz)) xz = s[i].x;
            }
            // Widen each side until 𝔪₋ has recovered, since the linear pieces divide by it.
            double lo_edge = std::max(p0, xz - half);
            double hi_edge = std::min(p1, xz + half);
            for (double w = half; lo_edge > p0 && mm(lo_edge) < kBufferExit * scale && w < ell / 8.0;) {
                w *= 1.5;
                lo_edge = std::max(p0, xz - w);
            }
            for (double w = half; hi_edge < p1 && mm(hi_edge) < kBufferExit * scale && w < ell / 8.0;) {
                w *= 1.5;
                hi_edge = std::min(p1, xz + w);
            }
            buffers.emplace_back(lo_edge, hi_edge);
        }
    }

    // Merge buffers, then lay out the segments left to right.
    std::sort(buffers.begin(), buffers.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& b : buffers) {
        if (!merged.empty() && b.first <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, b.second);
        } else {
            merged.push_back(b);
        }
    }
    std::vector<double> cuts(pieces.begin(), pieces.end());
    for (const auto& b : merged) {
        cuts.push_back(b.first);
        cuts.push_back(b.second);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double u, double v) { return std::abs(u - v) <= 1e-14 * std::max(1.0, ell); }),
               cuts.end());

    auto in_buffer = [&](double x) {
        return std::any_of(merged.begin(), merged.end(),
                           [&](const auto& b) { return x >= b.first && x <= b.second; });
    };

    std::vector<TransferMatrix2> factors;  // left to right, reversed before composing
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double x0 = cuts[i];
        const double x1 = cuts[i + 1];
        const MediumProfile sub = profile.restricted(x0, x1);
        const double mid = 0.5 * (x0 + x1);
        Segment::Kind kind = in_buffer(mid) ? Segment::Kind::Riccati : Segment::Kind::Linear;
        if (kind == Segment::Kind::Riccati && max_abs_m_minus(profile, ctx, x0, x1, 64) < kMMinusZero * scale) {
            kind = Segment::Kind::Phase;
        }
        TransferMatrix2 m;
        if (kind == Segment::Kind::Linear) {
            try {
                m = matrix_from_amplitudes(amplitudes_from_x(solve_linear_x(sub, ctx, tol), ctx));
            } catch (const MMinusVanishes&) {
                kind = Segment::Kind::Riccati;
            }
        }
        if (kind == Segment::Kind::Riccati) {
            m = matrix_from_amplitudes(riccati::scatter(sub, ctx, tol));
        } else if (kind == Segment::Kind::Phase) {
            m = phase_matrix(profile, ctx, x0, x1);
        }
        factors.push_back(m);
        out.segments.push_back({x0, x1, kind});
    }
    std::reverse(factors.begin(), factors.end());
    out.matrix = compose(factors);
    out.amplitudes = amplitudes_from_matrix(out.matrix);
    return out;
}

Amplitudes dissect_and_solve(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    return dissect(profile, ctx, tol).amplitudes;
}

}  // namespace strat::linearx
