#include "strat/evolution.hpp"

#include <algorithm>

#include "strat/coefficients.hpp"

namespace strat::evolution {

GeneratorSample hamiltonian_at(const MediumProfile& profile, double x, const WaveContext& ctx) {
    const LocalCoefficients c = local_coefficients(profile, x, ctx);
    const double kap = ctx.kappa();
    const Complex ph = std::exp(2.0 * kI * (kap * x));
    const Complex d = kap * (1.0 - c.m_plus);
    return {d, -kap * c.m_minus / ph, kap * c.m_minus * ph, -d};
}

double phase_step_cap(const WaveContext& ctx) { return 0.1 / ctx.kappa(); }

EvolutionResult evolve_transfer(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    ode::Options opt;
    opt.rtol = tol.rtol;
    opt.atol = tol.atol;
    opt.max_step = phase_step_cap(ctx);

    // State is (𝓜11, 𝓜12, 𝓜21, 𝓜22); ∂ₓ𝓜 = −i𝓗𝓜.
    double piece_hi = profile.end();
    auto rhs = [&](double xs, const ode::State<4>& y, ode::State<4>& dy) {
        const double x = std::min(xs, piece_hi);
        const GeneratorSample h = hamiltonian_at(profile, x, ctx);
        dy[0] = -kI * (h.h11 * y[0] + h.h12 * y[2]);
        dy[1] = -kI * (h.h11 * y[1] + h.h12 * y[3]);
        dy[2] = -kI * (h.h21 * y[0] + h.h22 * y[2]);
        dy[3] = -kI * (h.h21 * y[1] + h.h22 * y[3]);
    };

    EvolutionResult out;
    out.trajectory.push_back({profile.a(), TransferMatrix2::identity()});
    ode::State<4> y{Complex{1.0}, Complex{}, Complex{}, Complex{1.0}};
    const auto pieces = profile.smooth_pieces();
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
        piece_hi = p + 2 < pieces.size() ? std::nextafter(pieces[p + 1], pieces[p]) : pieces[p + 1];
        auto observe = [&](const ode::DenseStep<4>& step, const ode::State<4>& s) {
            TransferMatrix2 m{s[0], s[1], s[2], s[3]};
            out.max_det_drift = std::max(out.max_det_drift, m.det_drift());
            out.trajectory.push_back({step.x1(), m});
            return true;
        };
        const auto r = ode::integrate<4>(rhs, pieces[p], pieces[p + 1], y, opt, observe);
        out.stats.accepted += r.stats.accepted;
        out.stats.rejected += r.stats.rejected;
        out.stats.evaluations += r.stats.evaluations;
    }
    out.matrix = {y[0], y[1], y[2], y[3]};
    return out;
}

}  // namespace strat::evolution
