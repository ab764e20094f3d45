#include "strat/coefficients.hpp"

namespace strat {

Complex alpha_of(const Material& m, Polarization p) { return p == Polarization::TE ? m.mu : m.eps; }

Complex beta_of(const Material& m, Polarization p) { return p == Polarization::TE ? m.eps : m.mu; }

namespace {

// n² − 1 without cancellation when ε̂, μ̂ are close to 1.
Complex index_squared_minus_one(const Material& m) {
    const Complex de = m.eps - 1.0;
    const Complex dm = m.mu - 1.0;
    return de * dm + de + dm;
}

}  // namespace

Complex n_tilde_squared(const Material& m, const WaveContext& ctx) {
    const double c = ctx.cos_theta();
    return index_squared_minus_one(m) / (c * c) + 1.0;
}

LocalCoefficients coefficients_of(const Material& m, const WaveContext& ctx, double x) {
    const Polarization p = ctx.polarization();
    const Complex alpha = alpha_of(m, p);
    const Complex beta = beta_of(m, p);
    if (alpha == Complex{}) throw ZeroAlpha(x);
    if (beta == Complex{}) throw ZeroMaterial(x);

    const double c = ctx.cos_theta();
    const Complex dn2 = index_squared_minus_one(m);
    const Complex da2 = (alpha - 1.0) * (alpha + 1.0);

    LocalCoefficients out;
    out.alpha = alpha;
    out.beta = beta;
    out.n_tilde = tilde_n(refractive_index(m.eps, m.mu), ctx);
    out.m_minus = (dn2 / (c * c) - da2) / (2.0 * alpha);
    out.m_plus = out.m_minus + alpha;
    out.v = -ctx.k() * ctx.k() * dn2;
    return out;
}

LocalCoefficients local_coefficients(const MediumProfile& profile, double x, const WaveContext& ctx) {
    return coefficients_of(profile.at(x), ctx, x);
}

Complex m_minus_derivative(const MediumProfile& profile, double x, const WaveContext& ctx) {
    const Material m = profile.at(x);
    const Material dm = profile.derivative_at(x);
    const Polarization p = ctx.polarization();
    const Complex alpha = alpha_of(m, p);
    const Complex dalpha = alpha_of(dm, p);
    if (alpha == Complex{}) throw ZeroAlpha(x);
    const double c = ctx.cos_theta();
    const Complex nt2 = n_tilde_squared(m, ctx);
    const Complex dnt2 = (dm.eps * m.mu + m.eps * dm.mu) / (c * c);
    return dnt2 / (2.0 * alpha) - nt2 * dalpha / (2.0 * alpha * alpha) - 0.5 * dalpha;
}

}  // namespace strat
