#include "strat/slabstack.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace strat::slab {

namespace {

Complex sinc(Complex z) {
    if (std::abs(z) < 1e-6) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

}  // namespace

TransferMatrix2 slab_matrix(Complex eps, Complex mu, double x0, double ell, const WaveContext& ctx) {
    if (ell < 0.0) throw InvalidArgument("slab thickness must be non-negative");
    if (ell == 0.0) return TransferMatrix2::identity();
    const LocalCoefficients c = coefficients_of({eps, mu}, ctx, x0);
    const double kap = ctx.kappa();
    const Complex phase = kap * ell * c.n_tilde;  // 𝔪
    const Complex cs = std::cos(phase);
    const Complex sc = kap * ell * sinc(phase);
    const Complex np_sin = c.m_plus * sc;   // 𝔫₊ sin𝔪
    const Complex nm_sin = c.m_minus * sc;  // 𝔫₋ sin𝔪
    const Complex e_ell = std::exp(-kI * (kap * ell));
    const Complex e_pos = std::exp(-kI * (kap * (2.0 * x0 + ell)));
    return {(cs + kI * np_sin) * e_ell, kI * nm_sin * e_pos, -kI * nm_sin / e_pos, (cs - kI * np_sin) / e_ell};
}

TransferMatrix2 slice_and_multiply(const MediumProfile& profile, const WaveContext& ctx, std::size_t n_slices) {
    if (n_slices == 0) throw InvalidArgument("slice count must be at least 1");
    const double h = profile.ell() / static_cast<double>(n_slices);
    TransferMatrix2 m = TransferMatrix2::identity();
    for (std::size_t j = 0; j < n_slices; ++j) {
        const double x0 = profile.a() + static_cast<double>(j) * h;
        const Material mat = profile.at(x0 + 0.5 * h);
        m = slab_matrix(mat.eps, mat.mu, x0, h, ctx) * m;
    }
    return m;
}

TransferMatrix2 piecewise_slices(const MediumProfile& profile, const WaveContext& ctx, std::size_t n_slices) {
    if (n_slices == 0) throw InvalidArgument("slice count must be at least 1");
    const auto pieces = profile.smooth_pieces();
    TransferMatrix2 m = TransferMatrix2::identity();
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
        const double len = pieces[p + 1] - pieces[p];
        const auto n = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(static_cast<double>(n_slices) * len / profile.ell())));
        const double h = len / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x0 = pieces[p] + static_cast<double>(j) * h;
            const Material mat = profile.at(x0 + 0.5 * h);
            m = slab_matrix(mat.eps, mat.mu, x0, h, ctx) * m;
        }
    }
    return m;
}

TransferMatrix2 stack_matrix(const MediumProfile& profile, const WaveContext& ctx) {
    const auto pieces = profile.smooth_pieces();
    TransferMatrix2 m = TransferMatrix2::identity();
    for (std::size_t j = 0; j + 1 < pieces.size(); ++j) {
        const double x0 = pieces[j];
        const double ell = pieces[j + 1] - x0;
        const Material mat = profile.at(x0 + 0.5 * ell);
        m = slab_matrix(mat.eps, mat.mu, x0, ell, ctx) * m;
    }
    return m;
}

double brewster_angle(double eps) {
    if (!(eps > 0.0)) {
        throw InvalidPermittivity("Brewster angle needs a positive permittivity, got " + std::to_string(eps));
    }
    return std::atan(std::sqrt(eps));
}

}  // namespace strat::slab
