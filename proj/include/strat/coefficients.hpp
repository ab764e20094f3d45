#pragma once

#include "strat/core.hpp"
#include "strat/profile.hpp"

namespace strat {

/// Pointwise quantities every solver consumes.
struct LocalCoefficients {
    Complex alpha;    ///< μ̂ (TE) or ε̂ (TM)
    Complex beta;     ///< ε̂ (TE) or μ̂ (TM)
    Complex n_tilde;  ///< effective index ñ
    Complex m_plus;   ///< (ñ² + α²) / 2α
    Complex m_minus;  ///< (ñ² − α²) / 2α
    Complex v;        ///< optical potential k²(1 − n²)
};

/// Coefficients of a material point. `x` is only used for error reporting.
/// Throws ZeroAlpha when α = 0 and ZeroMaterial when β = 0.
[[nodiscard]] LocalCoefficients coefficients_of(const Material& m, const WaveContext& ctx, double x = 0.0);

[[nodiscard]] LocalCoefficients local_coefficients(const MediumProfile& profile, double x,
                                                   const WaveContext& ctx);

/// α and β of a material for the context's polarization.
[[nodiscard]] Complex alpha_of(const Material& m, Polarization p);
[[nodiscard]] Complex beta_of(const Material& m, Polarization p);

/// ñ² = sec²θ (n² − sin²θ), written to avoid cancellation near vacuum.
[[nodiscard]] Complex n_tilde_squared(const Material& m, const WaveContext& ctx);

/// d𝔪₋/dx from the profile derivative.
[[nodiscard]] Complex m_minus_derivative(const MediumProfile& profile, double x, const WaveContext& ctx);

}  // namespace strat
