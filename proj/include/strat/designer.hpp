#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "strat/profile.hpp"

namespace strat::design {

/// Q and its first two derivatives at a point.
struct QSample {
    Complex q{};
    Complex dq{};
    Complex d2q{};
};

/// Differentiable Q on [a, a+ℓ] with Q(a) = Q(a+ℓ) = 0.
struct QFunction {
    std::string family;
    double a = 0.0;
    double ell = 1.0;
    std::function<QSample(double)> eval;
    /// Closed-form Δ(x) = ∫ₐˣ dx′/(Q+1), when the family has one.
    std::function<Complex(double)> delta;

    [[nodiscard]] Complex operator()(double x) const { return eval(x).q; }
};

/// κ²(x−a)(ℓ−(x−a)), with closed-form Δ.
[[nodiscard]] QFunction parabolic_q(double kappa, double ell, double a = 0.0);
/// 𝔷 sin(Kₙ(x−a)), Kₙ = πn/ℓ.
[[nodiscard]] QFunction sinusoidal_q(Complex z, int n, double ell, double a = 0.0);
/// Samples joined by cubic Hermite interpolation. Nodal slopes come from central
/// differences inside and one-sided second-order differences at the ends.
[[nodiscard]] QFunction tabulated_q(std::vector<double> xs, std::vector<Complex> qs);

enum class DesignMode { SolveForBeta, SolveForAlpha, TENonmagnetic };

struct DesignSpec {
    QFunction q;
    double k_star = 1.0;
    double theta_star = kPi;           ///< right-incident range (90°, 270°)
    Polarization polarization = Polarization::TE;
    DesignMode mode = DesignMode::TENonmagnetic;
    /// Supplies the known one of α/β (vacuum when absent).
    std::optional<MediumProfile> given;

    [[nodiscard]] WaveContext context() const { return {k_star, theta_star, polarization}; }
    [[nodiscard]] double kappa_star() const { return k_star * std::abs(std::cos(theta_star)); }
};

/// Throws QMinusOne if Q comes within 1e-8 of −1 on [a, a+ℓ].
void check_q_not_minus_one(const QFunction& q);
/// Throws QEqualsOne if Q comes within 1e-8 of 1 on [a, a+ℓ].
void check_q_not_one(const QFunction& q);

/// β = sin²θ⋆/α + cos²θ⋆{[(Q−1)/(Q+1)]²α − 2i∂ₓQ/(𝔎⋆(Q+1)²)}, with α from `spec.given`.
/// Returns the full medium (β is ε̂ for TE, μ̂ for TM). Throws QMinusOne.
[[nodiscard]] MediumProfile beta_from_q(const DesignSpec& spec);

/// α = ξ ± √(ξ² − ζ²), started on the root closest to 1 at x = a and followed
/// continuously across the support. β comes from `spec.given`.
/// Throws QEqualsOne, QMinusOne or BranchAmbiguity.
[[nodiscard]] MediumProfile alpha_from_q(const DesignSpec& spec);

/// ε̂ = 1 − 2cos²θ⋆ (i𝔎⋆⁻¹∂ₓQ + 2Q)/(Q+1)² on the support, μ̂ = 1. Throws QMinusOne.
[[nodiscard]] MediumProfile te_nonmagnetic_profile(const DesignSpec& spec);

/// Dispatches on `spec.mode`.
[[nodiscard]] MediumProfile synthesize(const DesignSpec& spec);

struct DesignedAmplitudes {
    Complex t{1.0, 0.0};
    Complex r_left{};
    Complex delta_ell{};  ///< Δ(a+ℓ)
    double phi = 0.0;     ///< 1 − Re Δ(a+ℓ)/ℓ
};

/// Δ(x) by adaptive Gauss–Kronrod quadrature.
[[nodiscard]] Complex delta_numeric(const QFunction& q, double x);

/// T = e^{2i𝔎⋆[Δ(ℓ)−ℓ]} and Rˡ = −4i𝔎⋆ ∫ Q e^{2i𝔎⋆[2Δ−x+2a]}/(Q+1) dx at (k⋆, θ⋆).
/// Requires TENonmagnetic mode. Throws QMinusOne.
[[nodiscard]] DesignedAmplitudes designed_amplitudes(const DesignSpec& spec);

/// Parabolic design on [0, ℓ]. θ⋆ in radians.
[[nodiscard]] DesignSpec parabolic_design(double kappa, double ell, double k_star, double theta_star);

/// Sinusoidal design on [0, ℓ]; k⋆ defaults to Kₙ/(2|cosθ⋆|), where the profile
/// reduces to a single-sided exponential.
[[nodiscard]] DesignSpec sinusoidal_design(Complex z, int n, double ell, double theta_star,
                                           std::optional<double> k_star = std::nullopt);

/// ε̂ ≈ 1 − 4i𝔷cos²θ⋆ e^{−iKₙx} on [0, ℓ]: the small-𝔷 approximation of the sinusoidal design.
[[nodiscard]] MediumProfile sinusoidal_approximate_profile(Complex z, int n, double ell, double theta_star);

/// Q(2a+ℓ−x)* = Q(x) on a 1025-node grid to 1e-10.
[[nodiscard]] bool pt_symmetry_check(const DesignSpec& spec);

/// ε̂ → ε̂*, μ̂ → μ̂*.
[[nodiscard]] MediumProfile time_reverse(const MediumProfile& profile);

}  // namespace strat::design
