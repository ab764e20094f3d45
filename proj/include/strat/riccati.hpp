#pragma once

#include <vector>

#include "strat/ode.hpp"
#include "strat/profile.hpp"
#include "strat/transfer.hpp"

namespace strat::riccati {

/// |Q| above this is treated as a blow-up of the Riccati solution.
inline constexpr double kBlowUpThreshold = 1e8;

/// Solution of the Riccati system on [a, a+ℓ].
///
/// Samples are taken at every accepted step; `steps` keeps the dense output of
/// the augmented state (Q, log 𝒯, ℛˡ) so values between samples stay high order.
struct Trajectory {
    double kappa = 0.0;
    std::vector<double> xs;
    std::vector<Complex> q;
    std::vector<Complex> t;
    std::vector<Complex> rl;
    std::vector<ode::DenseStep<3>> steps;

    struct Point {
        Complex q, t, rl;
    };
    /// Dense-output evaluation at x ∈ [xs.front(), xs.back()].
    [[nodiscard]] Point at(double x) const;
    /// ℛʳ(x) = e^{−2i𝔎x} Q(x) at sample i.
    [[nodiscard]] Complex r_right(std::size_t i) const;
};

/// Integrates i𝔎⁻¹Q′ + 𝔪₋Q² + 2𝔪₊Q + 𝔪₋ = 0, Q(a) = 0, jointly with 𝒯 and ℛˡ.
/// Throws SpectralSingularity (with the blow-up position) when |Q| exceeds 1e8 or
/// the step size underflows.
[[nodiscard]] Trajectory solve_riccati(const MediumProfile& profile, const WaveContext& ctx,
                                       const Tolerance& tol = {});

/// Rʳ = e^{−2i𝔎(a+ℓ)} Q(a+ℓ), T = 𝒯(a+ℓ), Rˡ = ℛˡ(a+ℓ).
[[nodiscard]] Amplitudes final_amplitudes(const Trajectory& traj, const WaveContext& ctx);

/// Rˡ = i𝔎 ∫ e^{2i𝔎x} 𝔪₋ 𝒯² dx by Gauss–Kronrod quadrature over the accepted steps.
[[nodiscard]] Complex left_reflection_fourier(const MediumProfile& profile, const Trajectory& traj,
                                              const WaveContext& ctx);

/// T = exp{i𝔎 ∫ (e^{2i𝔎x} 𝔪₋ ℛʳ + 𝔪₊ − 1) dx}, with ℛʳ taken from the trajectory.
[[nodiscard]] Complex transmission_from_r_right(const MediumProfile& profile, const Trajectory& traj,
                                                const WaveContext& ctx);

/// ℳ(x) of the medium truncated at x, rebuilt from (ℛˡ, ℛʳ, 𝒯).
[[nodiscard]] TransferMatrix2 truncated_matrix(const Trajectory& traj, double x);

/// Convenience: solve and return the final amplitudes.
[[nodiscard]] Amplitudes scatter(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol = {});

}  // namespace strat::riccati
