#pragma once

#include <vector>

#include "strat/profile.hpp"
#include "strat/transfer.hpp"

namespace strat::linearx {

/// |𝔪₋| below this fraction of its maximum counts as a zero.
inline constexpr double kMMinusZero = 1e-8;

struct XState {
    double x = 0.0;
    Complex chi{1.0, 0.0};   ///< 𝒳(x)
    Complex dchi{};          ///< ∂ₓ𝒳(x)
    Complex eta{1.0, 0.0};   ///< η(x) = exp{i𝔎 ∫ (𝔪₊ − 1)}
    Complex rl{};            ///< running ℛˡ(x) = i𝔎 ∫ e^{2i𝔎x} 𝔪₋ η²/𝒳²
};

struct XTrajectory {
    double kappa = 0.0;
    Complex m_minus_end{};   ///< 𝔪₋ just inside a+ℓ
    std::vector<XState> states;
};

/// Integrates 𝒳″ − (∂ₓ ln 𝔪₋ + 2i𝔎𝔪₊)𝒳′ − 𝔎²𝔪₋²𝒳 = 0 with 𝒳(a) = 1, 𝒳′(a) = 0,
/// alongside log η and ℛˡ. At discontinuities 𝒳 is continuous and 𝒳′ scales
/// with 𝔪₋. Throws MMinusVanishes where |𝔪₋| < 1e-8·max|𝔪₋| (at x = a for vacuum).
[[nodiscard]] XTrajectory solve_linear_x(const MediumProfile& profile, const WaveContext& ctx,
                                         const Tolerance& tol = {});

/// Rʳ = i e^{−2i𝔎(a+ℓ)} 𝒳′/(𝔎𝔪₋𝒳), T = η/𝒳, Rˡ = ℛˡ, all at a+ℓ.
/// Throws SpectralSingularity when |𝒳(a+ℓ)| < 1e-12.
[[nodiscard]] Amplitudes amplitudes_from_x(const XTrajectory& traj, const WaveContext& ctx);

/// Interval layout chosen by the dissection, for diagnostics.
struct Segment {
    enum class Kind { Linear, Riccati, Phase };
    double x0, x1;
    Kind kind;
};

struct DissectionResult {
    Amplitudes amplitudes;
    TransferMatrix2 matrix;
    std::vector<Segment> segments;
};

/// Splits [a, a+ℓ] around the zeros of 𝔪₋ (edges included), solves the zero-free
/// pieces with the linear equation and the short buffers around zeros with the
/// Riccati solver (or a pure phase matrix where 𝔪₋ is negligible throughout),
/// then composes the piece transfer matrices.
[[nodiscard]] DissectionResult dissect(const MediumProfile& profile, const WaveContext& ctx,
                                       const Tolerance& tol = {});

[[nodiscard]] Amplitudes dissect_and_solve(const MediumProfile& profile, const WaveContext& ctx,
                                           const Tolerance& tol = {});

/// diag(e^{i𝔎∫(𝔪₊−1)}, e^{−i𝔎∫(𝔪₊−1)}) over [x0, x1]: the exact matrix when 𝔪₋ ≡ 0.
[[nodiscard]] TransferMatrix2 phase_matrix(const MediumProfile& profile, const WaveContext& ctx, double x0,
                                           double x1);

}  // namespace strat::linearx
