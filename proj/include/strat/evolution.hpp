#pragma once

#include <vector>

#include "strat/ode.hpp"
#include "strat/profile.hpp"
#include "strat/transfer.hpp"

namespace strat::evolution {

/// Entries of the traceless non-Hermitian generator 𝓗(x).
struct GeneratorSample {
    Complex h11, h12, h21, h22;
    [[nodiscard]] Complex trace() const { return h11 + h22; }
};

/// 𝓗 = 𝔎 [[1 − 𝔪₊, −𝔪₋ e^{−2i𝔎x}], [𝔪₋ e^{2i𝔎x}, 𝔪₊ − 1]]. Throws ZeroAlpha.
[[nodiscard]] GeneratorSample hamiltonian_at(const MediumProfile& profile, double x, const WaveContext& ctx);

struct MatrixSample {
    double x;
    TransferMatrix2 m;
};

struct EvolutionResult {
    TransferMatrix2 matrix;                 ///< 𝓜(a+ℓ), the transfer matrix
    std::vector<MatrixSample> trajectory;   ///< 𝓜(x) at every accepted step, starting at (a, I)
    double max_det_drift = 0.0;             ///< max |det 𝓜(x) − 1| over the trajectory
    ode::Stats stats;
};

/// Step cap that resolves the e^{±2i𝔎x} phases.
[[nodiscard]] double phase_step_cap(const WaveContext& ctx);

/// Integrates i∂ₓ𝓜 = 𝓗𝓜 from 𝓜(a) = I to x = a+ℓ. Determinant drift is
/// measured and reported, never corrected. Throws IntegrationFailure.
[[nodiscard]] EvolutionResult evolve_transfer(const MediumProfile& profile, const WaveContext& ctx,
                                              const Tolerance& tol = {});

}  // namespace strat::evolution
