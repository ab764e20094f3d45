#pragma once

#include "strat/coefficients.hpp"
#include "strat/profile.hpp"
#include "strat/transfer.hpp"

namespace strat::slab {

/// Closed-form transfer matrix of a homogeneous slab occupying [x0, x0+ℓ].
///
/// Written with 𝔫± sin𝔪 = 𝔪± 𝔎ℓ sinc𝔪 so that the ñ → 0 limit is regular.
/// Throws ZeroAlpha.
[[nodiscard]] TransferMatrix2 slab_matrix(Complex eps, Complex mu, double x0, double ell, const WaveContext& ctx);

/// Uniform slicing of [a, a+ℓ] into homogeneous slabs sampled at slice midpoints.
[[nodiscard]] TransferMatrix2 slice_and_multiply(const MediumProfile& profile, const WaveContext& ctx,
                                                 std::size_t n_slices);

/// Midpoint slicing that respects discontinuities: each smooth piece gets a share
/// of the n slices proportional to its length (at least one).
[[nodiscard]] TransferMatrix2 piecewise_slices(const MediumProfile& profile, const WaveContext& ctx,
                                               std::size_t n_slices);

/// Exact transfer matrix of a piecewise-constant profile, one factor per smooth
/// piece (each piece sampled at its midpoint).
[[nodiscard]] TransferMatrix2 stack_matrix(const MediumProfile& profile, const WaveContext& ctx);

/// arctan sqrt(ε̂), the TM Brewster angle of a nonmagnetic slab. Throws InvalidPermittivity for ε̂ ≤ 0.
[[nodiscard]] double brewster_angle(double eps);

}  // namespace strat::slab
