#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "strat/profile.hpp"
#include "strat/transfer.hpp"

namespace strat::xcheck {

/// Amplitudes from the direct field solve, with the transmission amplitude
/// extracted separately from the left- and right-driven problems.
struct DirectSolution {
    Amplitudes amplitudes;  ///< t is the left-driven value
    Complex t_left{1.0, 0.0};
    Complex t_right{1.0, 0.0};
};

/// Integrates (ψ, α⁻¹∂ₓψ) through the support once per incidence side and
/// matches plane waves at both edges. Throws IntegrationFailure.
[[nodiscard]] DirectSolution helmholtz_both_sides(const MediumProfile& profile, const WaveContext& ctx,
                                                  const Tolerance& tol = {});
[[nodiscard]] Amplitudes helmholtz_direct(const MediumProfile& profile, const WaveContext& ctx,
                                          const Tolerance& tol = {});

/// Transfer matrix from Ψ(a+ℓ) = 𝓜Ψ(a), propagating the field for the two unit
/// initial conditions Ψ(a) = e₁, e₂. Throws IntegrationFailure.
[[nodiscard]] TransferMatrix2 psi_two_component(const MediumProfile& profile, const WaveContext& ctx,
                                                const Tolerance& tol = {});

enum class Method { SlabStack, Evolution, Riccati, LinearX, Helmholtz, Psi };

[[nodiscard]] std::string_view to_string(Method m);
/// Accepts slabstack, evolution, riccati, linearx, helmholtz, psi. Throws InvalidArgument.
[[nodiscard]] Method method_from_string(std::string_view s);
[[nodiscard]] const std::vector<Method>& all_methods();

/// Slices used by the slabstack method in reports.
inline constexpr std::size_t kReportSlices = 10'000;

struct MethodResult {
    Method method = Method::Riccati;
    std::optional<Amplitudes> amplitudes;
    std::optional<double> det_drift;      ///< matrix-valued methods only
    std::optional<double> abs_m22;        ///< matrix-valued methods only
    std::string error;                    ///< empty on success
    std::optional<double> x_blow;         ///< set for a located spectral singularity
    [[nodiscard]] bool ok() const { return amplitudes.has_value(); }
};

struct ReportThresholds {
    double pairwise = 1e-5;
    double reciprocity = 1e-8;
    double fourier = 1e-6;
    double unitarity = 1e-7;
    double det_drift = 1e-9;
};

struct ValidationReport {
    std::vector<MethodResult> results;              ///< one per requested method, in request order
    std::vector<std::vector<double>> deviations;    ///< symmetric; NaN where a method failed
    double max_deviation = 0.0;
    std::optional<double> reciprocity;              ///< |Tˡ − Tʳ| from the direct solver
    std::optional<double> fourier_residual;         ///< |ℛˡ(a+ℓ) − i𝔎F̃(−2𝔎)| from the Riccati trajectory
    bool pt_symmetric = false;
    std::optional<double> unitarity_residual;       ///< min over ± of ||T|² ± |RˡRʳ| − 1| when PT-symmetric
    ReportThresholds thresholds;
    bool passed = false;
};

/// Runs each method concurrently and collects deviations and invariant residuals.
/// Per-method failures are recorded in the report instead of being thrown.
/// Throws InvalidArgument for fewer than two methods.
[[nodiscard]] ValidationReport cross_validate(const MediumProfile& profile, const WaveContext& ctx,
                                              const std::vector<Method>& methods, const Tolerance& tol = {},
                                              const ReportThresholds& thresholds = {});

/// Runs a single method.
[[nodiscard]] MethodResult run_method(Method m, const MediumProfile& profile, const WaveContext& ctx,
                                      const Tolerance& tol = {});

/// ε̂(2a+ℓ−x)* = ε̂(x) and likewise for μ̂ on a 513-node grid, to 1e-10.
[[nodiscard]] bool is_pt_symmetric(const MediumProfile& profile);

struct ConvergenceRow {
    std::size_t n = 0;
    double error = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    std::optional<double> slope;  ///< least-squares slope of log error vs log n (absent if errors vanish)
};

/// Errors of uniform midpoint slicing against a Riccati solve at rtol 1e-12.
/// Throws InvalidArgument if n_list is not strictly ascending.
[[nodiscard]] ConvergenceStudy convergence_study(const MediumProfile& profile, const WaveContext& ctx,
                                                 const std::vector<std::size_t>& n_list);

/// 1 + sin²(π(x−a)/ℓ)·Σ complex Gaussian bumps (3 to 6 of them) with |ε̂−1| ≤ 1.5,
/// Re ε̂ > 0.2 and Im ε̂ ≥ 0; μ̂ gets its own bumps when `magnetic`.
[[nodiscard]] MediumProfile random_smooth_profile(std::mt19937_64& rng, double a, double ell, bool magnetic);

struct SuiteCase {
    std::string label;
    MediumProfile profile;
    WaveContext ctx;
};

/// Reproducible suite of random smooth profiles with random k, θ and polarization.
[[nodiscard]] std::vector<SuiteCase> random_suite(std::uint64_t seed, std::size_t count);

}  // namespace strat::xcheck
