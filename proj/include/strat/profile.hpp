#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "strat/core.hpp"

namespace strat {

/// Relative permittivity and permeability at a point.
struct Material {
    Complex eps{1.0, 0.0};
    Complex mu{1.0, 0.0};
};

/// Inside-support description of a medium. Implementations only see x in [a, a+ℓ].
class ProfileModel {
public:
    virtual ~ProfileModel() = default;

    [[nodiscard]] virtual Material value(double x) const = 0;

    /// Analytic x-derivative of (ε̂, μ̂), if the model has one.
    [[nodiscard]] virtual std::optional<Material> derivative(double /*x*/) const { return std::nullopt; }

    /// Interior points where the model is discontinuous, sorted ascending.
    [[nodiscard]] virtual std::vector<double> breakpoints() const { return {}; }
};

struct Layer {
    double thickness = 0.0;
    Complex eps{1.0, 0.0};
    Complex mu{1.0, 0.0};
};

/// ε̂(x), μ̂(x) supported on [a, a+ℓ]; identically vacuum outside.
///
/// Immutable and cheap to copy (the model is shared).
class MediumProfile {
public:
    using Evaluator = std::function<Material(double)>;

    MediumProfile(double a, double ell, std::shared_ptr<const ProfileModel> model);

    static MediumProfile vacuum(double a = 0.0, double ell = 1.0);
    static MediumProfile homogeneous(Complex eps, Complex mu, double a, double ell);
    /// Layers laid out left to right starting at `a`.
    static MediumProfile stack(double a, const std::vector<Layer>& layers);
    /// Samples joined by monotone piecewise-cubic interpolation (real and imaginary
    /// parts separately). End samples must be vacuum unless `allow_edge_jump`.
    static MediumProfile tabulated(std::vector<double> xs, std::vector<Complex> eps,
                                   std::vector<Complex> mu, bool allow_edge_jump = false);
    /// Closed-form family. Without `derivative`, derivative_at falls back to
    /// a fourth-order finite-difference stencil kept inside the support.
    static MediumProfile parametric(double a, double ell, Evaluator value, Evaluator derivative = {});

    [[nodiscard]] double a() const { return a_; }
    [[nodiscard]] double ell() const { return ell_; }
    [[nodiscard]] double end() const { return a_ + ell_; }
    [[nodiscard]] bool contains(double x) const { return x >= a_ && x <= a_ + ell_; }

    /// Material at x; vacuum for x outside [a, a+ℓ]. The support is closed, so the
    /// edges return the inside value.
    [[nodiscard]] Material at(double x) const;
    /// d(ε̂, μ̂)/dx at x; zero outside the support.
    [[nodiscard]] Material derivative_at(double x) const;
    [[nodiscard]] bool has_analytic_derivative() const;

    [[nodiscard]] std::vector<double> breakpoints() const;
    /// [a, b1, ..., bn, a+ℓ]: the support split at its discontinuities.
    [[nodiscard]] std::vector<double> smooth_pieces() const;

    /// The same medium cut to [x0, x1] ⊂ [a, a+ℓ], vacuum elsewhere.
    [[nodiscard]] MediumProfile restricted(double x0, double x1) const;
    /// ε̂ → ε̂*, μ̂ → μ̂*.
    [[nodiscard]] MediumProfile conjugated() const;

    [[nodiscard]] const std::shared_ptr<const ProfileModel>& model() const { return model_; }

private:
    double a_;
    double ell_;
    std::shared_ptr<const ProfileModel> model_;
};

/// Linear ramp between two materials across [a, a+ℓ] (analytic derivative).
[[nodiscard]] MediumProfile linear_ramp(double a, double ell, Material left, Material right);

}  // namespace strat
