#pragma once

#include <complex>
#include <numbers>
#include <string_view>

#include "strat/errors.hpp"

namespace strat {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

/// Smallest |cos(theta)| accepted before the incidence is treated as grazing.
inline constexpr double kGrazingCutoff = 1e-6;

enum class Polarization { TE, TM };

[[nodiscard]] std::string_view to_string(Polarization p);
[[nodiscard]] Polarization polarization_from_string(std::string_view s);

[[nodiscard]] constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
[[nodiscard]] constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wavenumber, incidence angle and polarization of the incident plane wave.
///
/// The angle is stored as given: left-incident waves use (-90°, 90°) and
/// right-incident waves (90°, 270°). Only cos²θ, sin²θ and |cosθ| enter the
/// scattering formulas, so either range works unchanged.
class WaveContext {
public:
    /// Throws InvalidArgument for k <= 0 and GrazingIncidence for |cosθ| < 1e-6.
    WaveContext(double k, double theta, Polarization pol);

    [[nodiscard]] double k() const { return k_; }
    [[nodiscard]] double theta() const { return theta_; }
    [[nodiscard]] Polarization polarization() const { return pol_; }
    [[nodiscard]] double cos_theta() const { return cos_; }
    [[nodiscard]] double sin_theta() const { return sin_; }
    [[nodiscard]] double kx() const { return k_ * cos_; }
    [[nodiscard]] double ky() const { return k_ * sin_; }
    /// Normal wavenumber k|cosθ|.
    [[nodiscard]] double kappa() const { return kappa_; }

private:
    double k_;
    double theta_;
    Polarization pol_;
    double cos_;
    double sin_;
    double kappa_;
};

/// Relative and absolute tolerances handed to the adaptive integrators.
struct Tolerance {
    double rtol = 1e-10;
    double atol = 1e-12;
};

/// k|cosθ|; GrazingIncidence is raised by the WaveContext constructor.
[[nodiscard]] inline double normal_wavenumber(const WaveContext& ctx) { return ctx.kappa(); }

/// n = sqrt(ε̂)·sqrt(μ̂) with principal roots, so double-negative media get Re n < 0.
[[nodiscard]] Complex refractive_index(Complex eps, Complex mu);

/// Effective index ±|secθ|·sqrt(n² − sin²θ), sign matched to Re(n).
/// When Re(n) = 0 the root with Im ≥ 0 is returned.
[[nodiscard]] Complex tilde_n(Complex n, const WaveContext& ctx);

}  // namespace strat
