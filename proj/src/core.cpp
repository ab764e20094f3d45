#include "strat/core.hpp"

#include <cmath>
#include <string>

namespace strat {

std::string_view to_string(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

Polarization polarization_from_string(std::string_view s) {
    if (s == "TE" || s == "te") return Polarization::TE;
    if (s == "TM" || s == "tm") return Polarization::TM;
    throw InvalidArgument("unknown polarization '" + std::string(s) + "' (expected TE or TM)");
}

WaveContext::WaveContext(double k, double theta, Polarization pol)
    : k_(k), theta_(theta), pol_(pol), cos_(std::cos(theta)), sin_(std::sin(theta)) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw InvalidArgument("wavenumber must be positive and finite, got " + std::to_string(k));
    }
    if (!std::isfinite(theta) || std::abs(cos_) < kGrazingCutoff) throw GrazingIncidence(theta);
    kappa_ = k_ * std::abs(cos_);
}

Complex refractive_index(Complex eps, Complex mu) { return std::sqrt(eps) * std::sqrt(mu); }

Complex tilde_n(Complex n, const WaveContext& ctx) {
    const double s = ctx.sin_theta();
    const double sec = 1.0 / std::abs(ctx.cos_theta());
    Complex nt = sec * std::sqrt(n * n - s * s);
    if (n.real() != 0.0) {
        if (nt.real() != 0.0 && std::signbit(nt.real()) != std::signbit(n.real())) nt = -nt;
    } else if (nt.imag() < 0.0) {
        nt = -nt;
    }
    return nt;
}

}  // namespace strat
