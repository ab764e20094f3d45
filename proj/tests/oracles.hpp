#pragma once

// Reference values computed without the library's transfer-matrix code: the
// characteristic (ψ, α⁻¹ψ′) matrix of homogeneous layers, converted to
// plane-wave amplitudes at the vacuum edges.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Mat = std::array<std::array<C, 2>, 2>;

struct Medium {
    C eps{1.0};
    C mu{1.0};
    double thickness = 0.0;
};

struct Result {
    C rl, rr, t;
    Mat m;  // plane-wave transfer matrix
};

inline Mat mul(const Mat& l, const Mat& r) {
    Mat o{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) o[i][j] = l[i][0] * r[0][j] + l[i][1] * r[1][j];
    return o;
}

/// Layers laid out from x0 to the right; te selects α = μ (else α = ε).
inline Result layers(const std::vector<Medium>& ls, double x0, double k, double theta, bool te) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double kap = k * std::abs(c);
    Mat p{{{C(1.0), C(0.0)}, {C(0.0), C(1.0)}}};
    double x1 = x0;
    for (const auto& l : ls) {
        const C alpha = te ? l.mu : l.eps;
        const C nt2 = (l.eps * l.mu - s * s) / (c * c);
        const C q = kap * std::sqrt(nt2);
        const double d = l.thickness;
        const C cs = std::cos(q * d);
        // sin(qd)/q is even in q and regular at q = 0
        const C sq = std::abs(q * d) < 1e-8 ? C(d) : std::sin(q * d) / q;
        const C qs = q * std::sin(q * d);
        const Mat layer{{{cs, alpha * sq}, {-qs / alpha, cs}}};
        p = mul(layer, p);
        x1 += d;
    }
    const C i(0.0, 1.0);
    auto to_ab = [&](double x) {
        const C e = std::exp(-i * kap * x);
        return Mat{{{0.5 * e, -0.5 * i * e / kap}, {0.5 / e, 0.5 * i / (e * kap)}}};
    };
    auto from_ab = [&](double x) {
        const C e = std::exp(i * kap * x);
        return Mat{{{e, 1.0 / e}, {i * kap * e, -i * kap / e}}};
    };
    const Mat m = mul(to_ab(x1), mul(p, from_ab(x0)));
    return {-m[1][0] / m[1][1], m[0][1] / m[1][1], 1.0 / m[1][1], m};
}

inline Result slab(C eps, C mu, double x0, double ell, double k, double theta, bool te) {
    return layers({{eps, mu, ell}}, x0, k, theta, te);
}

struct GainZero {
    double k;
    C eps;
};

/// Spectral singularity of a TE gain slab [0, ell] at normal incidence:
/// Re ε̂ is fixed and (k, Im ε̂) are tuned by Newton's method until m22 = 0.
/// The start comes from a coarse scan of |m22| over k at the initial Im ε̂.
inline GainZero gain_slab_zero(double re_eps, double im_eps0, double ell, double k_lo, double k_hi) {
    auto m22 = [&](double k, double ei) { return slab({re_eps, ei}, 1.0, 0.0, ell, k, 0.0, true).m[1][1]; };
    double k = k_lo;
    double best = std::abs(m22(k_lo, im_eps0));
    for (int i = 0; i <= 4000; ++i) {
        const double kk = k_lo + (k_hi - k_lo) * i / 4000.0;
        const double v = std::abs(m22(kk, im_eps0));
        if (v < best) best = v, k = kk;
    }
    double ei = im_eps0;
    for (int it = 0; it < 60; ++it) {
        const C f = m22(k, ei);
        if (std::abs(f) < 1e-15) break;
        const double h = 1e-7;
        const C fk = (m22(k + h, ei) - m22(k - h, ei)) / (2.0 * h);
        const C fe = (m22(k, ei + h) - m22(k, ei - h)) / (2.0 * h);
        const double det = fk.real() * fe.imag() - fe.real() * fk.imag();
        k -= (f.real() * fe.imag() - fe.real() * f.imag()) / det;
        ei -= (fk.real() * f.imag() - f.real() * fk.imag()) / det;
    }
    return {k, {re_eps, ei}};
}

}  // namespace oracle
