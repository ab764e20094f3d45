#include "strat/designer.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <memory>

#include "strat/coefficients.hpp"
#include "strat/ode.hpp"

namespace strat::design {

namespace {

constexpr std::size_t kScanNodes = 2048;
constexpr double kPoleTolerance = 1e-8;

double node(const QFunction& q, std::size_t i, std::size_t n) {
    return q.a + q.ell * static_cast<double>(i) / static_cast<double>(n);
}

// Locates a point where |Q − target| < 1e-8, or returns nullopt.
std::optional<double> find_near(const QFunction& q, Complex target) {
    const std::size_t n = kScanNodes;
    std::vector<Complex> d(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        d[i] = q(node(q, i, n)) - target;
        if (std::abs(d[i]) < kPoleTolerance) return node(q, i, n);
    }
    auto dist = [&](double x) { return std::abs(q(x) - target); };
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = node(q, i, n);
        const double x1 = node(q, i + 1, n);
        const bool real_valued = std::abs(d[i].imag()) <= 1e-12 && std::abs(d[i + 1].imag()) <= 1e-12;
        if (real_valued && (d[i].real() < 0.0) != (d[i + 1].real() < 0.0)) {
            double lo = x0, hi = x1;
            const bool lo_negative = d[i].real() < 0.0;
            for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (((q(mid) - target).real() < 0.0) == lo_negative) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        // Interior minima of |Q − target| between grid nodes.
        const double here = std::abs(d[i]);
        const double prev = i > 0 ? std::abs(d[i - 1]) : std::numeric_limits<double>::infinity();
        if (i > 0 && here <= prev && here <= std::abs(d[i + 1])) {
            const auto [xm, fm] = boost::math::tools::brent_find_minima(dist, node(q, i - 1, n), x1, 50);
            if (fm < kPoleTolerance) return xm;
        }
    }
    return std::nullopt;
}

struct QTerms {
    Complex p, dp;  // [(Q−1)/(Q+1)]² and its derivative
    Complex d, dd;  // 2i∂ₓQ/(𝔎(Q+1)²) and its derivative
};

QTerms q_terms(const QSample& s, double kap) {
    const Complex qp1 = s.q + 1.0;
    const Complex r = (s.q - 1.0) / qp1;
    const Complex dr = 2.0 * s.dq / (qp1 * qp1);
    const Complex c = 2.0 * kI / kap;
    return {r * r, 2.0 * r * dr, c * s.dq / (qp1 * qp1),
            c * (s.d2q / (qp1 * qp1) - 2.0 * s.dq * s.dq / (qp1 * qp1 * qp1))};
}

Material assemble(Polarization pol, Complex alpha, Complex beta) {
    return pol == Polarization::TE ? Material{beta, alpha} : Material{alpha, beta};
}

MediumProfile given_or_vacuum(const DesignSpec& spec) {
    return spec.given ? *spec.given : MediumProfile::vacuum(spec.q.a, spec.q.ell);
}

void require_zero_edges(const QFunction& q) {
    const double tol = 1e-10;
    if (std::abs(q(q.a)) > tol || std::abs(q(q.a + q.ell)) > tol) {
        throw InvalidArgument("Q must vanish at both ends of the support");
    }
}

}  // namespace

QFunction parabolic_q(double kappa, double ell, double a) {
    if (!(kappa > 0.0) || !(ell > 0.0)) throw InvalidArgument("parabolic Q needs kappa > 0 and ell > 0");
    QFunction f;
    f.family = "parabolic";
    f.a = a;
    f.ell = ell;
    const double k2 = kappa * kappa;
    f.eval = [=](double x) {
        const double t = x - a;
        return QSample{k2 * t * (ell - t), k2 * (ell - 2.0 * t), -2.0 * k2};
    };
    f.delta = [=](double x) {
        const double t = x - a;
        const double kl = kappa * ell;
        const double s = std::sqrt(kl * kl + 4.0);
        return Complex{std::log((kappa * t * (kl + s) + 2.0) / (kappa * t * (kl - s) + 2.0)) / (kappa * s)};
    };
    return f;
}

QFunction sinusoidal_q(Complex z, int n, double ell, double a) {
    if (n == 0 || !(ell > 0.0)) throw InvalidArgument("sinusoidal Q needs n != 0 and ell > 0");
    QFunction f;
    f.family = "sinusoidal";
    f.a = a;
    f.ell = ell;
    const double kn = kPi * n / ell;
    f.eval = [=](double x) {
        const double t = kn * (x - a);
        return QSample{z * std::sin(t), z * kn * std::cos(t), -z * kn * kn * std::sin(t)};
    };
    return f;
}

QFunction tabulated_q(std::vector<double> xs, std::vector<Complex> qs) {
    const std::size_t n = xs.size();
    if (n < 3 || qs.size() != n) throw InvalidArgument("tabulated Q needs at least 3 matching samples");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(xs[i] > xs[i - 1])) throw InvalidArgument("tabulated Q nodes must be strictly increasing");
    }
    if (std::abs(qs.front()) > 1e-10 || std::abs(qs.back()) > 1e-10) {
        throw InvalidArgument("Q must vanish at both ends of the support");
    }
    std::vector<Complex> m(n);
    {
        const double h1 = xs[1] - xs[0], h2 = xs[2] - xs[0];
        m[0] = -(h1 + h2) / (h1 * h2) * qs[0] + h2 / (h1 * (h2 - h1)) * qs[1] - h1 / (h2 * (h2 - h1)) * qs[2];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) m[i] = (qs[i + 1] - qs[i - 1]) / (xs[i + 1] - xs[i - 1]);
    {
        const double h1 = xs[n - 2] - xs[n - 1], h2 = xs[n - 3] - xs[n - 1];
        m[n - 1] = -(h1 + h2) / (h1 * h2) * qs[n - 1] + h2 / (h1 * (h2 - h1)) * qs[n - 2] -
                   h1 / (h2 * (h2 - h1)) * qs[n - 3];
    }
    QFunction f;
    f.family = "tabulated";
    f.a = xs.front();
    f.ell = xs.back() - xs.front();
    auto data = std::make_shared<const std::tuple<std::vector<double>, std::vector<Complex>, std::vector<Complex>>>(
        std::move(xs), std::move(qs), std::move(m));
    f.eval = [data](double x) {
        const auto& [X, Q, M] = *data;
        x = std::clamp(x, X.front(), X.back());
        auto it = std::upper_bound(X.begin(), X.end(), x);
        std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(std::distance(X.begin(), it)), X.size() - 1) - 1;
        const double h = X[i + 1] - X[i];
        const double t = (x - X[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        QSample s;
        s.q = (2 * t3 - 3 * t2 + 1) * Q[i] + (t3 - 2 * t2 + t) * h * M[i] + (-2 * t3 + 3 * t2) * Q[i + 1] +
              (t3 - t2) * h * M[i + 1];
        s.dq = ((6 * t2 - 6 * t) * Q[i] + (3 * t2 - 4 * t + 1) * h * M[i] + (-6 * t2 + 6 * t) * Q[i + 1] +
                (3 * t2 - 2 * t) * h * M[i + 1]) /
               h;
        s.d2q = ((12 * t - 6) * Q[i] + (6 * t - 4) * h * M[i] + (-12 * t + 6) * Q[i + 1] + (6 * t - 2) * h * M[i + 1]) /
                (h * h);
        return s;
    };
    return f;
}

void check_q_not_minus_one(const QFunction& q) {
    if (auto x = find_near(q, -1.0)) throw QMinusOne(*x);
}

void check_q_not_one(const QFunction& q) {
    if (auto x = find_near(q, 1.0)) throw QEqualsOne(*x);
}

MediumProfile beta_from_q(const DesignSpec& spec) {
    require_zero_edges(spec.q);
    check_q_not_minus_one(spec.q);
    const MediumProfile given = given_or_vacuum(spec);
    const double kap = spec.kappa_star();
    const double c2 = std::pow(std::cos(spec.theta_star), 2);
    const double s2 = std::pow(std::sin(spec.theta_star), 2);
    const QFunction q = spec.q;
    const Polarization pol = spec.polarization;

    auto value = [=](double x) {
        const Complex alpha = alpha_of(given.at(x), pol);
        if (alpha == 0.0) throw ZeroAlpha(x);
        const QTerms t = q_terms(q.eval(x), kap);
        return assemble(pol, alpha, s2 / alpha + c2 * (t.p * alpha - t.d));
    };
    auto derivative = [=](double x) {
        const Complex alpha = alpha_of(given.at(x), pol);
        const Complex dalpha = alpha_of(given.derivative_at(x), pol);
        const QTerms t = q_terms(q.eval(x), kap);
        const Complex dbeta = -s2 * dalpha / (alpha * alpha) + c2 * (t.dp * alpha + t.p * dalpha - t.dd);
        return assemble(pol, dalpha, dbeta);
    };
    return MediumProfile::parametric(q.a, q.ell, value, derivative);
}

MediumProfile alpha_from_q(const DesignSpec& spec) {
    require_zero_edges(spec.q);
    check_q_not_minus_one(spec.q);
    check_q_not_one(spec.q);
    const MediumProfile given = given_or_vacuum(spec);
    const double kap = spec.kappa_star();
    const double c2 = std::pow(std::cos(spec.theta_star), 2);
    const double s2 = std::pow(std::sin(spec.theta_star), 2);
    const QFunction q = spec.q;
    const Polarization pol = spec.polarization;

    // α solves c²P α² − (β + c²D) α + s² = 0, i.e. α = ξ ± √(ξ² − ζ²).
    auto roots = [=](double x) {
        const Complex beta = beta_of(given.at(x), pol);
        const QTerms t = q_terms(q.eval(x), kap);
        const Complex xi = (beta + c2 * t.d) / (2.0 * c2 * t.p);
        const Complex zeta2 = s2 / (c2 * t.p);
        const Complex w = std::sqrt(xi * xi - zeta2);
        return std::pair<Complex, Complex>{xi + w, xi - w};
    };

    const std::size_t n = kScanNodes;
    auto grid = std::make_shared<std::vector<Complex>>(n + 1);
    {
        const auto [p, m] = roots(q.a);
        const double dp = std::abs(p - 1.0), dm = std::abs(m - 1.0);
        if (std::abs(dp - dm) <= 1e-12 * std::max(1.0, dp) && std::abs(p - m) > 1e-9) {
            throw BranchAmbiguity("both roots for alpha are equally close to 1 at x = a");
        }
        (*grid)[0] = dp <= dm ? p : m;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        const auto [p, m] = roots(node(q, i, n));
        const Complex guess = i >= 2 ? 2.0 * (*grid)[i - 1] - (*grid)[i - 2] : (*grid)[i - 1];
        const double dp = std::abs(p - guess), dm = std::abs(m - guess);
        if (std::abs(dp - dm) <= 1e-12 * std::max(1.0, dp) && std::abs(p - m) > 1e-6) {
            throw BranchAmbiguity("alpha branch cannot be continued at x = " + std::to_string(node(q, i, n)));
        }
        (*grid)[i] = dp <= dm ? p : m;
    }

    auto pick = [=](double x) {
        const double u = std::clamp((x - q.a) / q.ell * static_cast<double>(n), 0.0, static_cast<double>(n));
        const auto j = std::min<std::size_t>(static_cast<std::size_t>(u), n - 1);
        const double w = u - static_cast<double>(j);
        const Complex ref = (1.0 - w) * (*grid)[j] + w * (*grid)[j + 1];
        const auto [p, m] = roots(x);
        return std::abs(p - ref) <= std::abs(m - ref) ? p : m;
    };
    auto value = [=](double x) {
        const Complex alpha = pick(x);
        return assemble(pol, alpha, beta_of(given.at(x), pol));
    };
    auto derivative = [=](double x) {
        const Complex alpha = pick(x);
        const Complex beta = beta_of(given.at(x), pol);
        const Complex dbeta = beta_of(given.derivative_at(x), pol);
        const QTerms t = q_terms(q.eval(x), kap);
        const Complex A = c2 * t.p, dA = c2 * t.dp;
        const Complex B = beta + c2 * t.d, dB = dbeta + c2 * t.dd;
        const Complex dalpha = -(dA * alpha * alpha - dB * alpha) / (2.0 * A * alpha - B);
        return assemble(pol, dalpha, dbeta);
    };
    return MediumProfile::parametric(q.a, q.ell, value, derivative);
}

MediumProfile te_nonmagnetic_profile(const DesignSpec& spec) {
    if (spec.mode != DesignMode::TENonmagnetic || spec.polarization != Polarization::TE) {
        throw InvalidArgument("te_nonmagnetic_profile needs a TE design in TE_nonmagnetic mode");
    }
    require_zero_edges(spec.q);
    check_q_not_minus_one(spec.q);
    const double kap = spec.kappa_star();
    const double c2 = std::pow(std::cos(spec.theta_star), 2);
    const QFunction q = spec.q;
    auto value = [=](double x) {
        const QSample s = q.eval(x);
        const Complex qp1 = s.q + 1.0;
        return Material{1.0 - 2.0 * c2 * (kI * s.dq / kap + 2.0 * s.q) / (qp1 * qp1), 1.0};
    };
    auto derivative = [=](double x) {
        const QSample s = q.eval(x);
        const Complex qp1 = s.q + 1.0;
        const Complex num = kI * s.dq / kap + 2.0 * s.q;
        const Complex dnum = kI * s.d2q / kap + 2.0 * s.dq;
        return Material{-2.0 * c2 * (dnum / (qp1 * qp1) - 2.0 * num * s.dq / (qp1 * qp1 * qp1)), 0.0};
    };
    return MediumProfile::parametric(q.a, q.ell, value, derivative);
}

MediumProfile synthesize(const DesignSpec& spec) {
    switch (spec.mode) {
        case DesignMode::SolveForBeta: return beta_from_q(spec);
        case DesignMode::SolveForAlpha: return alpha_from_q(spec);
        case DesignMode::TENonmagnetic: return te_nonmagnetic_profile(spec);
    }
    throw InvalidArgument("unknown design mode");
}

Complex delta_numeric(const QFunction& q, double x) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [&](double t) { return 1.0 / (q(t) + 1.0); };
    return gauss_kronrod<double, 61>::integrate(f, q.a, x, 15, 1e-15);
}

DesignedAmplitudes designed_amplitudes(const DesignSpec& spec) {
    if (spec.mode != DesignMode::TENonmagnetic) {
        throw InvalidArgument("designed_amplitudes is defined for TE_nonmagnetic designs");
    }
    require_zero_edges(spec.q);
    check_q_not_minus_one(spec.q);
    const double kap = spec.kappa_star();
    const QFunction& q = spec.q;
    const double a = q.a;

    DesignedAmplitudes out;
    out.delta_ell = delta_numeric(q, a + q.ell);
    out.t = std::exp(2.0 * kI * kap * (out.delta_ell - q.ell));
    out.phi = 1.0 - out.delta_ell.real() / q.ell;

    // (Δ, Rˡ) integrated together so the phase sees Δ(x) at every node.
    auto rhs = [&](double x, const ode::State<2>& y, ode::State<2>& dy) {
        const Complex qx = q(x);
        dy[0] = 1.0 / (qx + 1.0);
        dy[1] = -4.0 * kI * kap * qx * std::exp(2.0 * kI * kap * (2.0 * y[0] - x + 2.0 * a)) / (qx + 1.0);
    };
    ode::Options opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    opt.max_step = std::min(0.1 / kap, q.ell / 64.0);
    ode::State<2> y{};
    ode::integrate<2>(rhs, a, a + q.ell, y, opt);
    out.r_left = y[1];
    return out;
}

DesignSpec parabolic_design(double kappa, double ell, double k_star, double theta_star) {
    DesignSpec spec;
    spec.q = parabolic_q(kappa, ell, 0.0);
    spec.k_star = k_star;
    spec.theta_star = theta_star;
    spec.mode = DesignMode::TENonmagnetic;
    (void)spec.context();
    return spec;
}

DesignSpec sinusoidal_design(Complex z, int n, double ell, double theta_star, std::optional<double> k_star) {
    DesignSpec spec;
    spec.q = sinusoidal_q(z, n, ell, 0.0);
    spec.theta_star = theta_star;
    const double c = std::abs(std::cos(theta_star));
    if (c < kGrazingCutoff) throw GrazingIncidence(theta_star);
    spec.k_star = k_star ? *k_star : kPi * std::abs(n) / ell / (2.0 * c);
    spec.mode = DesignMode::TENonmagnetic;
    return spec;
}

MediumProfile sinusoidal_approximate_profile(Complex z, int n, double ell, double theta_star) {
    const double kn = kPi * n / ell;
    const Complex amp = -4.0 * kI * z * std::pow(std::cos(theta_star), 2);
    return MediumProfile::parametric(
        0.0, ell, [=](double x) { return Material{1.0 + amp * std::exp(-kI * kn * x), 1.0}; },
        [=](double x) { return Material{-kI * kn * amp * std::exp(-kI * kn * x), 0.0}; });
}

bool pt_symmetry_check(const DesignSpec& spec) {
    const QFunction& q = spec.q;
    const std::size_t n = 1024;
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = node(q, i, n);
        const double mirror = 2.0 * q.a + q.ell - x;
        if (std::abs(std::conj(q(mirror)) - q(x)) > 1e-10) return false;
    }
    return true;
}

MediumProfile time_reverse(const MediumProfile& profile) { return profile.conjugated(); }

}  // namespace strat::design
