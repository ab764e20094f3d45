#include "strat/xcheck.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <memory>

#include "strat/coefficients.hpp"
#include "strat/evolution.hpp"
#include "strat/linearx.hpp"
#include "strat/ode.hpp"
#include "strat/riccati.hpp"
#include "strat/slabstack.hpp"

namespace strat::xcheck {

namespace {

using Field = ode::State<2>;  // (ψ, φ = α⁻¹∂ₓψ)

ode::Options field_options(const WaveContext& ctx, const Tolerance& tol) {
    ode::Options opt;
    opt.rtol = tol.rtol;
    opt.atol = tol.atol;
    opt.max_step = evolution::phase_step_cap(ctx);
    return opt;
}

// Propagates n fields (packed pairwise) across the support, piece by piece.
template <std::size_t N>
void propagate(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol, ode::State<N>& y,
               bool forward) {
    const double k2 = ctx.kappa() * ctx.kappa();
    double piece_hi = profile.end();
    auto rhs = [&](double xs, const ode::State<N>& s, ode::State<N>& ds) {
        const double x = std::min(xs, piece_hi);
        const LocalCoefficients c = local_coefficients(profile, x, ctx);
        const Complex w = k2 * c.n_tilde * c.n_tilde / c.alpha;
        for (std::size_t i = 0; i < N; i += 2) {
            ds[i] = c.alpha * s[i + 1];
            ds[i + 1] = -w * s[i];
        }
    };
    const ode::Options opt = field_options(ctx, tol);
    const auto pieces = profile.smooth_pieces();
    const std::size_t np = pieces.size() - 1;
    for (std::size_t j = 0; j < np; ++j) {
        const std::size_t p = forward ? j : np - 1 - j;
        piece_hi = p + 1 < np ? std::nextafter(pieces[p + 1], pieces[p]) : pieces[p + 1];
        if (forward) {
            ode::integrate<N>(rhs, pieces[p], pieces[p + 1], y, opt);
        } else {
            ode::integrate<N>(rhs, pieces[p + 1], pieces[p], y, opt);
        }
    }
}

// Plane-wave coefficients (A, B) of a vacuum field at x.
std::pair<Complex, Complex> decompose(Complex psi, Complex phi, double kap, double x) {
    const Complex e = std::exp(kI * (kap * x));
    return {0.5 / e * (psi - kI * phi / kap), 0.5 * e * (psi + kI * phi / kap)};
}

double amplitude_distance(const Amplitudes& u, const Amplitudes& v) {
    return std::max({std::abs(u.r_left - v.r_left), std::abs(u.r_right - v.r_right), std::abs(u.t - v.t)});
}

bool has_matrix(Method m) { return m == Method::SlabStack || m == Method::Evolution || m == Method::Psi; }

struct Extras {
    std::optional<double> reciprocity;
    std::optional<double> fourier;
};

MethodResult run_extended(Method m, const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol,
                          Extras* extras) {
    MethodResult r;
    r.method = m;
    try {
        if (has_matrix(m)) {
            TransferMatrix2 mat;
            if (m == Method::SlabStack) {
                mat = slab::piecewise_slices(profile, ctx, kReportSlices);
                r.det_drift = mat.det_drift();
            } else if (m == Method::Evolution) {
                const auto ev = evolution::evolve_transfer(profile, ctx, tol);
                mat = ev.matrix;
                r.det_drift = ev.max_det_drift;
            } else {
                mat = psi_two_component(profile, ctx, tol);
                r.det_drift = mat.det_drift();
            }
            r.abs_m22 = std::abs(mat.m22);
            r.amplitudes = amplitudes_from_matrix(mat);
        } else if (m == Method::Riccati) {
            const auto traj = riccati::solve_riccati(profile, ctx, tol);
            r.amplitudes = riccati::final_amplitudes(traj, ctx);
            if (extras) {
                extras->fourier = std::abs(traj.rl.back() - riccati::left_reflection_fourier(profile, traj, ctx));
            }
        } else if (m == Method::LinearX) {
            r.amplitudes = linearx::dissect_and_solve(profile, ctx, tol);
        } else {
            const DirectSolution d = helmholtz_both_sides(profile, ctx, tol);
            r.amplitudes = d.amplitudes;
            if (extras) extras->reciprocity = std::abs(d.t_left - d.t_right);
        }
    } catch (const SpectralSingularity& e) {
        r.amplitudes.reset();
        r.error = std::string("SpectralSingularity: ") + e.what();
        r.x_blow = e.x_blow();
    } catch (const Error& e) {
        r.amplitudes.reset();
        r.error = e.what();
    }
    return r;
}

}  // namespace

DirectSolution helmholtz_both_sides(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    const double kap = ctx.kappa();
    const double xl = profile.a();
    const double xr = profile.end();
    DirectSolution out;

    // Left incidence: outgoing wave only on the right, traced back to the left edge.
    Field y{std::exp(kI * (kap * xr)), kI * kap * std::exp(kI * (kap * xr))};
    propagate<2>(profile, ctx, tol, y, false);
    const auto [am, bm] = decompose(y[0], y[1], kap, xl);
    if (std::abs(am) < kSingularM22) throw SpectralSingularity("left-driven field has no incoming part");
    out.t_left = 1.0 / am;
    out.amplitudes.r_left = bm / am;

    // Right incidence: only the transmitted wave on the left.
    Field z{std::exp(-kI * (kap * xl)), -kI * kap * std::exp(-kI * (kap * xl))};
    propagate<2>(profile, ctx, tol, z, true);
    const auto [ap, bp] = decompose(z[0], z[1], kap, xr);
    if (std::abs(bp) < kSingularM22) throw SpectralSingularity("right-driven field has no incoming part");
    out.t_right = 1.0 / bp;
    out.amplitudes.r_right = ap / bp;
    out.amplitudes.t = out.t_left;
    return out;
}

Amplitudes helmholtz_direct(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    return helmholtz_both_sides(profile, ctx, tol).amplitudes;
}

TransferMatrix2 psi_two_component(const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    const double kap = ctx.kappa();
    const double a = profile.a();
    const Complex e = std::exp(kI * (kap * a));
    // Ψ(a) = e₁ ↔ ψ = e^{i𝔎x}; Ψ(a) = e₂ ↔ ψ = e^{−i𝔎x}.
    ode::State<4> y{e, kI * kap * e, 1.0 / e, -kI * kap / e};
    propagate<4>(profile, ctx, tol, y, true);
    const double b = profile.end();
    const auto [a1, b1] = decompose(y[0], y[1], kap, b);
    const auto [a2, b2] = decompose(y[2], y[3], kap, b);
    return {a1, a2, b1, b2};
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::SlabStack: return "slabstack";
        case Method::Evolution: return "evolution";
        case Method::Riccati: return "riccati";
        case Method::LinearX: return "linearx";
        case Method::Helmholtz: return "helmholtz";
        case Method::Psi: return "psi";
    }
    return "unknown";
}

Method method_from_string(std::string_view s) {
    for (Method m : all_methods()) {
        if (to_string(m) == s) return m;
    }
    throw InvalidArgument("unknown method '" + std::string(s) + "'");
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> v{Method::SlabStack, Method::Evolution, Method::Riccati,
                                       Method::LinearX,   Method::Helmholtz, Method::Psi};
    return v;
}

MethodResult run_method(Method m, const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    return run_extended(m, profile, ctx, tol, nullptr);
}

bool is_pt_symmetric(const MediumProfile& profile) {
    const std::size_t n = 512;
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = profile.a() + profile.ell() * static_cast<double>(i) / static_cast<double>(n);
        const double mirror = 2.0 * profile.a() + profile.ell() - x;
        const Material u = profile.at(x);
        const Material v = profile.at(mirror);
        if (std::abs(std::conj(v.eps) - u.eps) > 1e-10 || std::abs(std::conj(v.mu) - u.mu) > 1e-10) return false;
    }
    return true;
}

ValidationReport cross_validate(const MediumProfile& profile, const WaveContext& ctx,
                                const std::vector<Method>& methods, const Tolerance& tol,
                                const ReportThresholds& thresholds) {
    if (methods.size() < 2) throw InvalidArgument("cross_validate needs at least two methods");
    std::vector<Extras> extras(methods.size());
    std::vector<std::future<MethodResult>> jobs;
    jobs.reserve(methods.size());
    for (std::size_t i = 0; i < methods.size(); ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
            return run_extended(methods[i], profile, ctx, tol, &extras[i]);
        }));
    }

    ValidationReport rep;
    rep.thresholds = thresholds;
    for (auto& j : jobs) rep.results.push_back(j.get());
    for (const auto& e : extras) {
        if (e.reciprocity) rep.reciprocity = e.reciprocity;
        if (e.fourier) rep.fourier_residual = e.fourier;
    }

    const std::size_t n = rep.results.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.deviations.assign(n, std::vector<double>(n, 0.0));
    bool all_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        all_ok = all_ok && rep.results[i].ok();
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = nan;
            if (rep.results[i].ok() && rep.results[j].ok()) {
                d = amplitude_distance(*rep.results[i].amplitudes, *rep.results[j].amplitudes);
                rep.max_deviation = std::max(rep.max_deviation, d);
            }
            rep.deviations[i][j] = rep.deviations[j][i] = d;
        }
    }

    rep.pt_symmetric = is_pt_symmetric(profile);
    if (rep.pt_symmetric) {
        for (const auto& r : rep.results) {
            if (!r.ok()) continue;
            const Amplitudes& am = *r.amplitudes;
            const double t2 = std::norm(am.t);
            const double rr = std::abs(am.r_left * am.r_right);
            rep.unitarity_residual = std::min(std::abs(t2 + rr - 1.0), std::abs(t2 - rr - 1.0));
            break;
        }
    }

    bool pass = all_ok && rep.max_deviation < thresholds.pairwise;
    if (rep.reciprocity) pass = pass && *rep.reciprocity < thresholds.reciprocity;
    if (rep.fourier_residual) pass = pass && *rep.fourier_residual < thresholds.fourier;
    if (rep.unitarity_residual) pass = pass && *rep.unitarity_residual < thresholds.unitarity;
    for (const auto& r : rep.results) {
        if ((r.method == Method::Evolution || r.method == Method::Psi) && r.det_drift) {
            pass = pass && *r.det_drift < thresholds.det_drift;
        }
    }
    rep.passed = pass;
    return rep;
}

ConvergenceStudy convergence_study(const MediumProfile& profile, const WaveContext& ctx,
                                   const std::vector<std::size_t>& n_list) {
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] == 0 || (i > 0 && n_list[i] <= n_list[i - 1])) {
            throw InvalidArgument("n_list must be strictly ascending and positive");
        }
    }
    const Amplitudes ref = riccati::scatter(profile, ctx, {1e-12, 1e-14});
    ConvergenceStudy out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t n : n_list) {
        const Amplitudes am = amplitudes_from_matrix(slab::slice_and_multiply(profile, ctx, n));
        const double err = amplitude_distance(am, ref);
        out.rows.push_back({n, err});
        if (err > 1e-13) {
            const double lx = std::log(static_cast<double>(n));
            const double ly = std::log(err);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++used;
        }
    }
    if (used >= 2) {
        const double m = static_cast<double>(used);
        out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return out;
}

namespace {

struct Bump {
    double center, width;
    Complex weight;
};

struct BumpSet {
    std::vector<Bump> bumps;
    double scale = 1.0;
};

std::pair<Complex, Complex> bump_sum(const BumpSet& s, double x) {
    Complex v{}, d{};
    for (const auto& b : s.bumps) {
        const double u = (x - b.center) / b.width;
        const double g = std::exp(-0.5 * u * u);
        v += b.weight * g;
        d += b.weight * g * (-u / b.width);
    }
    return {s.scale * v, s.scale * d};
}

BumpSet draw_bumps(std::mt19937_64& rng, double a, double ell) {
    std::uniform_int_distribution<int> count(3, 6);
    std::uniform_real_distribution<double> center(a + 0.15 * ell, a + 0.85 * ell);
    std::uniform_real_distribution<double> width(0.05 * ell, 0.25 * ell);
    std::uniform_real_distribution<double> re(-0.6, 1.0);
    std::uniform_real_distribution<double> im(0.0, 0.25);
    std::uniform_real_distribution<double> contrast(0.3, 1.5);
    BumpSet s;
    const int nb = count(rng);
    for (int i = 0; i < nb; ++i) s.bumps.push_back({center(rng), width(rng), {re(rng), im(rng)}});
    const double target = contrast(rng);

    const std::size_t n = 400;
    auto envelope = [&](double x) { return std::pow(std::sin(kPi * (x - a) / ell), 2); };
    double peak = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = a + ell * static_cast<double>(i) / static_cast<double>(n);
        peak = std::max(peak, envelope(x) * std::abs(bump_sum(s, x).first));
    }
    s.scale = peak > 0.0 ? target / peak : 1.0;
    // Shrink until Re(1 + w·S) stays above 0.2 with a margin for the sampling.
    for (int it = 0; it < 100; ++it) {
        double lowest = 1.0;
        for (std::size_t i = 0; i <= n; ++i) {
            const double x = a + ell * static_cast<double>(i) / static_cast<double>(n);
            lowest = std::min(lowest, 1.0 + envelope(x) * bump_sum(s, x).first.real());
        }
        if (lowest > 0.25) break;
        s.scale *= 0.8;
    }
    return s;
}

}  // namespace

MediumProfile random_smooth_profile(std::mt19937_64& rng, double a, double ell, bool magnetic) {
    auto eps = std::make_shared<BumpSet>(draw_bumps(rng, a, ell));
    auto mu = std::make_shared<BumpSet>();
    if (magnetic) *mu = draw_bumps(rng, a, ell);
    const double w = kPi / ell;
    auto value = [=](double x) {
        const double env = std::pow(std::sin(w * (x - a)), 2);
        return Material{1.0 + env * bump_sum(*eps, x).first, 1.0 + env * bump_sum(*mu, x).first};
    };
    auto derivative = [=](double x) {
        const double env = std::pow(std::sin(w * (x - a)), 2);
        const double denv = w * std::sin(2.0 * w * (x - a));
        const auto [ev, ed] = bump_sum(*eps, x);
        const auto [mv, md] = bump_sum(*mu, x);
        return Material{denv * ev + env * ed, denv * mv + env * md};
    };
    return MediumProfile::parametric(a, ell, value, derivative);
}

std::vector<SuiteCase> random_suite(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-1.0, 1.0);
    std::uniform_real_distribution<double> len(0.5, 2.0);
    std::uniform_real_distribution<double> kl(0.5, 20.0);
    std::uniform_real_distribution<double> angle(-70.0, 70.0);
    std::bernoulli_distribution coin(0.5);
    std::vector<SuiteCase> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double a = pos(rng);
        const double ell = len(rng);
        const bool magnetic = i % 2 == 1;
        MediumProfile prof = random_smooth_profile(rng, a, ell, magnetic);
        const double k = kl(rng) / ell;
        const double theta = deg_to_rad(angle(rng));
        const Polarization pol = coin(rng) ? Polarization::TM : Polarization::TE;
        std::string label = "random-" + std::to_string(i) + (magnetic ? "-magnetic-" : "-") + std::string(strat::to_string(pol));
        out.push_back({std::move(label), std::move(prof), WaveContext(k, theta, pol)});
    }
    return out;
}

}  // namespace strat::xcheck
