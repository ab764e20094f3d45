// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "oracles.hpp"
#include "strat/cli/output.hpp"
#include "strat/designer.hpp"
#include "strat/evolution.hpp"
#include "strat/linearx.hpp"
#include "strat/riccati.hpp"
#include "strat/slabstack.hpp"
#include "strat/xcheck.hpp"

using namespace strat;

namespace {

struct SlabCase {
    Complex eps, mu;
    double a, ell;
    WaveContext ctx;
};

/// Random lossy slabs; members with |m22| > 1e3 (near-total evanescent
/// cancellation) are redrawn.
std::vector<SlabCase> slab_suite(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<SlabCase> out;
    while (out.size() < count) {
        const Complex eps(0.3 + 3.7 * u(rng), 0.3 * u(rng));
        const Complex mu(0.5 + 1.5 * u(rng), 0.1 * u(rng));
        const double a = 2.0 * u(rng) - 1.0;
        const double ell = 0.5 + 1.5 * u(rng);
        const double kl = 0.1 + 19.9 * u(rng);
        const double th = deg_to_rad(160.0 * u(rng) - 80.0);
        const auto pol = u(rng) < 0.5 ? Polarization::TE : Polarization::TM;
        const WaveContext ctx(kl / ell, th, pol);
        if (std::abs(slab::slab_matrix(eps, mu, a, ell, ctx).m22) > 1e3) continue;
        out.push_back({eps, mu, a, ell, ctx});
    }
    return out;
}

double rel_error(const Amplitudes& x, const Amplitudes& ref) {
    const double d = std::max({std::abs(x.r_left - ref.r_left), std::abs(x.r_right - ref.r_right), std::abs(x.t - ref.t)});
    const double s = std::max({std::abs(ref.r_left), std::abs(ref.r_right), std::abs(ref.t)});
    return d / s;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << std::endl;
    if (!ok) ++failures;
}

template <class F>
void guarded(int id, F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

const Tolerance kTight{1e-12, 1e-14};

std::vector<design::DesignSpec> reference_designs() {
    std::vector<design::DesignSpec> out;
    for (Complex z : {Complex(0.05), Complex(0.3, 0.1)}) {
        for (int n : {1, 2}) out.push_back(design::sinusoidal_design(z, n, 1.0, kPi));
    }
    for (double kl : {0.5, 1.0, 3.0}) out.push_back(design::parabolic_design(kl, 1.0, 5.0, kPi));
    return out;
}

void criterion1(const std::vector<SlabCase>& suite) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0, oracle_gap = 0.0;
    for (const auto& c : suite) {
        const auto p = MediumProfile::homogeneous(c.eps, c.mu, c.a, c.ell);
        const auto ref = amplitudes_from_matrix(slab::slab_matrix(c.eps, c.mu, c.a, c.ell, c.ctx));
        const auto o = oracle::slab(c.eps, c.mu, c.a, c.ell, c.ctx.k(), c.ctx.theta(), c.ctx.polarization() == Polarization::TE);
        oracle_gap = std::max(oracle_gap, rel_error({o.rl, o.rr, o.t}, ref));
        worst = std::max(worst, rel_error(amplitudes_from_matrix(evolution::evolve_transfer(p, c.ctx).matrix), ref));
        worst = std::max(worst, rel_error(riccati::scatter(p, c.ctx), ref));
        worst = std::max(worst, rel_error(linearx::dissect_and_solve(p, c.ctx), ref));
        worst = std::max(worst, rel_error(amplitudes_from_matrix(xcheck::psi_two_component(p, c.ctx)), ref));
        worst = std::max(worst, rel_error(xcheck::helmholtz_direct(p, c.ctx), ref));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, worst < 1e-6 && oracle_gap < 1e-10 && secs < 60.0,
           "closed-form slab oracle, 50 slabs x 5 methods: max rel error " + sci(worst) + " (< 1e-6), closed form vs "
               "characteristic matrix " + sci(oracle_gap) + ", " + sci(secs) + " s (< 60 s)");
}

void criterion2(const std::vector<SlabCase>& slabs, const std::vector<xcheck::SuiteCase>& smooth) {
    double worst = 0.0;
    auto check = [&](const MediumProfile& p, const WaveContext& ctx) {
        worst = std::max(worst, evolution::evolve_transfer(p, ctx, kTight).max_det_drift);
        worst = std::max(worst, xcheck::psi_two_component(p, ctx, kTight).det_drift());
    };
    for (const auto& c : slabs) check(MediumProfile::homogeneous(c.eps, c.mu, c.a, c.ell), c.ctx);
    for (const auto& c : smooth) check(c.profile, c.ctx);
    report(2, worst < 1e-9,
           "unit determinant, evolution and psi over 50 slabs + 20 smooth profiles (rtol 1e-12): max |det M - 1| " +
               sci(worst) + " (< 1e-9)");
}

void criterion3() {
    const double th = slab::brewster_angle(2.25);
    const double k = 3.0;
    const WaveContext ctx(k, th, Polarization::TM);
    const auto p = MediumProfile::homogeneous(2.25, 1.0, 0.0, 1.0);
    const double rho = std::cos(th) * (2.25 - 1.0);
    double refl = 0.0;
    for (const auto& a : {riccati::scatter(p, ctx), xcheck::helmholtz_direct(p, ctx), linearx::dissect_and_solve(p, ctx),
                          amplitudes_from_matrix(slab::slab_matrix(2.25, 1.0, 0.0, 1.0, ctx))}) {
        refl = std::max({refl, std::abs(a.r_left), std::abs(a.r_right)});
    }
    double diag = 0.0;
    for (const auto& m : {evolution::evolve_transfer(p, ctx).matrix, xcheck::psi_two_component(p, ctx),
                          slab::slab_matrix(2.25, 1.0, 0.0, 1.0, ctx)}) {
        refl = std::max({refl, std::abs(m.m12 / m.m22), std::abs(m.m21 / m.m22)});
        diag = std::max({diag, std::abs(m.m11 - std::exp(kI * k * rho)), std::abs(m.m22 - std::exp(-kI * k * rho)),
                         std::abs(m.m12), std::abs(m.m21)});
    }
    report(3, refl < 1e-8 && diag < 1e-8 && std::abs(rad_to_deg(th) - 56.3099) < 1e-4,
           "Brewster TM eps=2.25 at " + sci(rad_to_deg(th)) + " deg: max |R| " + sci(refl) +
               " (< 1e-8), diag(e^{ik rho}, e^{-ik rho}) mismatch " + sci(diag) + " (< 1e-8)");
}

void criterion4() {
    double rr = 0.0, rl_min = std::numeric_limits<double>::infinity();
    std::vector<design::DesignSpec> specs = reference_designs();
    for (Complex z : {Complex(0.05), Complex(0.3, 0.1)}) {
        for (int n : {1, 2}) {
            for (double kse : {5.0, 20.0}) specs.push_back(design::sinusoidal_design(z, n, 1.0, kPi, kse));
        }
    }
    for (double kl : {0.5, 1.0, 3.0}) specs.push_back(design::parabolic_design(kl, 1.0, 20.0, kPi));
    for (const auto& s : specs) {
        const auto a = riccati::scatter(design::synthesize(s), s.context());
        rr = std::max(rr, std::abs(a.r_right));
        if (s.kappa_star() * s.q.ell >= 5.0 - 1e-12) rl_min = std::min(rl_min, std::abs(a.r_left));
    }
    report(4, rr < 1e-7 && rl_min > 1e-3,
           "designer round trip, " + std::to_string(specs.size()) + " sinusoidal/parabolic designs: max |R^r| " + sci(rr) +
               " (< 1e-7), min |R^l| at K*l >= 5 " + sci(rl_min) + " (> 1e-3)");
}

void criterion5() {
    double dmax = 0.0;
    for (double kl : {0.1, 0.5, 1.0, 3.0, 10.0, 50.0}) {
        const auto q = design::parabolic_q(kl, 1.0);
        dmax = std::max(dmax, std::abs(design::delta_numeric(q, 1.0) - q.delta(1.0)));
    }
    auto phi = [](double kl) { return design::designed_amplitudes(design::parabolic_design(kl, 1.0, 1.0, kPi)).phi; };
    const double p1 = phi(1.0), p01 = phi(0.1), p50 = phi(50.0);
    bool mono = true;
    double prev = -1.0;
    for (int i = 0; i < 60; ++i) {
        const double v = phi(0.01 * std::pow(5000.0, i / 59.0));
        mono &= v > prev;
        prev = v;
    }
    const double small_rel = std::abs(p01 - 0.01 / 6.0) / (0.01 / 6.0);
    report(5, dmax < 1e-10 && std::abs(p1 - 0.13918) < 1e-5 && small_rel < 0.05 && std::abs(p50 - 1.0) < 0.02 && mono,
           "closed-form Delta: max deviation " + sci(dmax) + " (< 1e-10); phi(1)=" + std::to_string(p1) +
               ", phi(0.1) off (0.1)^2/6 by " + sci(100.0 * small_rel) + "%, phi(50)=" + std::to_string(p50) +
               ", monotone on 60 points: " + (mono ? "yes" : "no"));
}

void criterion6() {
    double tdev = 0.0, unit = 0.0;
    std::size_t pt = 0;
    for (const auto& s : reference_designs()) {
        const bool real_q = s.q.family == "parabolic" || std::abs(s.q(0.3).imag()) == 0.0;
        if (!real_q) continue;
        const auto a = riccati::scatter(design::synthesize(s), s.context(), kTight);
        tdev = std::max({tdev, std::abs(std::abs(a.t) - 1.0), std::abs(std::abs(design::designed_amplitudes(s).t) - 1.0)});
        if (design::pt_symmetry_check(s)) {
            ++pt;
            const double tt = std::norm(a.t), rr = std::abs(a.r_left * a.r_right);
            unit = std::max(unit, std::min(std::abs(tt + rr - 1.0), std::abs(tt - rr - 1.0)));
        }
    }
    report(6, tdev < 1e-8 && unit < 1e-7 && pt >= 4,
           "real-Q designs: max ||T|-1| " + sci(tdev) + " (< 1e-8); " + std::to_string(pt) +
               " PT-symmetric designs: generalized unitarity residual " + sci(unit) + " (< 1e-7)");
}

void criterion7() {
    int violations = 0;
    double ratio = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double kl = 0.05 + (2.0 - 0.05) * i / 9.0;
        for (int j = 0; j < 10; ++j) {
            const double kse = 0.5 + (20.0 - 0.5) * j / 9.0;
            const auto d = design::designed_amplitudes(design::parabolic_design(kl, 1.0, kse, kPi));
            const double bound = 2.0 / 3.0 * kse * kl * kl;
            ratio = std::max(ratio, std::abs(d.r_left) / bound);
            if (std::abs(d.r_left) > bound) ++violations;
        }
    }
    report(7, violations == 0,
           "|R^l| <= (2/3) K*l (kappa l)^2 on 10x10 grid: " + std::to_string(violations) +
               " violations, max |R^l|/bound " + sci(ratio));
}

void criterion8(const std::vector<xcheck::SuiteCase>& smooth) {
    double worst = 0.0;
    for (const auto& s : reference_designs()) {
        const auto p = design::synthesize(s);
        const auto traj = riccati::solve_riccati(p, s.context());
        const Complex f = riccati::left_reflection_fourier(p, traj, s.context());
        worst = std::max({worst, std::abs(design::designed_amplitudes(s).r_left - f),
                          std::abs(riccati::final_amplitudes(traj, s.context()).r_left - f)});
    }
    for (const auto& c : smooth) {
        const auto traj = riccati::solve_riccati(c.profile, c.ctx);
        worst = std::max(worst, std::abs(riccati::final_amplitudes(traj, c.ctx).r_left -
                                         riccati::left_reflection_fourier(c.profile, traj, c.ctx)));
    }
    report(8, worst < 1e-6, "Fourier identity on 7 designs + 20 smooth profiles: max residual " + sci(worst) + " (< 1e-6)");
}

void criterion9(const std::vector<SlabCase>& slabs, const std::vector<xcheck::SuiteCase>& smooth) {
    double worst = 0.0;
    for (const auto& c : slabs) {
        const auto d = xcheck::helmholtz_both_sides(MediumProfile::homogeneous(c.eps, c.mu, c.a, c.ell), c.ctx);
        worst = std::max(worst, std::abs(d.t_left - d.t_right));
    }
    for (const auto& c : smooth) {
        const auto d = xcheck::helmholtz_both_sides(c.profile, c.ctx);
        worst = std::max(worst, std::abs(d.t_left - d.t_right));
    }
    report(9, worst < 1e-8, "reciprocity T^l = T^r over 70 profiles: max |T^l - T^r| " + sci(worst) + " (< 1e-8)");
}

void criterion10() {
    const std::vector<std::size_t> ns{100, 1000, 10000};
    const auto ramp = xcheck::convergence_study(linear_ramp(0.0, 1.0, {1.0, 1.0}, {2.0, 1.0}),
                                                WaveContext(5.0, 0.0, Polarization::TE), ns);
    const auto spec = design::parabolic_design(1.0, 1.0, 5.0, kPi);
    const auto par = xcheck::convergence_study(design::synthesize(spec), spec.context(), ns);
    const double s1 = ramp.slope.value_or(0.0), s2 = par.slope.value_or(0.0);
    report(10, std::abs(s1 + 2.0) <= 0.3 && std::abs(s2 + 2.0) <= 0.3,
           "slicing convergence order: linear ramp " + sci(s1) + ", parabolic design " + sci(s2) + " (-2 +- 0.3)");
}

void criterion11() {
    const double ell = 1.0;
    const auto z = oracle::gain_slab_zero(4.0, -0.4, ell, 8.0, 11.0);
    const double m22_closed = std::abs(slab::slab_matrix(z.eps, 1.0, 0.0, ell, WaveContext(z.k, 0.0, Polarization::TE)).m22);
    std::optional<double> x_blow;
    try {
        (void)riccati::solve_riccati(MediumProfile::homogeneous(z.eps, 1.0, 0.0, 1.3 * ell),
                                     WaveContext(z.k, 0.0, Polarization::TE));
    } catch (const SpectralSingularity& s) {
        x_blow = s.x_blow();
    }
    const double rel = x_blow ? std::abs(*x_blow - ell) / ell : 1.0;

    const auto dir = std::filesystem::temp_directory_path() / ("stratscat_accept_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "gain.yaml";
    std::ofstream(cfg) << "profile:\n  type: homogeneous\n  ell: " << cli::format_double(1.3 * ell) << "\n  eps_hat: ["
                       << cli::format_double(z.eps.real()) << ", " << cli::format_double(z.eps.imag()) << "]\nk: "
                       << cli::format_double(z.k) << "\nmethods: [riccati]\n";
    const auto err = dir / "stderr.txt";
    const int status = std::system((std::string(STRATSCAT_EXE) + " scatter --config " + cfg.string() + " >/dev/null 2>" +
                                    err.string())
                                       .c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::stringstream es;
    es << std::ifstream(err).rdbuf();
    const auto pos = es.str().find("x_blow=");
    const double cli_blow = pos == std::string::npos ? NAN : std::stod(es.str().substr(pos + 7));
    std::filesystem::remove_all(dir);
    const bool ok = m22_closed < 1e-10 && rel < 1e-3 && code == 3 && std::abs(cli_blow - ell) / ell < 1e-3;
    report(11, ok,
           "gain slab eps=" + sci(z.eps.real()) + sci(z.eps.imag()) + "i, k l=" + sci(z.k * ell) + ": |m22| " +
               sci(m22_closed) + ", Riccati blow-up at x/l=" + (x_blow ? std::to_string(*x_blow / ell) : "none") +
               " (rel " + sci(rel) + " < 1e-3), CLI exit " + std::to_string(code) + " with x_blow=" +
               std::to_string(cli_blow));
}

}  // namespace

int main() {
    const auto slabs = slab_suite(2024, 50);
    const auto smooth = xcheck::random_suite(12345, 20);
    guarded(1, [&] { criterion1(slabs); });
    guarded(2, [&] { criterion2(slabs, smooth); });
    guarded(3, criterion3);
    guarded(4, criterion4);
    guarded(5, criterion5);
    guarded(6, criterion6);
    guarded(7, criterion7);
    guarded(8, [&] { criterion8(smooth); });
    guarded(9, [&] { criterion9(slabs, smooth); });
    guarded(10, criterion10);
    guarded(11, criterion11);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
