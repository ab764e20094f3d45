#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "strat/designer.hpp"
#include "strat/evolution.hpp"
#include "strat/slabstack.hpp"
#include "strat/xcheck.hpp"

using namespace strat;
using namespace strat::xcheck;

namespace {

double amp_diff(const Amplitudes& a, const Amplitudes& b) {
    return std::max({std::abs(a.r_left - b.r_left), std::abs(a.r_right - b.r_right), std::abs(a.t - b.t)});
}

}  // namespace

TEST(Helmholtz, Vacuum) {
    const auto a = helmholtz_direct(MediumProfile::vacuum(0.0, 1.0), WaveContext(2.0, 0.3, Polarization::TE));
    EXPECT_LT(std::abs(a.r_left) + std::abs(a.r_right) + std::abs(a.t - 1.0), 1e-9);
}

TEST(Helmholtz, SlabMatchesOracle) {
    const double th = deg_to_rad(20.0);
    const auto a = helmholtz_direct(MediumProfile::homogeneous(2.25, 1.1, 0.0, 1.0), WaveContext(2.0, th, Polarization::TM));
    const auto o = oracle::slab(2.25, 1.1, 0.0, 1.0, 2.0, th, false);
    EXPECT_LT(amp_diff(a, {o.rl, o.rr, o.t}), 1e-8);
}

TEST(Helmholtz, Brewster) {
    const auto a = helmholtz_direct(MediumProfile::homogeneous(2.25, 1.0, 0.0, 1.0),
                                    WaveContext(2.0, slab::brewster_angle(2.25), Polarization::TM));
    EXPECT_LT(std::abs(a.r_left), 1e-8);
    EXPECT_LT(std::abs(a.r_right), 1e-8);
}

TEST(Helmholtz, Reciprocity) {
    const auto p = linear_ramp(0.0, 1.0, {{2.0, 0.3}, {1.2, 0.0}}, {{1.1, 0.0}, {0.9, 0.05}});
    const auto d = helmholtz_both_sides(p, WaveContext(5.0, 0.7, Polarization::TM));
    EXPECT_LT(std::abs(d.t_left - d.t_right), 1e-8);
}

TEST(Psi, VacuumIsIdentity) {
    const auto m = psi_two_component(MediumProfile::vacuum(0.0, 1.0), WaveContext(2.0, 0.3, Polarization::TE));
    EXPECT_LT(max_abs_diff(m, TransferMatrix2::identity()), 1e-9);
}

TEST(Psi, SlabMatchesOracle) {
    const WaveContext ctx(3.0, -0.4, Polarization::TE);
    const auto m = psi_two_component(MediumProfile::homogeneous({2.0, 0.2}, 1.3, 0.1, 1.0), ctx);
    const auto o = oracle::slab({2.0, 0.2}, 1.3, 0.1, 1.0, 3.0, -0.4, true);
    EXPECT_LT(std::abs(m.m11 - o.m[0][0]), 1e-6);
    EXPECT_LT(std::abs(m.m12 - o.m[0][1]), 1e-6);
    EXPECT_LT(std::abs(m.m21 - o.m[1][0]), 1e-6);
    EXPECT_LT(std::abs(m.m22 - o.m[1][1]), 1e-6);
}

TEST(Psi, MatchesEvolutionOnRandomProfile) {
    std::mt19937_64 rng(19);
    const auto p = random_smooth_profile(rng, 0.0, 1.0, true);
    const WaveContext ctx(4.0, 0.3, Polarization::TM);
    const Tolerance tol{1e-10, 1e-12};
    const auto a = psi_two_component(p, ctx, tol);
    const auto b = evolution::evolve_transfer(p, ctx, tol).matrix;
    EXPECT_LT(max_abs_diff(a, b), 1e-8);
}

TEST(Methods, Names) {
    for (auto m : all_methods()) EXPECT_EQ(method_from_string(to_string(m)), m);
    EXPECT_EQ(all_methods().size(), 6u);
    EXPECT_THROW((void)method_from_string("magic"), InvalidArgument);
}

TEST(CrossValidate, HomogeneousAllMethods) {
    const auto p = MediumProfile::homogeneous({2.2, 0.05}, {1.1, 0.0}, 0.0, 1.0);
    const auto rep = cross_validate(p, WaveContext(3.0, 0.4, Polarization::TE), all_methods());
    EXPECT_EQ(rep.results.size(), all_methods().size());
    for (std::size_t i = 0; i < rep.results.size(); ++i) {
        EXPECT_EQ(rep.results[i].method, all_methods()[i]);
        EXPECT_TRUE(rep.results[i].ok()) << rep.results[i].error;
        for (std::size_t j = 0; j < rep.results.size(); ++j) EXPECT_EQ(rep.deviations[i][j], rep.deviations[j][i]);
    }
    EXPECT_LT(rep.max_deviation, 1e-5);
    EXPECT_TRUE(rep.passed);
}

TEST(CrossValidate, VacuumHasNoDeviation) {
    const auto rep = cross_validate(MediumProfile::vacuum(0.0, 1.0), WaveContext(1.0, 0.0, Polarization::TE), all_methods());
    EXPECT_LT(rep.max_deviation, 1e-9);
    EXPECT_TRUE(rep.passed);
}

TEST(CrossValidate, NeedsTwoMethods) {
    EXPECT_THROW((void)cross_validate(MediumProfile::vacuum(), WaveContext(1.0, 0.0, Polarization::TE), {Method::Riccati}),
                 InvalidArgument);
}

TEST(CrossValidate, PTSymmetricUnitarity) {
    const auto spec = design::parabolic_design(1.0, 1.0, 5.0, kPi);
    const auto rep = cross_validate(design::synthesize(spec), spec.context(), {Method::Riccati, Method::Evolution});
    EXPECT_TRUE(rep.pt_symmetric);
    ASSERT_TRUE(rep.unitarity_residual.has_value());
    EXPECT_LT(*rep.unitarity_residual, 1e-7);
}

TEST(CrossValidate, GainSlabNearSingularity) {
    const auto z = oracle::gain_slab_zero(4.0, -0.4, 1.0, 8.0, 11.0);
    const auto rep = cross_validate(MediumProfile::homogeneous(z.eps, 1.0, 0.0, 1.0), WaveContext(z.k, 0.0, Polarization::TE),
                                    {Method::Riccati, Method::SlabStack});
    const auto& ric = rep.results[0];
    const auto& sl = rep.results[1];
    EXPECT_FALSE(ric.ok());
    EXPECT_NE(ric.error.find("SpectralSingularity"), std::string::npos) << ric.error;
    ASSERT_TRUE(sl.abs_m22.has_value());
    EXPECT_LT(*sl.abs_m22, 1e-6);
    EXPECT_FALSE(rep.passed);
}

TEST(RandomSuite, Reproducible) {
    const auto a = random_suite(5, 4);
    const auto b = random_suite(5, 4);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].label, b[i].label);
        EXPECT_EQ(a[i].ctx.k(), b[i].ctx.k());
        EXPECT_EQ(a[i].profile.at(0.5 * (a[i].profile.a() + a[i].profile.end())).eps,
                  b[i].profile.at(0.5 * (b[i].profile.a() + b[i].profile.end())).eps);
    }
}

TEST(RandomSuite, ProfilesAreBoundedAndVacuumAtEdges) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_smooth_profile(rng, -0.5, 1.5, i % 2 == 1);
        EXPECT_LT(std::abs(p.at(-0.5).eps - 1.0), 1e-12);
        EXPECT_LT(std::abs(p.at(1.0).mu - 1.0), 1e-12);
        for (double x = -0.5; x <= 1.0; x += 0.01) {
            EXPECT_LE(std::abs(p.at(x).eps - 1.0), 1.5 + 1e-12);
            EXPECT_LE(std::abs(p.at(x).mu - 1.0), 1.5 + 1e-12);
            EXPECT_GT(p.at(x).eps.real(), 0.2);
            EXPECT_GE(p.at(x).eps.imag(), 0.0);
        }
    }
}

TEST(RandomSuite, AgreementReciprocityDeterminant) {
    const auto suite = random_suite(12345, 20);
    bool has_magnetic_tm = false;
    for (const auto& c : suite) {
        const auto rep = cross_validate(c.profile, c.ctx, all_methods());
        EXPECT_LT(rep.max_deviation, 1e-5) << c.label;
        ASSERT_TRUE(rep.reciprocity.has_value());
        EXPECT_LT(*rep.reciprocity, 1e-8) << c.label;
        for (const auto& r : rep.results) {
            if (r.method == Method::Evolution || r.method == Method::Psi) {
                ASSERT_TRUE(r.det_drift.has_value());
                EXPECT_LT(*r.det_drift, 1e-9) << c.label << ' ' << to_string(r.method);
            }
        }
        EXPECT_TRUE(rep.passed) << c.label;
        has_magnetic_tm |= c.label.find("magnetic-TM") != std::string::npos;
    }
    EXPECT_TRUE(has_magnetic_tm);
}

TEST(PTCheck, Profiles) {
    EXPECT_TRUE(is_pt_symmetric(MediumProfile::homogeneous(2.0, 1.0, 0.0, 1.0)));
    EXPECT_FALSE(is_pt_symmetric(MediumProfile::homogeneous({2.0, 0.1}, 1.0, 0.0, 1.0)));
    EXPECT_FALSE(is_pt_symmetric(linear_ramp(0.0, 1.0, {2.0, 1.0}, {3.0, 1.0})));
}

TEST(Convergence, HomogeneousExact) {
    const auto s = convergence_study(MediumProfile::homogeneous(2.0, 1.0, 0.0, 1.0), WaveContext(3.0, 0.0, Polarization::TE),
                                     {10, 100});
    for (const auto& r : s.rows) EXPECT_LT(r.error, 1e-9);
}

TEST(Convergence, SecondOrderSlopes) {
    const std::vector<std::size_t> ns{100, 1000, 10000};
    const auto ramp = convergence_study(linear_ramp(0.0, 1.0, {1.0, 1.0}, {2.0, 1.0}),
                                        WaveContext(5.0, 0.0, Polarization::TE), ns);
    ASSERT_TRUE(ramp.slope.has_value());
    EXPECT_NEAR(*ramp.slope, -2.0, 0.3);
    const auto spec = design::parabolic_design(1.0, 1.0, 5.0, kPi);
    const auto par = convergence_study(design::synthesize(spec), spec.context(), ns);
    ASSERT_TRUE(par.slope.has_value());
    EXPECT_NEAR(*par.slope, -2.0, 0.3);
}

TEST(Convergence, RejectsUnsortedList) {
    EXPECT_THROW((void)convergence_study(MediumProfile::vacuum(), WaveContext(1.0, 0.0, Polarization::TE), {100, 10}),
                 InvalidArgument);
}
