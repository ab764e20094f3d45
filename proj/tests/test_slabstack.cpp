#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "strat/slabstack.hpp"

using namespace strat;
using namespace strat::slab;

namespace {

double diff(const TransferMatrix2& m, const oracle::Mat& o) {
    return std::max({std::abs(m.m11 - o[0][0]), std::abs(m.m12 - o[0][1]), std::abs(m.m21 - o[1][0]),
                     std::abs(m.m22 - o[1][1])});
}

TransferMatrix2 random_slab(std::mt19937_64& rng, double x0, double ell, const WaveContext& ctx) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return slab_matrix({0.5 + 3.0 * u(rng), 0.3 * u(rng)}, {0.6 + 1.5 * u(rng), 0.1 * u(rng)}, x0, ell, ctx);
}

}  // namespace

TEST(SlabMatrix, VacuumIsIdentity) {
    const WaveContext ctx(2.3, 0.4, Polarization::TE);
    for (double x0 : {-3.0, 0.0, 1.7}) {
        EXPECT_LT(max_abs_diff(slab_matrix(1.0, 1.0, x0, 2.5, ctx), TransferMatrix2::identity()), 1e-14);
    }
}

TEST(SlabMatrix, HalfWaveSlabIsTransparent) {
    const double k = kPi / 1.5;  // ñkℓ = π with ñ = 1.5, ℓ = 1
    const WaveContext ctx(k, 0.0, Polarization::TE);
    const auto m = slab_matrix(2.25, 1.0, 0.0, 1.0, ctx);
    EXPECT_LT(std::abs(m.m12), 1e-14);
    EXPECT_LT(std::abs(m.m21), 1e-14);
    const auto a = amplitudes_from_matrix(m);
    EXPECT_LT(std::abs(a.r_left), 1e-14);
    EXPECT_NEAR(std::abs(a.t), 1.0, 1e-14);
}

TEST(SlabMatrix, TeTmNormalIncidenceFlipSign) {
    const auto te = amplitudes_from_matrix(slab_matrix(2.25, 1.0, 0.0, 1.0, WaveContext(1.3, 0.0, Polarization::TE)));
    const auto tm = amplitudes_from_matrix(slab_matrix(2.25, 1.0, 0.0, 1.0, WaveContext(1.3, 0.0, Polarization::TM)));
    EXPECT_NEAR(std::abs(te.r_left), std::abs(tm.r_left), 1e-14);
    EXPECT_NEAR(std::abs(te.r_left + tm.r_left), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(te.t - tm.t), 0.0, 1e-14);
}

TEST(SlabMatrix, MatchesCharacteristicMatrixOracle) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const Complex eps(0.2 + 4.0 * u(rng), 0.5 * (u(rng) - 0.3));
        const Complex mu(0.3 + 2.0 * u(rng), 0.2 * (u(rng) - 0.3));
        const double x0 = 4.0 * (u(rng) - 0.5);
        const double ell = 0.1 + 2.0 * u(rng);
        const double th = deg_to_rad(170.0 * (u(rng) - 0.5));
        const bool te = i % 2 == 0;
        const WaveContext ctx(0.2 + 10.0 * u(rng), th, te ? Polarization::TE : Polarization::TM);
        const auto m = slab_matrix(eps, mu, x0, ell, ctx);
        const auto o = oracle::slab(eps, mu, x0, ell, ctx.k(), th, te);
        const double scale = std::max(1.0, std::abs(o.m[1][1]));
        EXPECT_LT(diff(m, o.m), 1e-11 * scale * scale) << i;
        EXPECT_LT(m.det_drift(), 1e-12 * scale * scale) << i;
    }
}

TEST(SlabMatrix, NearZeroEffectiveIndexIsRegular) {
    // n² = sin²θ makes ñ = 0: the closed form must go through its limit.
    const double th = deg_to_rad(30.0);
    const double s2 = std::sin(th) * std::sin(th);
    const WaveContext ctx(2.0, th, Polarization::TE);
    const auto m0 = slab_matrix(s2, 1.0, 0.0, 1.0, ctx);
    const auto m1 = slab_matrix(s2 + 1e-9, 1.0, 0.0, 1.0, ctx);
    EXPECT_TRUE(std::isfinite(std::abs(m0.m11)));
    EXPECT_LT(max_abs_diff(m0, m1), 1e-7);
    const auto o = oracle::slab(s2, 1.0, 0.0, 1.0, 2.0, th, true);
    EXPECT_LT(diff(m0, o.m), 1e-10);
}

TEST(SlabMatrix, ZeroAlphaThrows) {
    EXPECT_THROW((void)slab_matrix(2.0, 0.0, 0.0, 1.0, WaveContext(1.0, 0.0, Polarization::TE)), ZeroAlpha);
    EXPECT_THROW((void)slab_matrix(0.0, 1.0, 0.0, 1.0, WaveContext(1.0, 0.0, Polarization::TM)), ZeroAlpha);
}

TEST(Compose, Trivial) {
    const std::vector<TransferMatrix2> ii{TransferMatrix2::identity(), TransferMatrix2::identity()};
    EXPECT_LT(max_abs_diff(compose(ii), TransferMatrix2::identity()), 1e-16);
    const auto m = slab_matrix({2.0, 0.1}, 1.0, 0.0, 1.0, WaveContext(1.0, 0.3, Polarization::TE));
    const std::vector<TransferMatrix2> one{m};
    EXPECT_LT(max_abs_diff(compose(one), m), 1e-16);
}

TEST(Compose, SplitSlabEqualsWhole) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const Complex eps(0.5 + 3.0 * u(rng), 0.2 * u(rng));
        const Complex mu(0.7 + u(rng), 0.05 * u(rng));
        const WaveContext ctx(0.5 + 5.0 * u(rng), 1.2 * (u(rng) - 0.5), i % 2 ? Polarization::TE : Polarization::TM);
        const double split = u(rng);
        const auto left = slab_matrix(eps, mu, 0.0, split, ctx);
        const auto right = slab_matrix(eps, mu, split, 1.0 - split, ctx);
        const std::vector<TransferMatrix2> ms{right, left};
        EXPECT_LT(max_abs_diff(compose(ms), slab_matrix(eps, mu, 0.0, 1.0, ctx)), 1e-12);
    }
}

TEST(Compose, Associative) {
    std::mt19937_64 rng(9);
    const WaveContext ctx(2.0, 0.2, Polarization::TM);
    const auto a = random_slab(rng, 0.0, 0.4, ctx);
    const auto b = random_slab(rng, 0.4, 0.3, ctx);
    const auto c = random_slab(rng, 0.7, 0.5, ctx);
    EXPECT_LT(max_abs_diff((c * b) * a, c * (b * a)), 1e-13);
}

TEST(Compose, StackDissectionInvariance) {
    const std::vector<Layer> layers{{0.3, {2.0, 0.1}, 1.0}, {0.5, {1.3, 0.0}, {1.2, 0.02}}, {0.2, 4.0, 1.0}};
    const auto p = MediumProfile::stack(0.0, layers);
    const WaveContext ctx(3.0, 0.5, Polarization::TE);
    const auto whole = stack_matrix(p, ctx);
    const auto o = oracle::layers({{layers[0].eps, layers[0].mu, 0.3}, {layers[1].eps, layers[1].mu, 0.5},
                                   {layers[2].eps, layers[2].mu, 0.2}},
                                  0.0, 3.0, 0.5, true);
    EXPECT_LT(diff(whole, o.m), 1e-12);
    for (std::size_t n : {3u, 7u, 50u}) {
        EXPECT_LT(max_abs_diff(piecewise_slices(p, ctx, n), whole), 1e-12) << n;
    }
}

TEST(SliceAndMultiply, HomogeneousIsExact) {
    const auto p = MediumProfile::homogeneous({2.5, 0.2}, {1.1, 0.0}, 0.3, 1.2);
    const WaveContext ctx(4.0, -0.6, Polarization::TM);
    const auto exact = slab_matrix({2.5, 0.2}, {1.1, 0.0}, 0.3, 1.2, ctx);
    for (std::size_t n : {1u, 10u, 257u}) EXPECT_LT(max_abs_diff(slice_and_multiply(p, ctx, n), exact), 1e-11);
}

TEST(SliceAndMultiply, VacuumIsIdentity) {
    const auto p = MediumProfile::vacuum(0.0, 2.0);
    EXPECT_LT(max_abs_diff(slice_and_multiply(p, WaveContext(3.0, 0.1, Polarization::TE), 100),
                           TransferMatrix2::identity()),
              1e-13);
}

TEST(SliceAndMultiply, LinearRampSecondOrder) {
    const auto p = linear_ramp(0.0, 1.0, {1.0, 1.0}, {2.0, 1.0});
    const WaveContext ctx(5.0, 0.0, Polarization::TE);
    const auto m1 = slice_and_multiply(p, ctx, 100);
    const auto m2 = slice_and_multiply(p, ctx, 200);
    const auto m4 = slice_and_multiply(p, ctx, 400);
    // Richardson: successive differences shrink by ~4 for a second-order method
    const double ratio = max_abs_diff(m1, m2) / max_abs_diff(m2, m4);
    EXPECT_NEAR(ratio, 4.0, 0.2);
}

TEST(Amplitudes, FromMatrixExamples) {
    const auto id = amplitudes_from_matrix(TransferMatrix2::identity());
    EXPECT_EQ(id.r_left, Complex(0.0));
    EXPECT_EQ(id.r_right, Complex(0.0));
    EXPECT_EQ(id.t, Complex(1.0));

    const Complex ph = std::exp(kI * 0.7);
    const auto d = amplitudes_from_matrix({ph, 0.0, 0.0, 1.0 / ph});
    EXPECT_LT(std::abs(d.t - ph), 1e-15);
    EXPECT_EQ(d.r_left, Complex(0.0));

    EXPECT_THROW((void)amplitudes_from_matrix({1.0, 1.0, -1.0, 0.0}), SpectralSingularity);
}

TEST(Amplitudes, RoundTrip) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Amplitudes a{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng) + 2.0, u(rng)}};
        const auto b = amplitudes_from_matrix(matrix_from_amplitudes(a));
        EXPECT_LT(std::abs(a.r_left - b.r_left) + std::abs(a.r_right - b.r_right) + std::abs(a.t - b.t), 1e-14);
    }
}

TEST(Amplitudes, MatchOracleAmplitudes) {
    const WaveContext ctx(2.0, deg_to_rad(20.0), Polarization::TM);
    const auto a = amplitudes_from_matrix(slab_matrix(2.25, 1.1, 0.3, 1.0, ctx));
    const auto o = oracle::slab(2.25, 1.1, 0.3, 1.0, 2.0, deg_to_rad(20.0), false);
    EXPECT_LT(std::abs(a.r_left - o.rl), 1e-13);
    EXPECT_LT(std::abs(a.r_right - o.rr), 1e-13);
    EXPECT_LT(std::abs(a.t - o.t), 1e-13);
}

TEST(Brewster, Angles) {
    EXPECT_NEAR(rad_to_deg(brewster_angle(1.0)), 45.0, 1e-12);
    EXPECT_NEAR(rad_to_deg(brewster_angle(2.25)), 56.3099, 1e-4);
    EXPECT_NEAR(rad_to_deg(brewster_angle(3.0)), 60.0, 1e-12);
    EXPECT_THROW((void)brewster_angle(0.0), InvalidPermittivity);
    EXPECT_THROW((void)brewster_angle(-1.0), InvalidPermittivity);
}

TEST(Brewster, SlabIsReflectionlessWithDiagonalMatrix) {
    const double th = brewster_angle(2.25);
    const WaveContext ctx(3.0, th, Polarization::TM);
    const auto m = slab_matrix(2.25, 1.0, 0.0, 1.0, ctx);
    const double rho = std::cos(th) * (2.25 - 1.0);
    EXPECT_LT(std::abs(m.m12), 1e-14);
    EXPECT_LT(std::abs(m.m21), 1e-14);
    EXPECT_LT(std::abs(m.m11 - std::exp(kI * 3.0 * rho)), 1e-13);
    EXPECT_LT(std::abs(m.m22 - std::exp(-kI * 3.0 * rho)), 1e-13);
}

TEST(Reflectionless, GeneralDiagonalCondition) {
    // (n²−1)/(α²−1) = c real in (0, 1] with cos²θ = c gives 𝔪₋ = 0.
    const Complex alpha(1.6, 0.2);
    const double c = 0.4;
    const Complex n2 = 1.0 + c * (alpha * alpha - 1.0);
    const double th = std::acos(std::sqrt(c));
    const Complex beta = n2 / alpha;
    const WaveContext ctx(2.5, th, Polarization::TE);
    const auto m = slab_matrix(beta, alpha, 0.0, 1.3, ctx);
    const Complex rho = std::cos(th) * (alpha - 1.0) * 1.3;
    EXPECT_LT(std::abs(m.m12), 1e-13);
    EXPECT_LT(std::abs(m.m21), 1e-13);
    EXPECT_LT(std::abs(m.m11 - std::exp(kI * 2.5 * rho)), 1e-13);
}

TEST(SlabMatrix, UnitDeterminantRandom) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const WaveContext ctx(0.1 + 20.0 * u(rng), 1.5 * (u(rng) - 0.5), i % 2 ? Polarization::TE : Polarization::TM);
        const auto m = random_slab(rng, 0.0, 1.0, ctx);
        const double s = std::max({1.0, std::abs(m.m11), std::abs(m.m22)});
        EXPECT_LT(m.det_drift(), 1e-12 * s * s);
    }
}
