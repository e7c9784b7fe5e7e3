#include "stable_lab/verifications.hpp"

#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace stable_lab;
using stable_lab::testing::comparison;
using stable_lab::testing::input;
using stable_lab::testing::metric;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Condexp, AllScalesAndExponents) {
    for (double alpha : {1.0, 1.5, 2.0})
        for (double u : {0.5, 1.0})
            for (double v : {0.5, 2.0}) {
                const auto r = condexp_check(alpha, u, v, default_condexp_points());
                EXPECT_TRUE(r.pass) << alpha << " " << u << " " << v;
                EXPECT_LE(r.residual_norm, 1e-4);
                EXPECT_FALSE(r.grid_used);
            }
}

TEST(Condexp, CauchyPointValue) {
    // u = v = 1, x = 1: (x/2) g_2(1) = (1/2) * 2 / (pi (4 + 1)) = 1/(5 pi)
    const auto r = condexp_check(1.0, 1.0, 1.0, {1.0});
    EXPECT_NEAR(r.comparisons.front().lhs, 1.0 / (5.0 * kPi), 1e-5);
    EXPECT_NEAR(r.comparisons.front().rhs, 1.0 / (5.0 * kPi), 1e-15);
}

TEST(ScoreProperties, StableInputIsLinear) {
    for (double alpha : {1.0, 1.5, 2.0}) {
        const StableLaw law(alpha, 1.0);
        const auto spec = alpha == 1.0 ? std::string("stable:1,1")
                                       : "stable:" + std::to_string(alpha) + ",1";
        const auto r = score_properties_check(input(spec), law, {0.25, 0.5, 0.75});
        EXPECT_TRUE(r.pass) << alpha;
    }
}

TEST(ScoreProperties, ClosedFormCauchyPath) {
    EXPECT_TRUE(score_properties_check(input("cauchy:2"), StableLaw(1, 1), {0.25, 0.5, 0.75}).pass);
}

TEST(Pde, ClosedFormAndMixtureCases) {
    const auto cauchy = pde_residual(input("cauchy:2"), StableLaw(1, 1), 0.5);
    EXPECT_TRUE(cauchy.pass);
    EXPECT_LE(comparison(cauchy, "sup |dh/dt - rhs| / normalizer").residual, 5e-3);
    const auto mixture = pde_residual(input("gaussian-mixture:0.5@0.5+2@0.5"), StableLaw(2, 1), 0.5);
    EXPECT_TRUE(mixture.pass);
    const auto stable = pde_residual(input("stable:1.5,1"), StableLaw(1.5, 1), 0.5);
    EXPECT_TRUE(stable.pass);
    EXPECT_LE(comparison(stable, "sup |dh/dt - rhs| / normalizer").residual, 1e-3);
}

TEST(Pde, FaultsAreDetected) {
    CheckOptions opt;
    opt.fault = Fault::pde_prefactor;
    EXPECT_FALSE(pde_residual(input("cauchy:0.5"), StableLaw(1, 2), 0.5, opt).pass);
    opt.fault = Fault::score_sign;
    EXPECT_FALSE(pde_residual(input("cauchy:2"), StableLaw(1, 1), 0.5, opt).pass);
}

TEST(Pde, GridInput) {
    // A CSV-style input on a grid goes through the interpolating path.
    const StableLaw law(2.0, 1.0);
    const Grid g(30.0, 1 << 14);
    const InputDensity samples(DensityFamily::parse("gaussian-mixture:0.5@0.5+2@0.5").sample(g), "samples");
    EXPECT_TRUE(pde_residual(samples, law, 0.5).pass);
}

TEST(Pde, RejectsEndpoints) {
    EXPECT_THROW(pde_residual(input("cauchy:2"), StableLaw(1, 1), 0.0), Error);
    EXPECT_THROW(pde_residual(input("cauchy:2"), StableLaw(1, 1), 1.0), Error);
}

TEST(Heat, VarianceConvention) {
    const auto r = heat_equation_check(input("laplace:1"), 2.0, 0.5);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.convention, Convention::variance);
}

TEST(DeBruijn, CauchyClosedForm) {
    const auto reports = debruijn_check(input("cauchy:0.5"), StableLaw(1, 1), {0.25, 0.5, 0.75});
    ASSERT_EQ(reports.size(), 3u);
    for (const auto& r : reports) {
        EXPECT_TRUE(r.pass);
        const double t = metric(r, "t");
        const double gt = (1 + t) / 2;
        // D = log((1 + g)^2 / (4 g)), dg/dt = 1/2
        const double exact = 0.5 * (2.0 / (1.0 + gt) - 1.0 / gt);
        EXPECT_NEAR(metric(r, "closed_form_dD/dt"), exact, 1e-12);
        const auto& c = comparison(r, "dD/dt vs closed form");
        EXPECT_LE(std::abs(c.lhs - c.rhs), std::max(1e-4, 1e-2 * std::abs(c.lhs)));
    }
}

TEST(DeBruijn, SignFaultIsDetected) {
    CheckOptions opt;
    opt.fault = Fault::debruijn_sign;
    EXPECT_FALSE(debruijn_check(input("cauchy:0.5"), StableLaw(1, 1), {0.5}, opt).front().pass);
}

TEST(DeBruijn, GaussianConvention) {
    for (const auto& r : gaussian_debruijn_check(input("laplace:1"), 2.0, {0.25, 0.5, 0.75})) {
        EXPECT_TRUE(r.pass);
        const auto& c = comparison(r, "dD/dt vs -J/(2(1-t))");
        EXPECT_LE(std::abs(c.lhs - c.rhs), 1e-3);
    }
}

TEST(EntropyEnergy, PrefactorResolutionAtSEqualsTwo) {
    const auto r = entropy_energy_check(input("cauchy:0.5"), StableLaw(1, 2), 0.5);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(comparison(r, "dD/dt = dLambda/dt - dH/dt").residual, 1e-6);
    EXPECT_GE(metric(r, "prefactor_residual_without_s"), 10.0 * metric(r, "prefactor_residual_with_s"));
    EXPECT_TRUE(comparison(r, "dLambda/dt (prefactor 1/(alpha(1-t)))").informational);
}

TEST(EntropyEnergy, GeneralStableLaw) {
    const auto r = entropy_energy_check(input("laplace:1"), StableLaw(1.5, 1), 0.5);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(comparison(r, "dD/dt = dLambda/dt - dH/dt").residual, 1e-6);
}

TEST(MutualInfo, StableInput) {
    const auto r = mutual_info_check(input("stable:1.5,1"), StableLaw(1.5, 1), 0.5);
    EXPECT_TRUE(r.pass);
    const auto& c = comparison(r, "dI/dt vs -1/(alpha t)");
    EXPECT_NEAR(c.rhs, -1.0 / 0.75, 1e-15);
    EXPECT_LE(std::abs(c.lhs - c.rhs), 1e-3);
}

TEST(MutualInfo, GaussianInput) {
    EXPECT_TRUE(mutual_info_check(input("gaussian:1"), StableLaw(2, 1), 0.5).pass);
    EXPECT_TRUE(mutual_info_check(input("laplace:1"), StableLaw(1.5, 1), 0.5).pass);
}

TEST(GaussianMmse, StandardNormalAtUnitSnr) {
    const auto reports = gaussian_mmse_check(input("gaussian:1"), {0.5});
    ASSERT_EQ(reports.size(), 1u);
    const auto& r = reports.front();
    EXPECT_TRUE(r.pass);
    EXPECT_DOUBLE_EQ(metric(r, "snr"), 1.0);
    EXPECT_NEAR(metric(r, "mmse"), 0.5, 1e-3);
    EXPECT_NEAR(metric(r, "dI/dsnr"), 0.25, 1e-3);
}

TEST(GaussianMmse, NonGaussianInput) {
    for (const auto& r : gaussian_mmse_check(input("two-point:1,0.05"), {0.3, 0.6})) EXPECT_TRUE(r.pass);
}

TEST(Richardson, SecondOrderConvergence) {
    for (auto q : {FdQuantity::relative_entropy, FdQuantity::entropy, FdQuantity::energy}) {
        const auto r = richardson_check(q, input("cauchy:0.5"), StableLaw(1, 1), 0.5);
        EXPECT_TRUE(r.pass);
        EXPECT_GE(metric(r, "ratio"), 3.5);
        EXPECT_LE(metric(r, "ratio"), 4.5);
    }
    EXPECT_TRUE(richardson_check(FdQuantity::density, input("laplace:1"), StableLaw(1.5, 1), 0.5).pass);
    EXPECT_TRUE(richardson_check(FdQuantity::mutual_information, input("gaussian:1"), StableLaw(2, 1), 0.5).pass);
}

TEST(Parsing, FaultsAndQuantities) {
    EXPECT_EQ(parse_fault("none"), Fault::none);
    EXPECT_EQ(parse_fault("debruijn-sign"), Fault::debruijn_sign);
    EXPECT_THROW(parse_fault("everything"), Error);
    EXPECT_EQ(parse_fd_quantity("relent"), FdQuantity::relative_entropy);
    EXPECT_EQ(parse_fd_quantity("mutual-information"), FdQuantity::mutual_information);
    EXPECT_THROW(parse_fd_quantity("volume"), Error);
    EXPECT_STREQ(to_string(Convention::characteristic), "characteristic-function");
    EXPECT_STREQ(to_string(Convention::variance), "gaussian-variance");
}

TEST(Determinism, RepeatedRunsAgree) {
    const auto a = pde_residual(input("cauchy:2"), StableLaw(1, 1), 0.5);
    const auto b = pde_residual(input("cauchy:2"), StableLaw(1, 1), 0.5);
    EXPECT_EQ(a.residual_norm, b.residual_norm);
    EXPECT_EQ(a.comparisons.size(), b.comparisons.size());
}

TEST(ChooseGrid, EnvironmentFixesSize) {
    setenv("STABLE_LAB_GRID_N", "32768", 1);
    EXPECT_EQ(choose_grid(input("cauchy:0.5"), StableLaw(1, 1), {}).size(), 32768u);
    unsetenv("STABLE_LAB_GRID_N");
    const Grid g = choose_grid(input("cauchy:0.5"), StableLaw(1, 1), {});
    // covers the tail budget of both laws
    EXPECT_GE(g.half_width(), recommended_half_width(StableLaw(1, 1), 1e-4));
    EXPECT_LE(g.spacing(), 0.5 / 16);
}
