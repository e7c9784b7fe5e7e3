#include "stable_lab/families.hpp"
#include "stable_lab/functionals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace stable_lab;

namespace {

constexpr double kPi = std::numbers::pi;

GridFunction sample(const char* spec, const Grid& g) { return DensityFamily::parse(spec).sample(g); }

}  // namespace

TEST(Functionals, GaussianEntropy) {
    const Grid g(30.0, 1 << 14);
    for (double v : {0.5, 1.0, 4.0}) {
        const auto f = DensityFamily::gaussian(v).sample(g);
        EXPECT_NEAR(entropy(f).value, 0.5 * std::log(2 * kPi * std::exp(1.0) * v), 1e-8);
    }
}

TEST(Functionals, LaplaceEntropy) {
    const Grid g(40.0, 1 << 14);
    EXPECT_NEAR(entropy(sample("laplace:1", g)).value, 1.0 + std::log(2.0), 1e-6);
}

TEST(Functionals, CauchyEntropyWithTailCorrection) {
    const Grid g(2000.0, 1 << 18);
    const auto v = entropy(sample("cauchy:1", g));
    // The truncated integral misses roughly 1e-3 of entropy; the correction recovers it.
    EXPECT_GT(std::abs(v.value - std::log(4 * kPi)), 1e-4);
    EXPECT_NEAR(v.corrected(), std::log(4 * kPi), 2e-5);
}

TEST(Functionals, GaussianRelativeEntropy) {
    const Grid g(30.0, 1 << 14);
    const double a = 1.0, b = 2.5;
    const auto d = relative_entropy(DensityFamily::gaussian(a).sample(g), DensityFamily::gaussian(b).sample(g));
    EXPECT_NEAR(d.value, 0.5 * (a / b - 1.0 - std::log(a / b)), 1e-8);
    EXPECT_NEAR(relative_entropy(DensityFamily::gaussian(a).sample(g), DensityFamily::gaussian(a).sample(g)).value,
                0.0, 1e-14);
}

TEST(Functionals, CauchyRelativeEntropyAndEnergy) {
    const Grid g(4000.0, 1 << 18);
    const double gam = 0.5, s = 1.0;
    const auto f = sample("cauchy:0.5", g);
    EXPECT_NEAR(relative_entropy(f, DensityFamily::cauchy(s).sample(g)).corrected(),
                std::log((gam + s) * (gam + s) / (4 * gam * s)), 1e-5);
    EXPECT_NEAR(energy(f, StableLaw(1.0, s)).corrected(), std::log(kPi / s) + 2 * std::log(s + gam), 1e-5);
}

TEST(Functionals, EnergyOfStableLawIsItsEntropy) {
    const StableLaw law(2.0, 0.5);
    const Grid g(recommended_half_width(law, 1e-10), 1 << 14);
    const auto f = density(law, g);
    EXPECT_NEAR(energy(f, law).value, entropy(f).value, 1e-10);
    EXPECT_NEAR(energy(f, f).value, entropy(f).value, 1e-10);
}

TEST(Functionals, AbsoluteContinuityViolation) {
    const Grid g(30.0, 1024);
    const auto wide = DensityFamily::gaussian(4.0).sample(g);
    const auto narrow = DensityFamily::gaussian(0.01).sample(g);
    EXPECT_THROW(relative_entropy(wide, narrow), Error);
}

TEST(Functionals, ThetaFunctionals) {
    const Grid g(30.0, 1 << 14);
    const double v = 2.0;
    const auto f = DensityFamily::gaussian(v).sample(g);
    EXPECT_NEAR(theta_functional(f, Theta::quadratic).value, 1.0 / (2.0 * std::sqrt(kPi * v)), 1e-10);
    EXPECT_NEAR(theta_functional(f, Theta::plog).value, -entropy(f).value, 1e-10);
    EXPECT_EQ(parse_theta("quadratic"), Theta::quadratic);
    EXPECT_EQ(parse_theta("plog"), Theta::plog);
    EXPECT_THROW(parse_theta("cubic"), Error);
}

TEST(Functionals, StandardizedFisherInformation) {
    const Grid g(40.0, 1 << 15);
    // Zero exactly at the Gaussian.
    EXPECT_NEAR(standardized_fisher_information(DensityFamily::gaussian(1.5).sample(g), 1.5).value, 0.0, 1e-8);
    // Laplace(b): I = 1/b^2, variance 2b^2, so J = 2 b^2 / b^2 - 1 = 1.
    EXPECT_NEAR(standardized_fisher_information(sample("laplace:1", g), 2.0).value, 1.0, 1e-2);
    // Mismatched variance is rejected.
    EXPECT_THROW(standardized_fisher_information(DensityFamily::gaussian(1.5).sample(g), 3.0), Error);
}

TEST(Functionals, SecondMoment) {
    const Grid g(30.0, 1 << 14);
    EXPECT_NEAR(second_moment(sample("gaussian-mixture:0.5@0.5+2@0.5", g)), 1.25, 1e-9);
}

TEST(Functionals, GaussianMutualInformation) {
    const double v = 1.0, s = 1.0, t = 0.4;
    const StableLaw law(2.0, s);
    const Grid g(30.0, 1 << 14);
    const auto path = make_path(DensityFamily::gaussian(v).sample(g), law, t);
    const double vt = (1 - t) * v + 2 * s * t;
    EXPECT_NEAR(mutual_information(path).value, 0.5 * std::log(vt / (2 * s * t)), 1e-6);
}
