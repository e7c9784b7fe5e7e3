#include "stable_lab/grid.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace stable_lab;

namespace {

double normal_pdf(double var, double x) {
    return boost::math::pdf(boost::math::normal(0.0, std::sqrt(var)), x);
}

GridFunction gaussian(const Grid& g, double var) {
    return GridFunction::sample(g, [var](double x) { return normal_pdf(var, x); });
}

}  // namespace

TEST(Grid, SpacingAndEndpoints) {
    const Grid g(4.0, 1024);
    EXPECT_DOUBLE_EQ(g.spacing(), 8.0 / 1023.0);
    EXPECT_DOUBLE_EQ(g.x(0), -4.0);
    EXPECT_NEAR(g.x(1023), 4.0, 1e-12);
}

TEST(Grid, RejectsBadParameters) {
    EXPECT_THROW(Grid(1.0, 1000), Error);
    EXPECT_THROW(Grid(1.0, 1), Error);
    EXPECT_THROW(Grid(0.0, 1024), Error);
    EXPECT_THROW(Grid(-1.0, 1024), Error);
    EXPECT_THROW(Grid(INFINITY, 1024), Error);
}

TEST(GridFunction, RejectsNonFinite) {
    const Grid g(1.0, 4);
    EXPECT_THROW(GridFunction(g, {0, NAN, 0, 0}), Error);
    EXPECT_THROW(GridFunction(g, {0, 0, 0}), Error);
}

TEST(Integrate, MatchesGaussKronrodOnSmoothIntegrand) {
    const Grid g(6.0, 4096);
    auto fn = [](double x) { return std::exp(-x * x) * std::cos(3.0 * x) * (1.0 + x * x); };
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, -6.0, 6.0, 15, 1e-14);
    EXPECT_NEAR(integrate(GridFunction::sample(g, fn)), oracle, 1e-6);
}

TEST(Convolve, GaussiansAddVariances) {
    const Grid g(20.0, 4096);
    const auto c = convolve(gaussian(g, 1.0), gaussian(g, 2.0));
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(c[k] - normal_pdf(3.0, g.x(k))));
    EXPECT_LT(worst, 1e-6);
}

TEST(Convolve, LatticeKernelIsExactlyAligned) {
    const Grid g(20.0, 2048);
    const auto k = LatticeKernel::sample(g, [](double y) { return normal_pdf(0.5, y); });
    const auto c = convolve(gaussian(g, 1.0), k);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(c[i] - normal_pdf(1.5, g.x(i))));
    EXPECT_LT(worst, 1e-6);

    // convolve_many agrees with repeated single convolutions.
    const auto k2 = LatticeKernel::sample(g, [](double y) { return y * normal_pdf(0.5, y); });
    const std::vector<LatticeKernel> ks{k, k2};
    const auto many = convolve_many(gaussian(g, 1.0), ks);
    const auto single = convolve(gaussian(g, 1.0), k2);
    for (std::size_t i = 0; i < g.size(); i += 97) {
        EXPECT_NEAR(many[0][i], c[i], 1e-14);
        EXPECT_NEAR(many[1][i], single[i], 1e-14);
    }
}

TEST(Convolve, DifferentGridsAreRejected) {
    EXPECT_THROW(convolve(gaussian(Grid(5, 64), 1), gaussian(Grid(6, 64), 1)), Error);
}

TEST(Differentiate, SecondOrderAccurate) {
    auto err = [](std::size_t n) {
        const Grid g(3.0, n);
        const auto d = differentiate_x(GridFunction::sample(g, [](double x) { return std::sin(x); }));
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(d[k] - std::cos(g.x(k))));
        return worst;
    };
    const double ratio = err(256) / err(512);
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.6);
}

TEST(RescaleDensity, PreservesMassAndMatchesScaledGaussian) {
    const Grid g(30.0, 8192);
    const auto r = rescale_density(gaussian(g, 1.0), 2.0);
    EXPECT_NEAR(integrate(r), 1.0, 1e-6);
    for (double x : {0.0, 1.3, -4.0}) EXPECT_NEAR(r.at(x), normal_pdf(4.0, x), 1e-5);
    EXPECT_THROW(rescale_density(r, 0.0), Error);
}

TEST(RequireDensity, ChecksSignAndMass) {
    const Grid g(10.0, 1024);
    EXPECT_NO_THROW(require_density(gaussian(g, 1.0)));
    EXPECT_THROW(require_density(gaussian(g, 1.0).transformed([](double, double v) { return 2 * v; })), Error);
    EXPECT_THROW(require_density(gaussian(g, 1.0).transformed([](double x, double v) { return x > 5 ? -1e-3 : v; })),
                 Error);
}

TEST(Symmetrized, IsEven) {
    const Grid g(5.0, 256);
    const auto f = GridFunction::sample(g, [](double x) { return std::exp(-(x - 0.3) * (x - 0.3)); });
    EXPECT_GT(f.asymmetry(), 1e-2);
    EXPECT_LT(symmetrized(f).asymmetry(), 1e-15);
}

TEST(TailFit, RecoversCauchyExponentAndMass) {
    const Grid g(200.0, 1 << 15);
    const auto f = GridFunction::sample(g, [](double x) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); });
    const auto fits = fit_tails(f);
    for (const auto& fit : fits) {
        EXPECT_NEAR(fit.exponent, 2.0, 1e-3);
        // exact one-sided mass beyond 200
        EXPECT_NEAR(fit.mass, 0.5 - std::atan(200.0) / std::numbers::pi, 1e-6);
    }
    const auto est = estimate_tail(f);
    EXPECT_NEAR(est.mass + integrate(f), 1.0, 1e-5);
}

TEST(Csv, RoundTrip) {
    const Grid g(3.0, 64);
    const auto f = gaussian(g, 0.7);
    std::stringstream ss;
    write_csv(ss, f);
    const auto back = read_csv(ss);
    EXPECT_EQ(back.grid().size(), g.size());
    EXPECT_NEAR(back.grid().half_width(), 3.0, 1e-14);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_DOUBLE_EQ(back[k], f[k]);
}

TEST(Csv, RejectsMalformedInput) {
    std::stringstream a("x,value\n0,1\n");
    EXPECT_THROW(read_csv(a), Error);
    std::stringstream b("x,value\n-1,0\n0.5,1\n1,0\n");
    EXPECT_THROW(read_csv(b), Error);
    std::stringstream c("x,value\n-1;0\n1;0\n");
    EXPECT_THROW(read_csv(c), Error);
}

TEST(Grid, EnvironmentOverride) {
    setenv("STABLE_LAB_GRID_N", "2048", 1);
    EXPECT_EQ(Grid::default_size(), 2048u);
    setenv("STABLE_LAB_GRID_N", "1000", 1);
    EXPECT_EQ(Grid::default_size(), kDefaultGridSize);
    unsetenv("STABLE_LAB_GRID_N");
    EXPECT_FALSE(Grid::size_override());
}
