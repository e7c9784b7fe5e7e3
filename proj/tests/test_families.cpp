#include "stable_lab/families.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace stable_lab;

namespace {

double two_sided_tail(const DensityFamily& f, double L) {
    boost::math::quadrature::exp_sinh<double> q;
    return 2.0 * q.integrate([&](double x) { return f(x); }, L, INFINITY);
}

double total_mass(const DensityFamily& f) {
    boost::math::quadrature::exp_sinh<double> q;
    boost::math::quadrature::tanh_sinh<double> inner;
    return 2.0 * (inner.integrate([&](double x) { return f(x); }, 0.0, 1.0) +
                  q.integrate([&](double x) { return f(x); }, 1.0, INFINITY));
}

const char* kSpecs[] = {"cauchy:0.5", "gaussian:2", "gaussian-mixture:0.5@0.5+2@0.5", "laplace:1",
                        "stable:1.5,1", "two-point:1,0.05"};

// Quadrature to infinity over the pointwise stable density is too slow; its
// mass and tails are covered by the stable-law tests.
const char* kClosedFormSpecs[] = {"cauchy:0.5", "gaussian:2", "gaussian-mixture:0.5@0.5+2@0.5", "laplace:1",
                                  "two-point:1,0.05"};

}  // namespace

TEST(Families, SpecRoundTrip) {
    for (const char* spec : kSpecs) {
        const auto f = DensityFamily::parse(spec);
        EXPECT_EQ(DensityFamily::parse(f.spec()).params(), f.params()) << spec;
        EXPECT_EQ(DensityFamily::parse(f.spec()).kind(), f.kind());
    }
}

TEST(Families, RejectsInvalidSpecs) {
    for (const char* bad : {"cauchy", "cauchy:", "cauchy:-1", "cauchy:abc", "gaussian:0", "weibull:1",
                            "stable:1.5", "stable:0.3,1", "gaussian-mixture:1@0.5", "gaussian-mixture:1@0.5+2",
                            "two-point:1", "laplace:nan"})
        EXPECT_THROW(DensityFamily::parse(bad), Error) << bad;
}

TEST(Families, UnitMass) {
    for (const char* spec : kClosedFormSpecs) {
        const auto f = DensityFamily::parse(spec);
        EXPECT_NEAR(total_mass(f), 1.0, 1e-7) << spec;
    }
}

TEST(Families, VarianceAgainstQuadrature) {
    boost::math::quadrature::exp_sinh<double> q;
    for (const char* spec : {"gaussian:2", "gaussian-mixture:0.5@0.5+2@0.5", "laplace:1", "two-point:1,0.05"}) {
        const auto f = DensityFamily::parse(spec);
        const double m2 = 2.0 * q.integrate([&](double x) { return x * x * f(x); }, 0.0, INFINITY);
        ASSERT_TRUE(f.variance());
        EXPECT_NEAR(*f.variance(), m2, 1e-8) << spec;
    }
    EXPECT_FALSE(DensityFamily::parse("cauchy:1").variance());
    EXPECT_FALSE(DensityFamily::parse("stable:1.5,1").variance());
    EXPECT_DOUBLE_EQ(*DensityFamily::parse("stable:2,0.5").variance(), 1.0);
}

TEST(Families, HalfWidthHonoursBudget) {
    for (const char* spec : kClosedFormSpecs) {
        const auto f = DensityFamily::parse(spec);
        for (double budget : {1e-3, 1e-6}) {
            const double L = f.half_width_for(budget);
            EXPECT_LE(two_sided_tail(f, L), budget * (1.0 + 1e-6)) << spec << " " << budget;
        }
    }
}

TEST(Families, ScaledIsDensityOfCX) {
    for (const char* spec : kSpecs) {
        const auto f = DensityFamily::parse(spec);
        const double c = 0.6;
        const auto g = f.scaled(c);
        for (double x : {0.0, 0.3, 2.5})
            EXPECT_NEAR(g(x), f(x / c) / c, 1e-10 * (1.0 + f(x / c) / c)) << spec << " x=" << x;
    }
}

TEST(Families, SampleMatchesPointwise) {
    const Grid g(100.0, 8192);
    for (const char* spec : kSpecs) {
        const auto f = DensityFamily::parse(spec);
        const auto s = f.sample(g);
        for (std::size_t k = 0; k < g.size(); k += 301) EXPECT_NEAR(s[k], f(g.x(k)), 1e-10) << spec;
    }
}
