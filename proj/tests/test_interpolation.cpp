#include "stable_lab/families.hpp"
#include "stable_lab/interpolation.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace stable_lab;

namespace {

double sup_on(const std::vector<bool>& mask, const Grid& g, auto&& err) {
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (mask[k]) worst = std::max(worst, std::abs(err(k)));
    return worst;
}

// Path with (1-t)^(1/alpha) X sampled exactly rather than by interpolation.
InterpolationPath exact_path(const DensityFamily& in, const Grid& g, const StableLaw& law, double t) {
    const double c = std::pow(1.0 - t, 1.0 / law.alpha());
    const auto f_t = in.scaled(c).sample(g).transformed(
        [&](double x, double v) { return std::abs(x) <= c * g.half_width() * (1 + 1e-12) ? v : 0.0; });
    return make_path(in.sample(g), f_t, law, t);
}

}  // namespace

TEST(Interpolation, PathOfStableInputStaysStable) {
    for (double alpha : {1.0, 1.5, 2.0}) {
        const StableLaw law(alpha, 1.0);
        const Grid g(recommended_half_width(law, 1e-4), 1 << 16);
        const auto path = exact_path(DensityFamily::stable(law), g, law, 0.5);
        const auto scores = mmse_score(path);
        // h_t = g_s and rho^M = -x/s
        const double peak = path.g_s.max();
        EXPECT_LT(sup_on(scores.trusted_mask, g, [&](std::size_t k) { return path.h_t[k] - path.g_s[k]; }),
                  1e-3 * peak);
        EXPECT_LT(sup_on(scores.trusted_mask, g, [&](std::size_t k) { return scores.standardized_mmse[k]; }), 2e-3)
            << alpha;
        EXPECT_NEAR(integrate(path.h_t), 1.0, 1e-3);
    }
}

TEST(Interpolation, CauchyInputHasClosedFormScores) {
    // X ~ Cauchy(g), Z ~ Cauchy(s): h_t = Cauchy(g_t), g_t = (1-t) g + t s, rho^M = -x / g_t.
    const double gam = 2.0, s = 1.0, t = 0.5, gt = (1 - t) * gam + t * s;
    const StableLaw law(1.0, s);
    const Grid g(4000.0, 1 << 18);
    const auto path = exact_path(DensityFamily::cauchy(gam), g, law, t);
    const auto scores = mmse_score(path);
    const auto exact = DensityFamily::cauchy(gt);
    EXPECT_LT(sup_on(scores.trusted_mask, g, [&](std::size_t k) { return path.h_t[k] - exact(g.x(k)); }), 1e-5);
    EXPECT_LT(sup_on(scores.trusted_mask, g, [&](std::size_t k) { return scores.mmse_score[k] + g.x(k) / gt; }),
              2e-3);
    // Fisher score of Cauchy(g_t): -2x / (g_t^2 + x^2)
    EXPECT_LT(sup_on(scores.trusted_mask, g,
                     [&](std::size_t k) {
                         const double x = g.x(k);
                         return scores.fisher_score[k] + 2 * x / (gt * gt + x * x);
                     }),
              1e-3);
}

TEST(Interpolation, GaussianInputScoresAndEstimators) {
    // alpha = 2: Z has variance 2s, h_t = N(0, V_t), V_t = (1-t) v + 2 s t.
    // E[sqrt(t) Z | X_t = x] = 2 s t x / V_t, so rho^M = -2x / V_t = 2 rho^F.
    const double v = 1.0, s = 0.5, t = 0.3, vt = (1 - t) * v + 2 * s * t;
    const StableLaw law(2.0, s);
    const Grid g(20.0, 1 << 13);
    const auto path = exact_path(DensityFamily::gaussian(v), g, law, t);
    const auto scores = mmse_score(path);
    EXPECT_LT(sup_on(scores.trusted_mask, g, [&](std::size_t k) { return scores.mmse_score[k] + 2 * g.x(k) / vt; }),
              1e-6);
    EXPECT_LT(sup_on(scores.trusted_mask, g, [&](std::size_t k) { return scores.fisher_score[k] + g.x(k) / vt; }),
              1e-4);

    const auto est = estimators(path, scores);
    const double c = std::sqrt(1 - t), r = std::sqrt(t);
    EXPECT_LT(sup_on(est.mask, g, [&](std::size_t k) { return c * est.x_hat[k] + r * est.z_hat[k] - g.x(k); }),
              1e-10);
    // E[X | X_t = w] = c v w / V_t
    EXPECT_LT(sup_on(scores.trusted_mask, g, [&](std::size_t k) { return est.x_hat[k] - c * v * g.x(k) / vt; }), 1e-5);

    const auto m = mmse_value(path);
    EXPECT_NEAR(m.value, v * 2 * s * t / vt, 1e-6);
    // Z has variance 2s here: E(Z - Z^)^2 = 2s (1-t) v / V_t
    EXPECT_NEAR(m.noise_value, 2 * s * (1 - t) * v / vt, 1e-6);
}

TEST(Interpolation, GridInputIsRescaledByInterpolation) {
    // Without a closed form for cX the path rescales the samples; the error is
    // second order in the spacing.
    const double v = 1.0, s = 0.5, t = 0.3, vt = (1 - t) * v + 2 * s * t;
    const StableLaw law(2.0, s);
    auto err = [&](std::size_t n) {
        const Grid g(20.0, n);
        const auto path = make_path(DensityFamily::gaussian(v).sample(g), law, t);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(path.h_t[k] - DensityFamily::gaussian(vt)(g.x(k))));
        return worst;
    };
    EXPECT_LT(err(1 << 13), 1e-5);
    EXPECT_GT(err(1 << 12) / err(1 << 13), 3.5);
}

TEST(Interpolation, EndpointIsAnalytic) {
    const StableLaw law(1.5, 1.0);
    const Grid g(recommended_half_width(law, 1e-3), 1 << 14);
    const auto path = make_path(DensityFamily::laplace(1.0).sample(g), law, 1.0);
    EXPECT_TRUE(path.endpoint());
    const auto scores = mmse_score(path);
    EXPECT_TRUE(scores.analytic_endpoint);
    for (std::size_t k = 0; k < g.size(); k += 127)
        if (scores.valid_mask[k]) EXPECT_NEAR(scores.mmse_score[k], -g.x(k), 1e-12);
}

TEST(Interpolation, RejectsAsymmetricInputUnlessSymmetrized) {
    const StableLaw law(2.0, 1.0);
    const Grid g(20.0, 1024);
    const auto f = GridFunction::sample(g, [](double x) { return DensityFamily::two_point(1, 0.3)(x - 0.2); });
    EXPECT_THROW(make_path(f, law, 0.5), Error);
    EXPECT_NO_THROW(make_path(f, law, 0.5, true));
}

TEST(Interpolation, RejectsBadTimes) {
    const StableLaw law(2.0, 1.0);
    const Grid g(20.0, 1024);
    const auto f = DensityFamily::gaussian(1).sample(g);
    EXPECT_THROW(make_path(f, law, 0.0), Error);
    EXPECT_THROW(make_path(f, law, 1.5), Error);
    EXPECT_THROW(make_path(f, law, NAN), Error);
}
