#pragma once

// Interpolation path X_t = (1-t)^(1/alpha) X + t^(1/alpha) Z between an input
// X and the stable law Z, with the MMSE score, Fisher score and conditional
// expectation estimators at a fixed t.

#include "stable_lab/grid.hpp"
#include "stable_lab/stable_law.hpp"

#include <functional>
#include <string>
#include <vector>

namespace stable_lab {

/// Score evaluation is restricted to points where h_t exceeds this fraction of its peak.
inline constexpr double kMaskThreshold = 1e-12;

struct InterpolationPath {
    GridFunction f;      // density of X
    StableLaw law;
    double t;
    GridFunction f_t;    // density of (1-t)^(1/alpha) X, zero beyond (1-t)^(1/alpha) L
    GridFunction g_st;   // density of t^(1/alpha) Z, i.e. g_{st}
    GridFunction h_t;    // f_t * g_st
    GridFunction g_s;    // reference stable density g_s on the same grid
    /// f_t * (y g_st)(x) = E[(X_t - (1-t)^(1/alpha) X) 1{X_t in dx}] / dx.
    GridFunction tilted;
    /// Estimated mass of X beyond the grid (power-law fit of f near +-L).
    double input_tail_mass = 0.0;
    std::vector<std::string> warnings;

    double contraction() const;  // (1-t)^(1/alpha)
    bool endpoint() const noexcept { return t == 1.0; }
};

/// Path for an input density given on the grid. f must be symmetric unless
/// `symmetrize` is set; f_t is obtained by rescale_density.
InterpolationPath make_path(const GridFunction& f, const StableLaw& law, double t, bool symmetrize = false);

/// Path for an input density known pointwise; f_t is sampled exactly as
/// f(x/c)/c (truncated at c L, consistent with the grid-based input).
InterpolationPath make_path(const std::function<double(double)>& f, const Grid& grid,
                            const StableLaw& law, double t);

/// Path from samples of X and of (1-t)^(1/alpha) X, the latter already zero
/// beyond (1-t)^(1/alpha) L. Both must be symmetric.
InterpolationPath make_path(const GridFunction& f, const GridFunction& f_t, const StableLaw& law, double t);

struct ScoreSet {
    GridFunction mmse_score;           // rho^M
    GridFunction fisher_score;         // h_t' / h_t
    GridFunction standardized_mmse;    // rho^M + x/s
    GridFunction standardized_fisher;  // rho^F_{h_t} - rho^F_{g_s}
    std::vector<bool> valid_mask;      // h_t > kMaskThreshold * peak
    /// Subset of valid_mask where neither FFT round-off nor the truncation of X
    /// at the grid edge can move rho^M by more than kTrustedScoreError.
    std::vector<bool> trusted_mask;
    /// Set at t = 1, where rho^M is the stable score -x/s by definition.
    bool analytic_endpoint = false;
    std::vector<std::string> warnings;

    /// Mass of h_t covered by valid_mask.
    double mask_mass = 0.0;
};

inline constexpr double kTrustedScoreError = 1e-4;

ScoreSet mmse_score(const InterpolationPath& path);

/// h'/h computed as the central difference of log h (one-sided at the ends).
GridFunction log_derivative(const GridFunction& h);

struct Estimators {
    GridFunction x_hat;  // E[X | X_t = w]
    GridFunction z_hat;  // E[Z | X_t = w]
    std::vector<bool> mask;
};

/// X^(w) = (w + s t rho^M(w)) / (1-t)^(1/alpha), Z^(w) = -s t^(1 - 1/alpha) rho^M(w);
/// zero outside the valid mask. Requires t in (0, 1).
Estimators estimators(const InterpolationPath& path, const ScoreSet& scores);
Estimators estimators(const InterpolationPath& path);

struct MmseValue {
    double value = 0.0;          // E (X - X^)^2
    double noise_value = 0.0;    // E (Z - Z^)^2, by an independent quadrature
    double mask_coverage = 0.0;  // h_t mass covered by the valid mask
    std::vector<std::string> warnings;
};

/// Double trapezoid quadrature of E(X - X^(X_t))^2 (and of the noise error),
/// expanded into convolutions. At t = 1 returns the grid variance of X.
MmseValue mmse_value(const InterpolationPath& path);

}  // namespace stable_lab
