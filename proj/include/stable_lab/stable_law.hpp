#pragma once

// Symmetric alpha-stable laws with characteristic function exp(-s |theta|^alpha).

#include "stable_lab/grid.hpp"

#include <functional>
#include <vector>

namespace stable_lab {

/// Largest admissible tail mass outside [-L, L] for density().
inline constexpr double kDensityTailBudget = 1e-3;

/// Law with characteristic function exp(-s |theta|^alpha), 0.5 < alpha <= 2, s > 0.
///
/// Under this convention alpha = 2 is the Gaussian of variance 2s and alpha = 1
/// the Cauchy law of scale s. Exponents in (0.5, 1) are accepted but flagged as
/// reduced accuracy; exponents <= 0.5 are rejected.
class StableLaw {
public:
    StableLaw(double alpha, double s);

    double alpha() const noexcept { return alpha_; }
    double s() const noexcept { return s_; }
    /// Natural length scale s^(1/alpha).
    double width() const noexcept;
    bool reduced_accuracy() const noexcept { return alpha_ < 1.0; }
    bool is_cauchy() const noexcept { return alpha_ == 1.0; }
    bool is_gaussian() const noexcept { return alpha_ == 2.0; }

    /// Same exponent, scale parameter multiplied by `factor`.
    StableLaw scaled(double factor) const { return {alpha_, s_ * factor}; }

    bool operator==(const StableLaw&) const = default;

private:
    double alpha_;
    double s_;
};

/// exp(-s |theta|^alpha).
double cf(const StableLaw& law, double theta);

/// Density at a single point. Closed forms for alpha in {1, 2}; otherwise a
/// Poisson-summed cosine transform with the periodization error removed.
double density_at(const StableLaw& law, double x);

/// Density sampled on the grid, clamped below at kDensityFloor.
/// Throws "tail mass exceeds budget" when the grid is too narrow for the law.
GridFunction density(const StableLaw& law, const Grid& grid);

/// Density sampled on the grid by spectral inversion regardless of alpha.
GridFunction density_spectral(const StableLaw& law, const Grid& grid);

/// Density at offset + m * spacing, m = first .. first + count - 1, clamped at kDensityFloor.
std::vector<double> density_on_lattice(const StableLaw& law, double offset, long first, std::size_t count,
                                       double spacing);

/// Density sampled on the lattice m * spacing, |m| <= n - 1.
LatticeKernel density_kernel(const StableLaw& law, const Grid& grid);

/// y -> y g(y) on the grid.
GridFunction tilted_density(const StableLaw& law, const Grid& grid);

/// y -> y g(y) on the lattice.
LatticeKernel tilted_kernel(const StableLaw& law, const Grid& grid);

/// Density of the standard law (s = 1) at zero: Gamma(1 + 1/alpha) / pi.
double scaling_constant(double alpha);

/// Half-width L with two-sided tail mass beyond L below `tail_budget`.
double recommended_half_width(const StableLaw& law, double tail_budget);

/// Two-sided tail mass beyond L: exact for alpha in {1, 2}, otherwise the
/// conservative bound used by recommended_half_width.
double tail_mass_bound(const StableLaw& law, double half_width);

/// Leading terms of the large-|x| expansion of the density (zero for alpha = 2).
double asymptotic_density(const StableLaw& law, double x);

/// asymptotic_density as a callable with the series coefficients precomputed.
std::function<double(double)> asymptotic_tail(const StableLaw& law);

/// Values of the density with even characteristic function `cf` at the points
/// offset + m * spacing, m = first .. first + count - 1, by a discrete cosine
/// transform evaluated with an FFT. `tail`, when given, is the large-|x|
/// behaviour of the density and is used to subtract the periodization error.
/// `width` is a characteristic length of the law.
std::vector<double> invert_even_cf(const std::function<double(double)>& cf, double spacing,
                                   double offset, long first, std::size_t count, double width,
                                   const std::function<double(double)>& tail = {});

}  // namespace stable_lab
