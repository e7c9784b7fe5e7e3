#pragma once

// Named input densities parsed from compact specs, e.g. "cauchy:0.5",
// "gaussian:1", "gaussian-mixture:0.5@0.5+2@0.5" (variances@weights),
// "laplace:1", "stable:1.5,1", "two-point:1,0.05" (+-mu, component variance).

#include "stable_lab/grid.hpp"
#include "stable_lab/stable_law.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stable_lab {

class DensityFamily {
public:
    enum class Kind { cauchy, gaussian, gaussian_mixture, laplace, stable, two_point };

    static DensityFamily cauchy(double scale);
    static DensityFamily gaussian(double variance);
    /// Centered mixture; each component is (variance, weight). Weights must sum to 1.
    static DensityFamily gaussian_mixture(std::vector<std::pair<double, double>> components);
    /// Density exp(-|x| / b) / (2b); variance 2 b^2.
    static DensityFamily laplace(double b);
    static DensityFamily stable(const StableLaw& law);
    /// (N(-mu, v) + N(mu, v)) / 2.
    static DensityFamily two_point(double mu, double variance);

    static DensityFamily parse(const std::string& spec);

    Kind kind() const noexcept { return kind_; }
    std::string spec() const;

    /// Pointwise density.
    double operator()(double x) const;
    /// Finite variance, if any.
    std::optional<double> variance() const;
    /// Smallest characteristic length (e.g. Cauchy scale, smallest standard deviation).
    double scale() const;
    /// Half-width beyond which the two-sided tail mass is below `tail_budget`.
    double half_width_for(double tail_budget) const;
    /// Same family stretched by c > 0: density of cX.
    DensityFamily scaled(double c) const;
    /// Mixture components (variance, weight) for the Gaussian-type families
    /// (gaussian, gaussian-mixture, two-point as (variance, weight, location)).
    struct GaussianComponent {
        double variance;
        double weight;
        double location;
    };
    std::vector<GaussianComponent> gaussian_components() const;
    const std::vector<double>& params() const noexcept { return params_; }

    /// Sampled on the grid and clamped below at kDensityFloor.
    GridFunction sample(const Grid& grid) const;

private:
    DensityFamily(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

    Kind kind_;
    std::vector<double> params_;
};

}  // namespace stable_lab
