#pragma once

// Information functionals on grid densities (natural logarithms throughout).

#include "stable_lab/grid.hpp"
#include "stable_lab/interpolation.hpp"
#include "stable_lab/stable_law.hpp"

#include <string>

namespace stable_lab {

struct FunctionalValue {
    double value = 0.0;
    /// Estimated contribution of the tails beyond the grid, omitted from value
    /// (signed: value + truncation_estimate approximates the untruncated functional).
    double truncation_estimate = 0.0;
    double corrected() const noexcept { return value + truncation_estimate; }
    /// Mass of the density covered by the points that entered the integral.
    double mask_mass = 1.0;
};

/// -int f log f, integrand taken as 0 where f is at the density floor.
FunctionalValue entropy(const GridFunction& f);

/// int f log(f / g). Throws "absolute continuity on grid violated" when g is
/// at the floor somewhere f is not.
FunctionalValue relative_entropy(const GridFunction& f, const GridFunction& g);

/// sigma^2 int f (rho_f + x / sigma^2)^2 over the score mask. The supplied
/// variance must match the grid variance of f within 1%.
FunctionalValue standardized_fisher_information(const GridFunction& f, double variance);

/// Lambda = -int f log g_s.
FunctionalValue energy(const GridFunction& f, const StableLaw& law);

/// -int f log g for a reference density g already sampled on the grid.
FunctionalValue energy(const GridFunction& f, const GridFunction& g);

/// I(X; X_t) = H(h_t) - log(t) / alpha - H(g_s).
FunctionalValue mutual_information(const InterpolationPath& path);

enum class Theta { quadratic, plog };
Theta parse_theta(const std::string& name);

/// int Theta(f) with Theta(u) = u^2 or u log u.
FunctionalValue theta_functional(const GridFunction& f, Theta theta);

/// Grid variance int x^2 f (f is assumed centered).
double second_moment(const GridFunction& f);

}  // namespace stable_lab
