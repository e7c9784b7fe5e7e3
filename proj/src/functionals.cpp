#include "stable_lab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stable_lab {
namespace {

bool above_floor(double v) { return v > kDensityFloor; }

double masked_mass(const GridFunction& f, const std::vector<bool>& mask) {
    std::vector<double> v(f.size(), 0.0);
    for (std::size_t k = 0; k < f.size(); ++k)
        if (mask[k]) v[k] = f[k];
    const double total = integrate(f);
    return total > 0.0 ? std::clamp(integrate(f.grid(), v) / total, 0.0, 1.0) : 0.0;
}

// Tail contribution of -int f log g beyond the grid, with both tails modelled
// as power laws from the edge: -log g(x) ~ -log g(L) + p_g log(x / L).
double cross_tail(const GridFunction& f, const GridFunction& g) {
    const auto ff = fit_tails(f);
    const auto gf = fit_tails(g);
    double sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        if (ff[i].mass == 0.0) continue;
        const double log_edge = std::log(std::max(gf[i].edge, kDensityFloor));
        sum += ff[i].mass * (-log_edge + gf[i].exponent / (ff[i].exponent - 1.0));
    }
    return sum;
}

}  // namespace

FunctionalValue entropy(const GridFunction& f) {
    std::vector<bool> mask(f.size());
    const auto integrand = f.transformed([](double, double v) { return above_floor(v) ? -v * std::log(v) : 0.0; });
    for (std::size_t k = 0; k < f.size(); ++k) mask[k] = above_floor(f[k]);
    return {integrate(integrand), estimate_tail(f).entropy, masked_mass(f, mask)};
}

FunctionalValue relative_entropy(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid())) throw Error("relative_entropy: densities live on different grids");
    std::vector<double> v(f.size(), 0.0);
    std::vector<bool> mask(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        mask[k] = above_floor(f[k]);
        if (!mask[k]) continue;
        if (!above_floor(g[k])) {
            std::ostringstream os;
            os << "absolute continuity on grid violated at x = " << f.grid().x(k);
            throw Error(os.str());
        }
        v[k] = f[k] * std::log(f[k] / g[k]);
    }
    const double tail = cross_tail(f, g) - cross_tail(f, f);
    return {integrate(f.grid(), v), tail, masked_mass(f, mask)};
}

double second_moment(const GridFunction& f) {
    return integrate(f.transformed([](double x, double v) { return x * x * v; }));
}

FunctionalValue standardized_fisher_information(const GridFunction& f, double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance)) throw Error("variance must be positive");
    const double grid_variance = second_moment(f);
    if (std::abs(grid_variance - variance) > 0.01 * variance) {
        std::ostringstream os;
        os << "variance mismatch: supplied " << variance << ", density has " << grid_variance;
        throw Error(os.str());
    }
    const GridFunction rho = log_derivative(f);
    const double peak = f.max();
    std::vector<double> v(f.size(), 0.0);
    std::vector<bool> mask(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        mask[k] = f[k] > kMaskThreshold * peak;
        if (!mask[k]) continue;
        const double r = rho[k] + f.grid().x(k) / variance;
        v[k] = f[k] * r * r;
    }
    // Beyond the grid the standardized score is unknown; bound its weight by
    // the tail mass times the Gaussian part (x / sigma^2)^2 at the edge.
    const double L = f.grid().half_width();
    const double tail = variance * estimate_tail(f).mass * (L / variance) * (L / variance);
    return {variance * integrate(f.grid(), v), tail, masked_mass(f, mask)};
}

FunctionalValue energy(const GridFunction& f, const StableLaw& law) { return energy(f, density(law, f.grid())); }

FunctionalValue energy(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid())) throw Error("energy: densities live on different grids");
    std::vector<double> v(f.size(), 0.0);
    std::vector<bool> mask(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        mask[k] = above_floor(f[k]);
        if (mask[k]) v[k] = -f[k] * std::log(g[k]);
    }
    return {integrate(f.grid(), v), cross_tail(f, g), masked_mass(f, mask)};
}

FunctionalValue mutual_information(const InterpolationPath& path) {
    if (path.endpoint()) return {0.0, 0.0, 1.0};
    const FunctionalValue h = entropy(path.h_t);
    const FunctionalValue g = entropy(path.g_s);
    return {h.value - std::log(path.t) / path.law.alpha() - g.value,
            h.truncation_estimate - g.truncation_estimate, h.mask_mass};
}

Theta parse_theta(const std::string& name) {
    if (name == "quadratic") return Theta::quadratic;
    if (name == "plog") return Theta::plog;
    throw Error("unknown theta functional '" + name + "' (expected quadratic or plog)");
}

FunctionalValue theta_functional(const GridFunction& f, Theta theta) {
    if (theta == Theta::plog) {
        FunctionalValue h = entropy(f);
        h.value = -h.value;
        return h;
    }
    const auto fits = fit_tails(f);
    double tail = 0.0;
    for (const auto& fit : fits)
        if (fit.mass > 0.0) tail += fit.edge * fit.edge * f.grid().half_width() / (2.0 * fit.exponent - 1.0);
    return {integrate(f.transformed([](double, double v) { return v * v; })), tail, 1.0};
}

}  // namespace stable_lab
