#pragma once

// Uniform-grid function representation: quadrature, spectral convolution,
// differentiation and density rescaling.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stable_lab {

/// Raised for any violated precondition or numerical failure in the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Allowed deviation of a sampled density's mass from one.
inline constexpr double kMassTolerance = 1e-3;

/// Densities are clamped below at this value so that logarithms stay finite.
inline constexpr double kDensityFloor = 1e-300;

/// Default number of samples when none is requested (STABLE_LAB_GRID_N overrides).
inline constexpr std::size_t kDefaultGridSize = std::size_t{1} << 14;

/// Symmetric uniform grid on [-L, L] with n samples, n a power of two.
class Grid {
public:
    Grid(double half_width, std::size_t n);

    double half_width() const noexcept { return half_width_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return spacing_; }

    /// Abscissa of sample k: -L + k * spacing.
    double x(std::size_t k) const noexcept {
        return -half_width_ + static_cast<double>(k) * spacing_;
    }
    std::vector<double> points() const;

    /// STABLE_LAB_GRID_N if set to a valid power of two, otherwise kDefaultGridSize.
    static std::size_t default_size();
    /// STABLE_LAB_GRID_N if set to a valid power of two.
    static std::optional<std::size_t> size_override();

    bool operator==(const Grid&) const = default;

private:
    double half_width_;
    std::size_t n_;
    double spacing_;
};

/// Real function sampled on a Grid. Values are always finite.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);

    template <class F>
    static GridFunction sample(const Grid& grid, F&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.x(k));
        return GridFunction(grid, std::move(v));
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    /// Linear interpolation; zero outside [-L, L].
    double at(double x) const noexcept;

    double max() const;
    /// Largest |f(x_k) - f(-x_k)|.
    double asymmetry() const;

    template <class F>
    GridFunction transformed(F&& fn) const {
        std::vector<double> v(values_.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid_.x(k), values_[k]);
        return GridFunction(grid_, std::move(v));
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Samples of a kernel on the integer lattice m * spacing, m = -(n-1) .. n-1,
/// where n and spacing come from a Grid. Convolving a GridFunction with a
/// lattice kernel lands exactly on the grid points.
class LatticeKernel {
public:
    LatticeKernel(const Grid& grid, std::vector<double> values);

    template <class F>
    static LatticeKernel sample(const Grid& grid, F&& fn) {
        const long n = static_cast<long>(grid.size());
        std::vector<double> v(static_cast<std::size_t>(2 * n - 1));
        for (long m = -(n - 1); m <= n - 1; ++m)
            v[static_cast<std::size_t>(m + n - 1)] = fn(static_cast<double>(m) * grid.spacing());
        return LatticeKernel(grid, std::move(v));
    }

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    /// Value at lattice offset m, |m| <= n - 1.
    double at(long m) const noexcept {
        return values_[static_cast<std::size_t>(m + static_cast<long>(grid_.size()) - 1)];
    }

    template <class F>
    LatticeKernel transformed(F&& fn) const {
        const long n = static_cast<long>(grid_.size());
        std::vector<double> v(values_.size());
        for (long m = -(n - 1); m <= n - 1; ++m) {
            const auto i = static_cast<std::size_t>(m + n - 1);
            v[i] = fn(static_cast<double>(m) * grid_.spacing(), values_[i]);
        }
        return LatticeKernel(grid_, std::move(v));
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Trapezoid rule over [-L, L].
double integrate(const GridFunction& gf);
double integrate(const Grid& grid, std::span<const double> values);

/// Linear convolution of two functions on the same grid, evaluated on that
/// grid. Zero-padded to 2n; the half-sample offset between the convolution
/// lattice and the grid is applied as a spectral phase shift.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

/// (f * k)(x_j) = spacing * sum_i f(x_i) k(x_j - x_i). Exact lattice alignment.
GridFunction convolve(const GridFunction& f, const LatticeKernel& kernel);

/// Convolves one function with several kernels, sharing the transform of f.
std::vector<GridFunction> convolve_many(const GridFunction& f,
                                        std::span<const LatticeKernel> kernels);

/// Central differences inside, second-order one-sided differences at the ends.
GridFunction differentiate_x(const GridFunction& gf);

/// Density of cX given the density of X: x -> f(x / c) / c, by linear interpolation.
GridFunction rescale_density(const GridFunction& f, double c);

/// Throws unless f is nonnegative with mass within kMassTolerance of one.
void require_density(const GridFunction& f, const std::string& what = "density");

/// Returns max(f, kDensityFloor) pointwise.
GridFunction clamp_to_floor(const GridFunction& f);

/// (f(x) + f(-x)) / 2.
GridFunction symmetrized(const GridFunction& f);

/// Power-law model f(x) ~ f(L) (|x|/L)^-p of one tail beyond the grid edge,
/// with p the log-log slope of f between 0.95 L and L, clamped to [1.05, 1000].
struct TailFit {
    double edge = 0.0;      // |f| at the edge
    double exponent = 0.0;  // p
    double mass = 0.0;      // integral of the model beyond the edge
};
/// Fits for the left and right tails.
std::array<TailFit, 2> fit_tails(const GridFunction& f);

struct TailEstimate {
    double mass = 0.0;     // both sides
    double entropy = 0.0;  // -integral of f log f over both fitted tails
};
TailEstimate estimate_tail(const GridFunction& f);

/// Two-column CSV "x,value" with a header line; values printed with 17 digits.
void write_csv(std::ostream& out, const GridFunction& gf);
GridFunction read_csv(std::istream& in);

}  // namespace stable_lab
