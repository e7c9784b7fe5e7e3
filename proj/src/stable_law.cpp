#include "stable_lab/stable_law.hpp"

#include "fft.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace stable_lab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxTransformSize = std::size_t{1} << 23;
constexpr int kAliasImages = 12;
constexpr int kAsymptoticTerms = 4;

// Safety factor on the leading tail constant, chosen against brute-force
// tail-mass quadrature for alpha in [0.8, 1.95] (see stable_law_test).
constexpr double kTailSafety = 1.5;

std::size_t next_power_of_two(double x) {
    std::size_t n = 1;
    while (static_cast<double>(n) < x) n <<= 1;
    return n;
}

double cauchy_density(double s, double x) { return s / (kPi * (s * s + x * x)); }

double gaussian_density(double s, double x) {
    // variance 2s under the characteristic-function convention
    return std::exp(-x * x / (4.0 * s)) / std::sqrt(4.0 * kPi * s);
}

double gaussian_tail(double variance, double half_width) {
    return std::erfc(half_width / std::sqrt(2.0 * variance));
}

// Leading coefficient c in P(|X| > L) ~ c s L^-alpha.
double leading_tail_constant(double alpha) {
    return 2.0 / kPi * std::tgamma(alpha) * std::sin(kPi * alpha / 2.0);
}

// Leading terms of the large-|x| expansion of g_s:
// (1 / (pi |x|)) sum_k (-1)^(k+1) Gamma(alpha k + 1) / k! sin(k pi alpha / 2) (s |x|^-alpha)^k.
class TailSeries {
public:
    explicit TailSeries(const StableLaw& law) : alpha_(law.alpha()), s_(law.s()) {
        for (int k = 1; k <= kAsymptoticTerms; ++k) {
            const double sign = (k % 2 == 1) ? 1.0 : -1.0;
            coeff_[k - 1] = law.is_gaussian() ? 0.0
                                              : sign * std::tgamma(alpha_ * k + 1.0) / std::tgamma(k + 1.0) *
                                                    std::sin(k * kPi * alpha_ / 2.0);
        }
    }

    double operator()(double x) const {
        const double ax = std::abs(x);
        const double r = s_ * std::pow(ax, -alpha_);
        double sum = 0.0;
        for (int k = kAsymptoticTerms; k >= 1; --k) sum = (sum + coeff_[k - 1]) * r;
        return sum / (kPi * ax);
    }

private:
    double alpha_;
    double s_;
    std::array<double, kAsymptoticTerms> coeff_{};
};

std::vector<double> sample_closed_form(const StableLaw& law, double offset, long first,
                                       std::size_t count, double spacing) {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = offset + static_cast<double>(first + static_cast<long>(i)) * spacing;
        v[i] = law.is_cauchy() ? cauchy_density(law.s(), x) : gaussian_density(law.s(), x);
    }
    return v;
}

std::vector<double> sample_spectral(const StableLaw& law, double offset, long first,
                                    std::size_t count, double spacing) {
    std::function<double(double)> tail;
    if (!law.is_gaussian()) tail = TailSeries(law);
    return invert_even_cf([law](double theta) { return cf(law, theta); }, spacing, offset, first,
                          count, law.width(), tail);
}

std::vector<double> sample(const StableLaw& law, double offset, long first, std::size_t count,
                           double spacing, bool force_spectral) {
    auto v = (!force_spectral && (law.is_cauchy() || law.is_gaussian()))
                 ? sample_closed_form(law, offset, first, count, spacing)
                 : sample_spectral(law, offset, first, count, spacing);
    for (double& x : v) x = std::max(x, kDensityFloor);
    return v;
}

void require_tail_budget(const StableLaw& law, const Grid& grid) {
    const double mass = tail_mass_bound(law, grid.half_width());
    if (mass > kDensityTailBudget) {
        std::ostringstream os;
        os << "tail mass exceeds budget: " << mass << " beyond L = " << grid.half_width()
           << " (need L >= " << recommended_half_width(law, kDensityTailBudget) << ")";
        throw Error(os.str());
    }
}

// Periodization error of a cosine sum with frequency step 2 pi / period:
// sum over k != 0 of g(x + k period), with g replaced by its tail expansion.
double alias_error(const std::function<double(double)>& tail, double x, double period) {
    double images = 0.0;
    for (int k = 1; k <= kAliasImages; ++k) images += tail(x + k * period) + tail(x - k * period);
    // Remainder of the image sum, from the local power-law decay of the tail.
    for (double sign : {1.0, -1.0}) {
        const double a = std::abs(x + sign * (kAliasImages + 0.5) * period);
        const double ta = tail(a);
        const double t2a = tail(2.0 * a);
        if (ta > 0.0 && t2a > 0.0) {
            const double q = std::log2(ta / t2a);
            if (q > 1.05) images += ta * a / ((q - 1.0) * period);
        }
    }
    return images;
}

}  // namespace

StableLaw::StableLaw(double alpha, double s) : alpha_(alpha), s_(s) {
    if (!(alpha > 0.5 && alpha <= 2.0))
        throw Error("alpha must lie in (0.5, 2]; smaller exponents are not supported");
    if (!(s > 0.0) || !std::isfinite(s)) throw Error("scale parameter s must be positive");
}

double StableLaw::width() const noexcept { return std::pow(s_, 1.0 / alpha_); }

double cf(const StableLaw& law, double theta) {
    return std::exp(-law.s() * std::pow(std::abs(theta), law.alpha()));
}

double asymptotic_density(const StableLaw& law, double x) { return TailSeries(law)(x); }

std::function<double(double)> asymptotic_tail(const StableLaw& law) { return TailSeries(law); }

std::vector<double> invert_even_cf(const std::function<double(double)>& cf_fn, double spacing,
                                   double offset, long first, std::size_t count, double width,
                                   const std::function<double(double)>& tail) {
    if (count == 0) return {};
    // Rewrite the points as base + m * spacing with base in [0, spacing) so the
    // per-frequency phase stays small.
    const double shift = std::floor(offset / spacing);
    const double base = offset - shift * spacing;
    const long first_index = first + static_cast<long>(shift);
    const double x_lo = offset + static_cast<double>(first) * spacing;
    const double x_hi = x_lo + static_cast<double>(count - 1) * spacing;
    const double x_max = std::max(std::abs(x_lo), std::abs(x_hi));

    const double period_wanted = std::max({4.0 * x_max, 200.0 * width, 8.0 * spacing});
    std::size_t size = next_power_of_two(std::max(2.0 * static_cast<double>(count), period_wanted / spacing));
    if (2 * count > kMaxTransformSize) throw Error("spectral inversion: too many points requested");
    size = std::min(size, kMaxTransformSize);
    const double period = static_cast<double>(size) * spacing;
    const double dtheta = 2.0 * kPi / period;

    std::vector<fft::Complex> coeffs(size, fft::Complex(0.0, 0.0));
    coeffs[0] = cf_fn(0.0);
    const double base_fraction = base / spacing;
    std::size_t j = 1;
    for (; j < size; ++j) {
        const double value = cf_fn(static_cast<double>(j) * dtheta);
        if (value < 1e-18) break;
        // theta_j * base = 2 pi j (base / spacing) / size
        const double phase = 2.0 * kPi * std::fmod(static_cast<double>(j) * base_fraction, static_cast<double>(size)) /
                             static_cast<double>(size);
        coeffs[j] = 2.0 * value * fft::Complex(std::cos(phase), std::sin(phase));
    }
    if (j == size && cf_fn(static_cast<double>(size - 1) * dtheta) > 1e-15)
        throw Error("spectral inversion: grid too coarse for this law (characteristic function not resolved)");

    const auto sums = fft::backward_complex(coeffs);
    const double norm = dtheta / (2.0 * kPi);
    std::vector<double> out(count);
    const auto msize = static_cast<long>(size);
    for (std::size_t i = 0; i < count; ++i) {
        long m = (first_index + static_cast<long>(i)) % msize;
        if (m < 0) m += msize;
        out[i] = norm * sums[static_cast<std::size_t>(m)].real();
    }

    if (tail) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] -= alias_error(tail, x_lo + static_cast<double>(i) * spacing, period);
    }
    return out;
}

double density_at(const StableLaw& law, double x) {
    if (law.is_cauchy()) return cauchy_density(law.s(), x);
    if (law.is_gaussian()) return gaussian_density(law.s(), x);
    const double w = law.width();
    const double period = std::max(4.0 * (std::abs(x) + 10.0 * w), 200.0 * w);
    const double dtheta = 2.0 * kPi / period;
    double sum = 0.5;
    for (std::size_t j = 1;; ++j) {
        const double theta = static_cast<double>(j) * dtheta;
        const double value = cf(law, theta);
        if (value < 1e-18) break;
        sum += value * std::cos(theta * x);
    }
    const double g = sum * dtheta / kPi -
                     alias_error(TailSeries(law), x, period);
    return std::max(g, kDensityFloor);
}

std::vector<double> density_on_lattice(const StableLaw& law, double offset, long first, std::size_t count,
                                       double spacing) {
    if (!(spacing > 0.0)) throw Error("lattice spacing must be positive");
    return sample(law, offset, first, count, spacing, false);
}

GridFunction density(const StableLaw& law, const Grid& grid) {
    require_tail_budget(law, grid);
    return GridFunction(grid, sample(law, -grid.half_width(), 0, grid.size(), grid.spacing(), false));
}

GridFunction density_spectral(const StableLaw& law, const Grid& grid) {
    return GridFunction(grid, sample(law, -grid.half_width(), 0, grid.size(), grid.spacing(), true));
}

LatticeKernel density_kernel(const StableLaw& law, const Grid& grid) {
    const long n = static_cast<long>(grid.size());
    return LatticeKernel(grid, sample(law, 0.0, -(n - 1), static_cast<std::size_t>(2 * n - 1),
                                      grid.spacing(), false));
}

GridFunction tilted_density(const StableLaw& law, const Grid& grid) {
    return density(law, grid).transformed([](double y, double g) { return y * g; });
}

LatticeKernel tilted_kernel(const StableLaw& law, const Grid& grid) {
    return density_kernel(law, grid).transformed([](double y, double g) { return y * g; });
}

double scaling_constant(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw Error("alpha must lie in (0, 2]");
    return std::tgamma(1.0 + 1.0 / alpha) / kPi;
}

double tail_mass_bound(const StableLaw& law, double half_width) {
    if (!(half_width > 0.0)) return 1.0;
    if (law.is_cauchy()) return 1.0 - 2.0 / kPi * std::atan(half_width / law.s());
    if (law.is_gaussian()) return gaussian_tail(2.0 * law.s(), half_width);
    const double power = kTailSafety * leading_tail_constant(law.alpha()) * law.s() *
                         std::pow(half_width, -law.alpha());
    return std::min(1.0, power + gaussian_tail(2.0 * law.s(), half_width));
}

double recommended_half_width(const StableLaw& law, double tail_budget) {
    if (!(tail_budget > 0.0 && tail_budget < 0.1)) throw Error("tail budget must lie in (0, 0.1)");
    if (law.is_cauchy()) return law.s() / std::tan(kPi * tail_budget / 2.0);
    if (law.is_gaussian())
        return std::sqrt(4.0 * law.s()) * boost::math::erfc_inv(tail_budget);
    // tail_mass_bound is decreasing in L: bisect on a bracket.
    double lo = 0.0;
    double hi = law.width();
    while (tail_mass_bound(law, hi) > tail_budget) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tail_mass_bound(law, mid) > tail_budget ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace stable_lab
