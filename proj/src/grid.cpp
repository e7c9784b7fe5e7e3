#include "stable_lab/grid.hpp"

#include "fft.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace stable_lab {
namespace {

// The tail exponent is the local slope of log f against log |x| between this
// fraction of L and L.
constexpr double kTailFitPoint = 0.95;

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw Error("convolve: functions live on different grids");
}

}  // namespace

Grid::Grid(double half_width, std::size_t n) : half_width_(half_width), n_(n), spacing_(0.0) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw Error("grid half-width must be positive and finite");
    if (!is_power_of_two(n)) throw Error("grid size must be a power of two >= 2");
    spacing_ = 2.0 * half_width / static_cast<double>(n - 1);
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(n_);
    for (std::size_t k = 0; k < n_; ++k) xs[k] = x(k);
    return xs;
}

std::optional<std::size_t> Grid::size_override() {
    if (const char* env = std::getenv("STABLE_LAB_GRID_N")) {
        std::size_t n = 0;
        const char* end = env + std::char_traits<char>::length(env);
        auto [ptr, ec] = std::from_chars(env, end, n);
        if (ec == std::errc{} && ptr == end && is_power_of_two(n)) return n;
    }
    return std::nullopt;
}

std::size_t Grid::default_size() { return size_override().value_or(kDefaultGridSize); }

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw Error("invalid function: size does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw Error("invalid function: non-finite value");
}

double GridFunction::at(double x) const noexcept {
    const double last = static_cast<double>(size() - 1);
    double pos = (x + grid_.half_width()) / grid_.spacing();
    // Points within round-off of the edges count as inside.
    if (!(pos >= -1e-9) || pos > last + 1e-9) return 0.0;
    pos = std::clamp(pos, 0.0, last);
    const auto k = std::min(static_cast<std::size_t>(pos), size() - 2);
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * values_[k] + w * values_[k + 1];
}

double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

double GridFunction::asymmetry() const {
    double worst = 0.0;
    const std::size_t n = size();
    for (std::size_t k = 0; k < n / 2; ++k)
        worst = std::max(worst, std::abs(values_[k] - values_[n - 1 - k]));
    return worst;
}

LatticeKernel::LatticeKernel(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != 2 * grid_.size() - 1) throw Error("lattice kernel has the wrong length");
    for (double v : values_)
        if (!std::isfinite(v)) throw Error("invalid function: non-finite kernel value");
}

double integrate(const Grid& grid, std::span<const double> v) {
    double sum = 0.5 * (v.front() + v.back());
    for (std::size_t k = 1; k + 1 < v.size(); ++k) sum += v[k];
    return sum * grid.spacing();
}

double integrate(const GridFunction& gf) { return integrate(gf.grid(), gf.values()); }

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid(), g.grid());
    const std::size_t n = f.size();
    const std::size_t padded = 2 * n;
    auto fs = fft::forward_real(f.values(), padded);
    const auto gs = fft::forward_real(g.values(), padded);
    // The linear convolution of samples at -L + i h and -L + j h sits at
    // -2L + p h; grid point k corresponds to p = k + (n - 1) / 2, half a
    // sample off the lattice. Shift by half a sample in the spectral domain.
    for (std::size_t q = 0; q < fs.size(); ++q) {
        const double phase = -std::numbers::pi * static_cast<double>(q) / static_cast<double>(padded);
        fs[q] *= gs[q] * fft::Complex(std::cos(phase), std::sin(phase));
    }
    const auto conv = fft::inverse_real(fs, padded);
    const double scale = f.grid().spacing() / static_cast<double>(padded);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = conv[k + n / 2] * scale;
    return GridFunction(f.grid(), std::move(out));
}

std::vector<GridFunction> convolve_many(const GridFunction& f,
                                        std::span<const LatticeKernel> kernels) {
    const std::size_t n = f.size();
    const std::size_t padded = 2 * n;
    const auto fs = fft::forward_real(f.values(), padded);
    const double scale = f.grid().spacing() / static_cast<double>(padded);
    std::vector<GridFunction> result;
    result.reserve(kernels.size());
    for (const auto& kernel : kernels) {
        require_same_grid(f.grid(), kernel.grid());
        auto ks = fft::forward_real(kernel.values(), padded);
        for (std::size_t q = 0; q < ks.size(); ++q) ks[q] *= fs[q];
        const auto conv = fft::inverse_real(ks, padded);
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = conv[k + n - 1] * scale;
        result.emplace_back(f.grid(), std::move(out));
    }
    return result;
}

GridFunction convolve(const GridFunction& f, const LatticeKernel& kernel) {
    return std::move(convolve_many(f, std::span(&kernel, 1)).front());
}

GridFunction differentiate_x(const GridFunction& gf) {
    const auto v = gf.values();
    const std::size_t n = v.size();
    const double h = gf.grid().spacing();
    std::vector<double> d(n);
    if (n == 2) {
        d[0] = d[1] = (v[1] - v[0]) / h;
    } else {
        for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
        d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    }
    return GridFunction(gf.grid(), std::move(d));
}

GridFunction rescale_density(const GridFunction& f, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw Error("rescale_density: scale must be positive");
    if (c == 1.0) return f;
    return GridFunction::sample(f.grid(), [&](double x) { return f.at(x / c) / c; });
}

void require_density(const GridFunction& f, const std::string& what) {
    for (double v : f.values())
        if (v < 0.0) throw Error(what + ": negative values");
    const double mass = integrate(f);
    if (std::abs(mass - 1.0) > kMassTolerance) {
        std::ostringstream os;
        os << what << ": mass " << mass << " differs from 1 by more than " << kMassTolerance;
        throw Error(os.str());
    }
}

GridFunction clamp_to_floor(const GridFunction& f) {
    return f.transformed([](double, double v) { return std::max(v, kDensityFloor); });
}

GridFunction symmetrized(const GridFunction& f) {
    const std::size_t n = f.size();
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = 0.5 * (f[k] + f[n - 1 - k]);
    return GridFunction(f.grid(), std::move(v));
}

std::array<TailFit, 2> fit_tails(const GridFunction& f) {
    std::array<TailFit, 2> fits;
    const double L = f.grid().half_width();
    const std::array<double, 2> signs{-1.0, 1.0};
    for (std::size_t i = 0; i < 2; ++i) {
        const double edge = std::abs(f.at(signs[i] * L));
        const double inner = std::abs(f.at(signs[i] * kTailFitPoint * L));
        fits[i].edge = edge;
        if (!(edge > kDensityFloor)) {
            fits[i].exponent = 1e3;
            continue;
        }
        fits[i].exponent = std::clamp(std::log(std::max(inner, edge) / edge) / -std::log(kTailFitPoint), 1.05, 1e3);
        fits[i].mass = edge * L / (fits[i].exponent - 1.0);
    }
    return fits;
}

TailEstimate estimate_tail(const GridFunction& f) {
    TailEstimate est;
    for (const auto& fit : fit_tails(f)) {
        if (fit.mass == 0.0) continue;
        est.mass += fit.mass;
        est.entropy += fit.mass * (-std::log(fit.edge) + fit.exponent / (fit.exponent - 1.0));
    }
    return est;
}

void write_csv(std::ostream& out, const GridFunction& gf) {
    out << "x,value\n";
    char buf[64];
    for (std::size_t k = 0; k < gf.size(); ++k) {
        const int len = std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", gf.grid().x(k), gf[k]);
        out.write(buf, len);
    }
}

GridFunction read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error("csv: empty input");
    std::vector<double> xs, vs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error("csv: missing comma on line " + std::to_string(lineno));
        char* end = nullptr;
        const double x = std::strtod(line.c_str(), &end);
        const double v = std::strtod(line.c_str() + comma + 1, &end);
        if (!std::isfinite(x) || !std::isfinite(v))
            throw Error("csv: invalid number on line " + std::to_string(lineno));
        xs.push_back(x);
        vs.push_back(v);
    }
    if (xs.size() < 2) throw Error("csv: need at least two samples");
    const double half_width = -xs.front();
    if (std::abs(xs.back() - half_width) > 1e-9 * half_width)
        throw Error("csv: grid is not symmetric about 0");
    Grid grid(half_width, xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (std::abs(xs[k] - grid.x(k)) > 1e-9 * grid.spacing())
            throw Error("csv: samples are not uniformly spaced");
    return GridFunction(grid, std::move(vs));
}

}  // namespace stable_lab
