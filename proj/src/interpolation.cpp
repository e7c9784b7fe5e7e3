#include "stable_lab/interpolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace stable_lab {
namespace {

// Largest relative asymmetry accepted silently (sampling round-off on x_k vs -x_k).
constexpr double kSymmetryTolerance = 1e-9;
constexpr double kFftNoiseFloor = 1e-8;

void require_time(double t) {
    if (!(t > 0.0)) throw Error("score undefined at t=0: t must lie in (0, 1]");
    if (!(t <= 1.0)) throw Error("t must lie in (0, 1]");
}

GridFunction antisymmetrized(const GridFunction& f) {
    const std::size_t n = f.size();
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = 0.5 * (f[k] - f[n - 1 - k]);
    return GridFunction(f.grid(), std::move(v));
}

// Unit point mass at 0: the two central samples of an even-sized grid.
GridFunction point_mass(const Grid& grid) {
    std::vector<double> v(grid.size(), 0.0);
    v[grid.size() / 2 - 1] = v[grid.size() / 2] = 0.5 / grid.spacing();
    return GridFunction(grid, std::move(v));
}

// sup over lattice offsets |m| >= j of `value(m)`, for j = 0 .. n-1.
template <class F>
std::vector<double> outer_sup(std::size_t n, F&& value) {
    std::vector<double> out(n);
    double running = 0.0;
    for (std::size_t j = n; j-- > 0;) {
        running = std::max(running, value(static_cast<long>(j)));
        out[j] = running;
    }
    return out;
}

struct Truncation {
    std::vector<double> numerator;  // bound on |change of f_t * (y g_st)| from mass of X beyond L
    std::vector<double> density;    // same for h_t
};

// The grid carries X truncated at +-L; the missing mass m sits at |z| >= c L
// after contraction, so at x it can contribute at most m sup_{|y| >= cL - |x|} g_st
// to h_t and m sup |y| g_st to the tilted convolution.
Truncation truncation_bounds(const Grid& grid, const LatticeKernel& kernel, double c, double tail_mass) {
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const auto dens = outer_sup(n, [&](long m) { return kernel.at(m); });
    const auto moment = outer_sup(n, [&](long m) { return std::abs(static_cast<double>(m) * h * kernel.at(m)); });
    Truncation tr{std::vector<double>(n), std::vector<double>(n)};
    const double edge = c * grid.half_width();
    for (std::size_t k = 0; k < n; ++k) {
        const double d = edge - std::abs(grid.x(k));
        if (d <= 0.0) {
            tr.numerator[k] = tr.density[k] = std::numeric_limits<double>::infinity();
            continue;
        }
        const auto j = std::min(static_cast<std::size_t>(d / h), n - 1);
        tr.numerator[k] = tail_mass * moment[j];
        tr.density[k] = tail_mass * dens[j];
    }
    return tr;
}

InterpolationPath build(GridFunction f, GridFunction f_t, const StableLaw& law, double t) {
    const Grid& grid = f.grid();
    const double mass = integrate(f);
    require_density(f, "input density");
    std::vector<std::string> warnings;
    if (law.reduced_accuracy())
        warnings.push_back("alpha < 1: reduced accuracy, tolerances should be relaxed");

    const double tail_mass = std::max(estimate_tail(f).mass, 1.0 - mass);
    GridFunction g_s = density(law, grid);

    if (t == 1.0) {
        InterpolationPath path{std::move(f), law, t, point_mass(grid), g_s, g_s, g_s,
                               antisymmetrized(tilted_density(law, grid)), tail_mass, std::move(warnings)};
        path.warnings.push_back("t = 1: X_1 is the stable law; f_t is a point mass");
        return path;
    }

    const StableLaw law_t = law.scaled(t);
    if (law_t.width() < 4.0 * grid.spacing())
        warnings.push_back("g_st is narrower than four grid spacings; refine the grid");
    const LatticeKernel kernel = density_kernel(law_t, grid);
    const std::array kernels{kernel, kernel.transformed([](double y, double g) { return y * g; })};
    auto conv = convolve_many(f_t, kernels);
    GridFunction h_t = symmetrized(clamp_to_floor(conv[0]));
    GridFunction tilted = antisymmetrized(conv[1]);

    const double h_mass = integrate(h_t);
    if (std::abs(h_mass - mass) > kMassTolerance) {
        std::ostringstream os;
        os << "h_t mass " << h_mass << " differs from input mass " << mass;
        warnings.push_back(os.str());
    }
    return InterpolationPath{std::move(f), law, t, std::move(f_t), density(law_t, grid), std::move(h_t),
                             std::move(g_s), std::move(tilted), tail_mass, std::move(warnings)};
}

}  // namespace

double InterpolationPath::contraction() const { return std::pow(1.0 - t, 1.0 / law.alpha()); }

InterpolationPath make_path(const GridFunction& f, const StableLaw& law, double t, bool symmetrize) {
    require_time(t);
    if (!symmetrize && f.asymmetry() > kSymmetryTolerance * f.max())
        throw Error("input density is not symmetric about 0 (use symmetrize)");
    GridFunction fs = symmetrized(f);
    const double c = std::pow(1.0 - t, 1.0 / law.alpha());
    GridFunction f_t = t == 1.0 ? fs : symmetrized(rescale_density(fs, c));
    return build(std::move(fs), std::move(f_t), law, t);
}

InterpolationPath make_path(const std::function<double(double)>& f, const Grid& grid,
                            const StableLaw& law, double t) {
    require_time(t);
    GridFunction fs = symmetrized(GridFunction::sample(grid, f));
    const double c = std::pow(1.0 - t, 1.0 / law.alpha());
    const double edge = c * grid.half_width() * (1.0 + 1e-12);
    GridFunction f_t = t == 1.0 ? fs : symmetrized(GridFunction::sample(grid, [&](double x) {
        return std::abs(x) <= edge ? f(x / c) / c : 0.0;
    }));
    return build(std::move(fs), std::move(f_t), law, t);
}

InterpolationPath make_path(const GridFunction& f, const GridFunction& f_t, const StableLaw& law, double t) {
    require_time(t);
    if (!(f.grid() == f_t.grid())) throw Error("make_path: f and f_t live on different grids");
    return build(symmetrized(f), t == 1.0 ? symmetrized(f) : symmetrized(f_t), law, t);
}

GridFunction log_derivative(const GridFunction& h) {
    return differentiate_x(h.transformed([](double, double v) { return std::log(std::max(v, kDensityFloor)); }));
}

ScoreSet mmse_score(const InterpolationPath& path) {
    const Grid& grid = path.h_t.grid();
    const std::size_t n = grid.size();
    const double s = path.law.s();
    const double st = s * path.t;
    const auto& h = path.h_t;
    const double peak = h.max();

    std::vector<bool> valid(n), trusted(n);
    std::vector<double> rho(n, 0.0), standardized(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) valid[k] = h[k] > kMaskThreshold * peak;

    ScoreSet out{GridFunction(grid, rho), log_derivative(h), GridFunction(grid, rho), GridFunction(grid, rho),
                 valid, trusted, false, {}, 0.0};

    if (path.endpoint()) {
        out.analytic_endpoint = true;
        out.mmse_score = GridFunction::sample(grid, [s](double x) { return -x / s; });
        out.trusted_mask = valid;
        out.warnings.push_back("t = 1: mmse score set to the stable score -x/s");
    } else {
        const double c = path.contraction();
        const LatticeKernel kernel = density_kernel(path.law.scaled(path.t), grid);
        const Truncation tr = truncation_bounds(grid, kernel, c, path.input_tail_mass);
        for (std::size_t k = 0; k < n; ++k) {
            if (!valid[k]) continue;
            const double x = grid.x(k);
            rho[k] = -path.tilted[k] / (st * h[k]);
            standardized[k] = rho[k] + x / s;
            const double influence = (tr.numerator[k] / st + std::abs(rho[k]) * tr.density[k]) / h[k];
            trusted[k] = h[k] >= kFftNoiseFloor * peak && influence <= kTrustedScoreError;
        }
        out.mmse_score = GridFunction(grid, rho);
        out.standardized_mmse = GridFunction(grid, standardized);
        out.trusted_mask = trusted;
    }

    // Reference score of g_s: closed forms where available, otherwise numerical.
    GridFunction reference = path.law.is_cauchy()
                                 ? GridFunction::sample(grid, [s](double x) { return -2.0 * x / (s * s + x * x); })
                             : path.law.is_gaussian() ? GridFunction::sample(grid, [s](double x) { return -x / (2.0 * s); })
                                                      : log_derivative(path.g_s);
    std::vector<double> sf(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        if (valid[k]) sf[k] = out.fisher_score[k] - reference[k];
    out.standardized_fisher = GridFunction(grid, std::move(sf));
    if (path.endpoint()) out.standardized_mmse = GridFunction(grid, std::vector<double>(n, 0.0));

    std::vector<double> masked(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        if (valid[k]) masked[k] = h[k];
    out.mask_mass = std::clamp(integrate(grid, masked) / integrate(h), 0.0, 1.0);
    return out;
}

Estimators estimators(const InterpolationPath& path, const ScoreSet& scores) {
    if (path.endpoint()) throw Error("estimators require t < 1");
    const Grid& grid = path.h_t.grid();
    const double s = path.law.s();
    const double t = path.t;
    const double c = path.contraction();
    const double z_factor = s * std::pow(t, 1.0 - 1.0 / path.law.alpha());
    std::vector<double> xh(grid.size(), 0.0), zh(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!scores.valid_mask[k]) continue;
        xh[k] = (grid.x(k) + s * t * scores.mmse_score[k]) / c;
        zh[k] = -z_factor * scores.mmse_score[k];
    }
    return {GridFunction(grid, std::move(xh)), GridFunction(grid, std::move(zh)), scores.valid_mask};
}

Estimators estimators(const InterpolationPath& path) { return estimators(path, mmse_score(path)); }

MmseValue mmse_value(const InterpolationPath& path) {
    const Grid& grid = path.f.grid();
    MmseValue out;
    if (path.endpoint()) {
        const auto second = path.f.transformed([](double x, double v) { return x * x * v; });
        out.value = integrate(second);
        out.noise_value = std::numeric_limits<double>::quiet_NaN();
        out.mask_coverage = 1.0;
        return out;
    }
    const ScoreSet scores = mmse_score(path);
    const Estimators est = estimators(path, scores);
    const double c = path.contraction();
    const double noise_scale = std::pow(path.t, 1.0 / path.law.alpha());

    // E(X - X^)^2 = sum_w sum_z (z/c - X^(w))^2 f_t(z) g_st(w - z) h^2, expanded
    // so that each term is a single convolution.
    const LatticeKernel kernel = density_kernel(path.law.scaled(path.t), grid);
    const auto z1 = path.f_t.transformed([](double z, double v) { return z * v; });
    const auto z2 = path.f_t.transformed([](double z, double v) { return z * z * v; });
    const GridFunction A = convolve(z2, kernel);
    const GridFunction B = convolve(z1, kernel);
    const GridFunction C = convolve(path.f_t, kernel.transformed([](double y, double g) { return y * y * g; }));

    std::vector<double> signal(grid.size(), 0.0), noise(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!scores.valid_mask[k]) continue;
        const double xh = est.x_hat[k];
        const double yh = noise_scale * est.z_hat[k];
        signal[k] = A[k] / (c * c) - 2.0 * xh * B[k] / c + xh * xh * path.h_t[k];
        noise[k] = C[k] - 2.0 * yh * path.tilted[k] + yh * yh * path.h_t[k];
    }
    out.value = integrate(grid, signal);
    out.noise_value = integrate(grid, noise) / (noise_scale * noise_scale);
    out.mask_coverage = scores.mask_mass;
    if (out.mask_coverage < 0.999) out.warnings.push_back("valid mask covers less than 99.9% of h_t mass");
    return out;
}

}  // namespace stable_lab
