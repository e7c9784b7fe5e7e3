#pragma once

// Numerical checks of the score identities: PDE residuals, t-derivatives of
// information functionals against their score integrals, the conditional
// expectation lemma, and the Gaussian-convention regressions.

#include "stable_lab/families.hpp"
#include "stable_lab/grid.hpp"
#include "stable_lab/interpolation.hpp"
#include "stable_lab/stable_law.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stable_lab {

/// Which parametrisation of the Gaussian a report is stated in.
enum class Convention {
    characteristic,  // law exp(-s |theta|^alpha); alpha = 2 has variance 2s
    variance,        // Gaussian reference N(0, sigma^2), channel sqrt(1-t) X + sqrt(t) Z
};
const char* to_string(Convention c);

/// Deliberate mistakes used to confirm that the harness can fail.
enum class Fault { none, debruijn_sign, pde_prefactor, score_sign };
Fault parse_fault(const std::string& name);

/// One scalar (or sup-norm) comparison inside a report.
struct Comparison {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool informational = false;  // reported, never affects the verdict
};

struct VerificationReport {
    std::string identity_name;
    Convention convention = Convention::characteristic;
    /// For reports made of several comparisons this is max(residual / tolerance)
    /// over the non-informational ones and `tolerance` is 1.
    double residual_norm = 0.0;
    std::optional<double> residual_l1;
    std::optional<double> lhs_value;
    std::optional<double> rhs_value;
    double tolerance = 0.0;
    bool pass = false;
    std::optional<double> dt_used;
    std::optional<Grid> grid_used;
    std::string oracle;
    std::vector<std::string> notes;
    std::vector<Comparison> comparisons;
    std::vector<std::pair<std::string, double>> metrics;

    /// Sets residual_norm, tolerance and pass from the comparisons.
    void finalize();
};

/// Density of X: a named family (sampled exactly at every t) or samples on a grid.
class InputDensity {
public:
    explicit InputDensity(DensityFamily family);
    InputDensity(GridFunction samples, std::string label, bool symmetrize = false);

    const std::string& label() const noexcept { return label_; }
    const std::optional<DensityFamily>& family() const noexcept { return family_; }
    const std::optional<GridFunction>& samples() const noexcept { return samples_; }
    /// Characteristic width used to choose the grid spacing.
    double scale() const;
    std::optional<double> variance() const;
    /// True when X is distributed as g_s for this law.
    bool is_stable_law(const StableLaw& law) const;

    GridFunction sample(const Grid& grid) const;
    InterpolationPath path(const Grid& grid, const StableLaw& law, double t) const;

private:
    std::optional<DensityFamily> family_;
    std::optional<GridFunction> samples_;
    std::string label_;
    bool symmetrize_ = false;
};

struct CheckOptions {
    std::optional<Grid> grid;  // chosen automatically when absent
    double dt = 1e-3;
    std::optional<double> tolerance;
    double tail_budget = 1e-4;
    Fault fault = Fault::none;
};

/// Grid wide enough for the tail budget of both X and g_s and fine enough to
/// resolve both. STABLE_LAB_GRID_N, when set, fixes the number of points.
Grid choose_grid(const InputDensity& input, const StableLaw& law, const CheckOptions& options);

/// Generalized heat equation: d h_t/dt = s/(alpha(1-t)) d/dx (h_t (rho^M + x/s)).
VerificationReport pde_residual(const InputDensity& f, const StableLaw& law, double t,
                                const CheckOptions& options = {});

/// Classical heat equation in the variance convention with the Fisher score.
VerificationReport heat_equation_check(const InputDensity& f, double variance, double t,
                                       const CheckOptions& options = {});

/// dD(h_t || g_s)/dt against the score inner product, one report per t.
std::vector<VerificationReport> debruijn_check(const InputDensity& f, const StableLaw& law,
                                               const std::vector<double>& t_list,
                                               const CheckOptions& options = {});

/// Variance convention: dD(h_t || phi)/dt = -J(h_t) / (2(1-t)).
std::vector<VerificationReport> gaussian_debruijn_check(const InputDensity& f, double variance,
                                                        const std::vector<double>& t_list,
                                                        const CheckOptions& options = {});

/// dH/dt, dLambda/dt (with and without the factor s), dD = dLambda - dH, and
/// the quadratic Theta-functional derivative.
VerificationReport entropy_energy_check(const InputDensity& f, const StableLaw& law, double t,
                                        const CheckOptions& options = {});

/// dI(X; X_t)/dt against s/(alpha(1-t)) int h_t (rho^M + x/(st)) rho^F.
VerificationReport mutual_info_check(const InputDensity& f, const StableLaw& law, double t,
                                     const CheckOptions& options = {});

/// Gaussian channel with unit noise variance: score identity, dI/dt = -mmse/(2t^2)
/// and dI/dsnr = mmse/2 at snr = (1-t)/t. One report per t.
std::vector<VerificationReport> gaussian_mmse_check(const InputDensity& f, const std::vector<double>& t_list,
                                                    const CheckOptions& options = {});

/// Default evaluation points of condexp_check.
std::vector<double> default_condexp_points();

/// [g_u * (y g_v)](x) = (v x / (u + v)) g_{u+v}(x) at the given points.
VerificationReport condexp_check(double alpha, double u, double v, const std::vector<double>& x_list,
                                 const CheckOptions& options = {});

/// Mean-zero standardized score, oddness, and linearity / closed forms where known.
VerificationReport score_properties_check(const InputDensity& f, const StableLaw& law,
                                          const std::vector<double>& t_list, const CheckOptions& options = {});

/// Quantities whose t-derivative is taken by central differences.
enum class FdQuantity { density, relative_entropy, entropy, energy, mutual_information };
FdQuantity parse_fd_quantity(const std::string& name);

/// Ratio |L(dt) - L(dt/2)| / |L(dt/2) - L(dt/4)| of central-difference
/// derivatives; second-order convergence gives 4.
VerificationReport richardson_check(FdQuantity quantity, const InputDensity& f, const StableLaw& law, double t,
                                    double dt = 0.04, const CheckOptions& options = {});

}  // namespace stable_lab
