#pragma once

// Maximum-entropy constructions: a law of higher entropy than g_s outside the
// domain of normal attraction of g_s, the entropy power inequality, the Cauchy
// sign condition, and monotonicity of the energy functional along the path.

#include "stable_lab/verifications.hpp"

#include <utility>
#include <vector>

namespace stable_lab {

struct AttractionDiagnostic {
    std::vector<int> n_list;
    /// sup_x |density of (X_1 + ... + X_n) / n^(1/alpha) - g_s|
    std::vector<double> sup_distances;
    std::vector<double> entropies;
};

struct NotDoaResult {
    VerificationReport report;
    AttractionDiagnostic diagnostic;
};

/// X = Z^(beta)_1 + Z^(alpha)_s with beta > alpha. Checks H(X) > H(g_s) at two
/// resolutions and tabulates the normalized sums for each n in n_list.
NotDoaResult notdoa_counterexample(double alpha, double beta, double s, const std::vector<int>& n_list,
                                   const CheckOptions& options = {});

/// N(f * g) >= N(f) + N(g) with N = exp(2H) / (2 pi e).
VerificationReport epi_check(const DensityFamily& f, const DensityFamily& g, const CheckOptions& options = {});
VerificationReport epi_check(const GridFunction& f, const GridFunction& g, const std::string& label = "samples");

/// Default t grid {0.1, 0.2, ..., 0.9}.
std::vector<double> default_t_grid();

/// Checks that rho^M + x/s has the opposite sign to x at every t in t_grid
/// (alpha = 1). If it does, confirms H(f) <= log(4 pi s); otherwise the report
/// draws no conclusion. The report passes only when the condition holds.
VerificationReport cauchy_sign_condition(const InputDensity& f, double s, const std::vector<double>& t_grid,
                                         const CheckOptions& options = {});

struct LambdaResult {
    VerificationReport report;
    /// (t, Lambda(X_t)) including t = 0 and t = 1.
    std::vector<std::pair<double, double>> table;
};

/// Lambda(X_t) = -int h_t log g_s on t_grid, and the chain
/// H(f) <= Lambda(X_0) <= Lambda(X_1) = H(g_s) when Lambda is nondecreasing.
LambdaResult lambda_monotonicity(const InputDensity& f, const StableLaw& law, const std::vector<double>& t_grid,
                                 const CheckOptions& options = {});

}  // namespace stable_lab
