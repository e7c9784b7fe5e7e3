// stable_lab: command-line front end.
//
// Exit codes: 0 success / all checks pass, 1 a verification failed,
// 2 usage error or invalid parameter.

#include "stable_lab/families.hpp"
#include "stable_lab/functionals.hpp"
#include "stable_lab/interpolation.hpp"
#include "stable_lab/maxent.hpp"
#include "stable_lab/report.hpp"
#include "stable_lab/stable_law.hpp"
#include "stable_lab/suite.hpp"
#include "stable_lab/verifications.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sl = stable_lab;

namespace {

struct Config {
    double alpha = 1.0;
    double s = 1.0;
    std::vector<double> t_list;
    std::optional<std::size_t> n;
    std::optional<double> half_width;
    double tail_budget = 1e-4;
    double dt = 1e-3;
    std::optional<double> tolerance;
    std::string fault = "none";
    std::string input;
    bool symmetrize = false;
    std::string out;
    bool csv = false;

    // command-specific
    std::optional<double> at;
    std::string kind;
    std::string theta = "quadratic";
    std::optional<double> variance;
    double u = 1.0;
    double v = 1.0;
    std::vector<double> x_list;
    std::string quantity = "relent";
    double beta = 2.0;
    std::vector<int> n_list{1, 2, 4, 8, 16, 32};
    std::string input2;
    std::string profile;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw sl::Error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit(const Config& cfg, const sl::Json& j) {
    Output out(cfg.out);
    out.stream() << j.dump(2) << '\n';
}

sl::InputDensity load_input(const Config& cfg) {
    if (cfg.input.empty()) throw sl::Error("--input is required for this command");
    if (std::filesystem::is_regular_file(cfg.input)) {
        std::ifstream in(cfg.input);
        auto gf = sl::read_csv(in);
        if (cfg.n || cfg.half_width) throw sl::Error("--n and --half-width cannot be combined with a CSV input");
        return sl::InputDensity(std::move(gf), cfg.input, cfg.symmetrize);
    }
    return sl::InputDensity(sl::DensityFamily::parse(cfg.input));
}

sl::CheckOptions options_for(const Config& cfg, const sl::InputDensity* input, const sl::StableLaw& law) {
    sl::CheckOptions opt;
    opt.dt = cfg.dt;
    opt.tolerance = cfg.tolerance;
    opt.tail_budget = cfg.tail_budget;
    opt.fault = sl::parse_fault(cfg.fault);
    if (cfg.n || cfg.half_width) {
        double L = cfg.half_width.value_or(0.0);
        std::size_t n = cfg.n.value_or(sl::Grid::default_size());
        if (input && (!cfg.half_width || !cfg.n)) {
            const sl::Grid auto_grid = sl::choose_grid(*input, law, opt);
            if (!cfg.half_width) L = auto_grid.half_width();
            if (!cfg.n) n = auto_grid.size();
        } else if (!cfg.half_width) {
            L = sl::recommended_half_width(law, cfg.tail_budget);
        }
        opt.grid = sl::Grid(L, n);
    }
    return opt;
}

double single_t(const Config& cfg) {
    if (cfg.t_list.size() != 1) throw sl::Error("exactly one --t is required for this command");
    return cfg.t_list.front();
}

std::vector<double> t_list_or(const Config& cfg, std::vector<double> fallback) {
    return cfg.t_list.empty() ? fallback : cfg.t_list;
}

int verdict(const std::vector<sl::VerificationReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return 1;
    return 0;
}

// --- density ------------------------------------------------------------------

int run_density(const Config& cfg) {
    const sl::StableLaw law(cfg.alpha, cfg.s);
    if (cfg.at) {
        Output out(cfg.out);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", sl::density_at(law, *cfg.at));
        out.stream() << buf << '\n';
        return 0;
    }
    const double L = cfg.half_width.value_or(sl::recommended_half_width(law, cfg.tail_budget));
    const sl::Grid grid(L, cfg.n.value_or(sl::Grid::default_size()));
    Output out(cfg.out);
    sl::write_csv(out.stream(), sl::density(law, grid));
    return 0;
}

// --- score --------------------------------------------------------------------

int run_score(const Config& cfg) {
    const sl::StableLaw law(cfg.alpha, cfg.s);
    const auto input = load_input(cfg);
    const auto opt = options_for(cfg, &input, law);
    const double t = single_t(cfg);
    const sl::Grid grid = sl::choose_grid(input, law, opt);
    const auto path = input.path(grid, law, t);
    const auto scores = sl::mmse_score(path);
    for (const auto& w : scores.warnings) std::cerr << "warning: " << w << '\n';

    Output out(cfg.out);
    auto& os = out.stream();
    os << "x,h_t,mmse_score,fisher_score,standardized_mmse,standardized_fisher,mask\n";
    char buf[256];
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const int len = std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", grid.x(k),
                                      path.h_t[k], scores.mmse_score[k], scores.fisher_score[k],
                                      scores.standardized_mmse[k], scores.standardized_fisher[k],
                                      scores.valid_mask[k] ? 1 : 0);
        os.write(buf, len);
    }
    return 0;
}

// --- functional ---------------------------------------------------------------

int run_functional(const Config& cfg) {
    const sl::StableLaw law(cfg.alpha, cfg.s);
    const auto input = load_input(cfg);
    const auto opt = options_for(cfg, &input, law);
    const double t = cfg.t_list.empty() ? 0.0 : single_t(cfg);
    const sl::Grid grid = sl::choose_grid(input, law, opt);

    // The functional is taken of h_t; t = 0 gives the input density itself.
    const auto density_at_t = [&]() -> sl::GridFunction {
        return t == 0.0 ? sl::clamp_to_floor(input.sample(grid)) : input.path(grid, law, t).h_t;
    };

    sl::FunctionalValue value;
    if (cfg.kind == "entropy") {
        value = sl::entropy(density_at_t());
    } else if (cfg.kind == "relent") {
        value = sl::relative_entropy(density_at_t(), sl::density(law, grid));
    } else if (cfg.kind == "energy") {
        value = sl::energy(density_at_t(), law);
    } else if (cfg.kind == "fisher") {
        const auto h = density_at_t();
        value = sl::standardized_fisher_information(h, cfg.variance.value_or(sl::second_moment(h)));
    } else if (cfg.kind == "mutinfo") {
        if (t <= 0.0) throw sl::Error("mutinfo requires --t in (0, 1]");
        value = sl::mutual_information(input.path(grid, law, t));
    } else if (cfg.kind == "theta") {
        value = sl::theta_functional(density_at_t(), sl::parse_theta(cfg.theta));
    } else {
        throw sl::Error("unknown functional kind '" + cfg.kind + "'");
    }
    emit(cfg, sl::to_json(value));
    return 0;
}

// --- verify -------------------------------------------------------------------

int run_verify(const Config& cfg) {
    std::vector<sl::VerificationReport> reports;
    const std::string& k = cfg.kind;
    if (k == "condexp") {
        const sl::StableLaw law(cfg.alpha, cfg.u + cfg.v);  // validates alpha
        const auto opt = options_for(cfg, nullptr, law);
        const auto xs = cfg.x_list.empty() ? sl::default_condexp_points() : cfg.x_list;
        reports.push_back(sl::condexp_check(cfg.alpha, cfg.u, cfg.v, xs, opt));
    } else if (k == "heat" || k == "gaussian-debruijn" || k == "gaussian-mmse") {
        const auto input = load_input(cfg);
        const double variance = cfg.variance.value_or(k == "gaussian-mmse" ? 1.0 : input.variance().value_or(0.0));
        if (!(variance > 0.0)) throw sl::Error("--variance is required for inputs without a finite variance");
        const auto opt = options_for(cfg, &input, sl::StableLaw(2.0, variance / 2.0));
        if (k == "heat") {
            for (double t : t_list_or(cfg, {0.5})) reports.push_back(sl::heat_equation_check(input, variance, t, opt));
        } else if (k == "gaussian-debruijn") {
            reports = sl::gaussian_debruijn_check(input, variance, t_list_or(cfg, {0.25, 0.5, 0.75}), opt);
        } else {
            reports = sl::gaussian_mmse_check(input, t_list_or(cfg, {0.5}), opt);
        }
    } else {
        const sl::StableLaw law(cfg.alpha, cfg.s);
        const auto input = load_input(cfg);
        const auto opt = options_for(cfg, &input, law);
        const auto ts = t_list_or(cfg, {0.25, 0.5, 0.75});
        if (k == "pde") {
            for (double t : ts) reports.push_back(sl::pde_residual(input, law, t, opt));
        } else if (k == "debruijn") {
            reports = sl::debruijn_check(input, law, ts, opt);
        } else if (k == "entropy-energy") {
            for (double t : ts) reports.push_back(sl::entropy_energy_check(input, law, t, opt));
        } else if (k == "mutinfo") {
            for (double t : ts) reports.push_back(sl::mutual_info_check(input, law, t, opt));
        } else if (k == "score-props") {
            reports.push_back(sl::score_properties_check(input, law, ts, opt));
        } else if (k == "richardson") {
            const double dt = cfg.dt == 1e-3 ? 0.04 : cfg.dt;
            for (double t : t_list_or(cfg, {0.5}))
                reports.push_back(sl::richardson_check(sl::parse_fd_quantity(cfg.quantity), input, law, t, dt, opt));
        } else {
            throw sl::Error("unknown verification '" + k + "'");
        }
    }
    emit(cfg, sl::to_json(reports));
    return verdict(reports);
}

// --- maxent -------------------------------------------------------------------

int run_maxent(const Config& cfg) {
    const std::string& k = cfg.kind;
    std::vector<sl::VerificationReport> reports;
    if (k == "notdoa") {
        const sl::StableLaw law(cfg.alpha, cfg.s);
        const auto opt = options_for(cfg, nullptr, law);
        auto res = sl::notdoa_counterexample(cfg.alpha, cfg.beta, cfg.s, cfg.n_list, opt);
        if (cfg.csv) {
            std::vector<std::pair<double, double>> rows;
            for (std::size_t i = 0; i < res.diagnostic.n_list.size(); ++i)
                rows.emplace_back(res.diagnostic.n_list[i], res.diagnostic.sup_distances[i]);
            Output out(cfg.out);
            sl::write_table_csv(out.stream(), "n", "sup_distance", rows);
        } else {
            sl::Json j = sl::to_json(std::vector{res.report});
            emit(cfg, j);
        }
        return res.report.pass ? 0 : 1;
    }
    if (k == "epi") {
        if (cfg.input.empty() || cfg.input2.empty()) throw sl::Error("epi requires --input and --input2");
        const sl::StableLaw law(cfg.alpha, cfg.s);
        const auto opt = options_for(cfg, nullptr, law);
        reports.push_back(
            sl::epi_check(sl::DensityFamily::parse(cfg.input), sl::DensityFamily::parse(cfg.input2), opt));
    } else if (k == "sign-condition") {
        const auto input = load_input(cfg);
        const auto opt = options_for(cfg, &input, sl::StableLaw(1.0, cfg.s));
        reports.push_back(sl::cauchy_sign_condition(input, cfg.s, t_list_or(cfg, sl::default_t_grid()), opt));
    } else if (k == "lambda") {
        const sl::StableLaw law(cfg.alpha, cfg.s);
        const auto input = load_input(cfg);
        const auto opt = options_for(cfg, &input, law);
        auto res = sl::lambda_monotonicity(input, law, t_list_or(cfg, sl::default_t_grid()), opt);
        if (cfg.csv) {
            Output out(cfg.out);
            sl::write_table_csv(out.stream(), "t", "lambda", res.table);
            return res.report.pass ? 0 : 1;
        }
        reports.push_back(std::move(res.report));
    } else {
        throw sl::Error("unknown maxent demo '" + k + "'");
    }
    if (cfg.csv) throw sl::Error("--csv is only available for notdoa and lambda");
    emit(cfg, sl::to_json(reports));
    return verdict(reports);
}

// --- suite --------------------------------------------------------------------

int run_suite(const Config& cfg) {
    const auto result = sl::run_suite(sl::parse_profile(cfg.profile), sl::parse_fault(cfg.fault));
    sl::Json j;
    j["profile"] = sl::to_string(result.profile);
    j["fault"] = cfg.fault;
    j["pass"] = result.pass();
    j["failures"] = result.failures();
    sl::Json entries = sl::Json::array();
    for (const auto& e : result.entries)
        entries.push_back({{"check", e.check},
                           {"expected_pass", e.expected_pass},
                           {"seconds", e.seconds},
                           {"report", sl::to_json(e.report)}});
    j["reports"] = std::move(entries);
    emit(cfg, j);
    for (const auto& f : result.failures()) std::cerr << "FAILED: " << f << '\n';
    return result.pass() ? 0 : 1;
}

// --- option wiring ------------------------------------------------------------

void add_law(CLI::App* app, Config& cfg) {
    app->add_option("--alpha", cfg.alpha, "Stability exponent in (0.5, 2]")->capture_default_str();
    app->add_option("--s", cfg.s, "Scale parameter s > 0")->capture_default_str();
}

void add_grid(CLI::App* app, Config& cfg) {
    app->add_option("--n", cfg.n, "Number of grid points (power of two)");
    app->add_option("--half-width", cfg.half_width, "Grid half-width L");
    app->add_option("--tail-budget", cfg.tail_budget, "Tail mass allowed outside the grid")->capture_default_str();
}

void add_common(CLI::App* app, Config& cfg) {
    add_grid(app, cfg);
    app->add_option("--dt", cfg.dt, "Step of central differences in t")->capture_default_str();
    app->add_option("--tolerance", cfg.tolerance, "Override the default tolerance");
    app->add_option("--fault", cfg.fault, "Inject a fault: none, debruijn-sign, pde-prefactor, score-sign")
        ->capture_default_str();
    app->add_option("--input", cfg.input, "Input density: family spec (cauchy:0.5, stable:1.5,1, ...) or CSV path");
    app->add_flag("--symmetrize", cfg.symmetrize, "Symmetrize a CSV input instead of rejecting it");
    app->add_option("--t", cfg.t_list, "Interpolation time(s) in (0, 1); repeatable")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for symmetric stable laws, score functions and information identities"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.add_option("--out", cfg.out, "Write output to this file instead of stdout");

    auto* density = app.add_subcommand("density", "Stable density at a point or as CSV on a grid");
    add_law(density, cfg);
    add_grid(density, cfg);
    density->add_option("--at", cfg.at, "Evaluate at this single point");

    auto* score = app.add_subcommand("score", "Scores along the interpolation path as CSV");
    add_law(score, cfg);
    add_common(score, cfg);

    auto* functional = app.add_subcommand("functional", "Information functional of h_t as JSON");
    add_law(functional, cfg);
    add_common(functional, cfg);
    functional->add_option("--kind", cfg.kind, "entropy, relent, fisher, energy, mutinfo or theta")
        ->required()
        ->check(CLI::IsMember({"entropy", "relent", "fisher", "energy", "mutinfo", "theta"}));
    functional->add_option("--theta", cfg.theta, "quadratic or plog")->capture_default_str();
    functional->add_option("--variance", cfg.variance, "Reference variance of the Fisher information");

    auto* verify = app.add_subcommand("verify", "Run one verification and print JSON reports");
    verify->add_option("kind", cfg.kind)
        ->required()
        ->check(CLI::IsMember({"pde", "heat", "debruijn", "gaussian-debruijn", "entropy-energy", "mutinfo",
                               "gaussian-mmse", "condexp", "score-props", "richardson"}));
    add_law(verify, cfg);
    add_common(verify, cfg);
    verify->add_option("--u", cfg.u, "condexp: first scale")->capture_default_str();
    verify->add_option("--v", cfg.v, "condexp: second scale")->capture_default_str();
    verify->add_option("--x", cfg.x_list, "condexp: evaluation points")->delimiter(',');
    verify->add_option("--variance", cfg.variance, "Gaussian reference variance (heat, gaussian-*)");
    verify->add_option("--quantity", cfg.quantity, "richardson: density, relent, entropy, energy or mutinfo")
        ->capture_default_str();

    auto* maxent = app.add_subcommand("maxent", "Maximum-entropy demos");
    maxent->add_option("kind", cfg.kind)->required()->check(
        CLI::IsMember({"notdoa", "epi", "sign-condition", "lambda"}));
    add_law(maxent, cfg);
    add_common(maxent, cfg);
    maxent->add_option("--beta", cfg.beta, "notdoa: exponent of the added component")->capture_default_str();
    maxent->add_option("--n-list", cfg.n_list, "notdoa: sample sizes")->delimiter(',');
    maxent->add_option("--input2", cfg.input2, "epi: second density family");
    maxent->add_flag("--csv", cfg.csv, "Emit the distance(n) or Lambda(t) table as CSV");

    auto* suite = app.add_subcommand("suite", "Run a fixed battery of checks");
    suite->add_option("profile", cfg.profile)->required()->check(CLI::IsMember({"quick", "full"}));
    suite->add_option("--fault", cfg.fault, "Inject a fault into every check")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "stable_lab: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*density) return run_density(cfg);
        if (*score) return run_score(cfg);
        if (*functional) return run_functional(cfg);
        if (*verify) return run_verify(cfg);
        if (*maxent) return run_maxent(cfg);
        if (*suite) return run_suite(cfg);
    } catch (const sl::Error& e) {
        std::cerr << "stable_lab: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "stable_lab: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
