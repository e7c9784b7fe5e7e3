#include "stable_lab/families.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace stable_lab {
namespace {

constexpr double kPi = std::numbers::pi;

double normal(double variance, double x) {
    return std::exp(-x * x / (2.0 * variance)) / std::sqrt(2.0 * kPi * variance);
}

double parse_number(const std::string& text, const std::string& spec) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
        throw Error("invalid density spec '" + spec + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string(what) + " must be positive");
}

}  // namespace

DensityFamily DensityFamily::cauchy(double scale) {
    require_positive(scale, "cauchy scale");
    return {Kind::cauchy, {scale}};
}

DensityFamily DensityFamily::gaussian(double variance) {
    require_positive(variance, "gaussian variance");
    return {Kind::gaussian, {variance}};
}

DensityFamily DensityFamily::gaussian_mixture(std::vector<std::pair<double, double>> components) {
    if (components.empty()) throw Error("gaussian mixture needs at least one component");
    std::vector<double> params;
    double total = 0.0;
    for (auto [variance, weight] : components) {
        require_positive(variance, "mixture variance");
        require_positive(weight, "mixture weight");
        params.push_back(variance);
        params.push_back(weight);
        total += weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("mixture weights must sum to 1");
    return {Kind::gaussian_mixture, std::move(params)};
}

DensityFamily DensityFamily::laplace(double b) {
    require_positive(b, "laplace scale");
    return {Kind::laplace, {b}};
}

DensityFamily DensityFamily::stable(const StableLaw& law) {
    return {Kind::stable, {law.alpha(), law.s()}};
}

DensityFamily DensityFamily::two_point(double mu, double variance) {
    require_positive(variance, "two-point component variance");
    if (!std::isfinite(mu)) throw Error("two-point location must be finite");
    return {Kind::two_point, {std::abs(mu), variance}};
}

DensityFamily DensityFamily::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw Error("invalid density spec '" + spec + "'");
    const std::string name = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    if (name == "cauchy") return cauchy(parse_number(args, spec));
    if (name == "gaussian") return gaussian(parse_number(args, spec));
    if (name == "laplace") return laplace(parse_number(args, spec));
    if (name == "stable" || name == "two-point") {
        const auto parts = split(args, ',');
        if (parts.size() != 2) throw Error("invalid density spec '" + spec + "'");
        const double a = parse_number(parts[0], spec);
        const double b = parse_number(parts[1], spec);
        return name == "stable" ? stable(StableLaw(a, b)) : two_point(a, b);
    }
    if (name == "gaussian-mixture") {
        std::vector<std::pair<double, double>> components;
        for (const auto& item : split(args, '+')) {
            const auto at = split(item, '@');
            if (at.size() != 2) throw Error("invalid density spec '" + spec + "'");
            components.emplace_back(parse_number(at[0], spec), parse_number(at[1], spec));
        }
        return gaussian_mixture(std::move(components));
    }
    throw Error("unknown density family '" + name + "'");
}

std::string DensityFamily::spec() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::cauchy: os << "cauchy:" << params_[0]; break;
        case Kind::gaussian: os << "gaussian:" << params_[0]; break;
        case Kind::laplace: os << "laplace:" << params_[0]; break;
        case Kind::stable: os << "stable:" << params_[0] << ',' << params_[1]; break;
        case Kind::two_point: os << "two-point:" << params_[0] << ',' << params_[1]; break;
        case Kind::gaussian_mixture:
            os << "gaussian-mixture:";
            for (std::size_t i = 0; i < params_.size(); i += 2)
                os << (i ? "+" : "") << params_[i] << '@' << params_[i + 1];
            break;
    }
    return os.str();
}

double DensityFamily::operator()(double x) const {
    switch (kind_) {
        case Kind::cauchy: return params_[0] / (kPi * (params_[0] * params_[0] + x * x));
        case Kind::gaussian: return normal(params_[0], x);
        case Kind::laplace: return std::exp(-std::abs(x) / params_[0]) / (2.0 * params_[0]);
        case Kind::stable: return density_at(StableLaw(params_[0], params_[1]), x);
        case Kind::two_point:
            return 0.5 * (normal(params_[1], x - params_[0]) + normal(params_[1], x + params_[0]));
        case Kind::gaussian_mixture: {
            double sum = 0.0;
            for (std::size_t i = 0; i < params_.size(); i += 2) sum += params_[i + 1] * normal(params_[i], x);
            return sum;
        }
    }
    return 0.0;
}

std::optional<double> DensityFamily::variance() const {
    switch (kind_) {
        case Kind::cauchy: return std::nullopt;
        case Kind::gaussian: return params_[0];
        case Kind::laplace: return 2.0 * params_[0] * params_[0];
        case Kind::stable:
            if (params_[0] == 2.0) return 2.0 * params_[1];
            return std::nullopt;
        case Kind::two_point: return params_[0] * params_[0] + params_[1];
        case Kind::gaussian_mixture: {
            double v = 0.0;
            for (std::size_t i = 0; i < params_.size(); i += 2) v += params_[i] * params_[i + 1];
            return v;
        }
    }
    return std::nullopt;
}

double DensityFamily::scale() const {
    switch (kind_) {
        case Kind::cauchy:
        case Kind::laplace: return params_[0];
        case Kind::gaussian: return std::sqrt(params_[0]);
        case Kind::stable: return StableLaw(params_[0], params_[1]).width();
        case Kind::two_point: return std::sqrt(params_[1]);
        case Kind::gaussian_mixture: {
            double v = params_[0];
            for (std::size_t i = 0; i < params_.size(); i += 2) v = std::min(v, params_[i]);
            return std::sqrt(v);
        }
    }
    return 1.0;
}

double DensityFamily::half_width_for(double tail_budget) const {
    if (!(tail_budget > 0.0 && tail_budget < 0.1)) throw Error("tail budget must lie in (0, 0.1)");
    const double z = boost::math::erfc_inv(tail_budget) * std::sqrt(2.0);
    switch (kind_) {
        case Kind::cauchy: return params_[0] / std::tan(kPi * tail_budget / 2.0);
        case Kind::gaussian: return z * std::sqrt(params_[0]);
        case Kind::laplace: return params_[0] * std::log(1.0 / tail_budget);
        case Kind::stable: return recommended_half_width(StableLaw(params_[0], params_[1]), tail_budget);
        case Kind::two_point: return params_[0] + z * std::sqrt(params_[1]);
        case Kind::gaussian_mixture: {
            double v = 0.0;
            for (std::size_t i = 0; i < params_.size(); i += 2) v = std::max(v, params_[i]);
            return z * std::sqrt(v);
        }
    }
    return 1.0;
}

DensityFamily DensityFamily::scaled(double c) const {
    if (!(c > 0.0)) throw Error("scale factor must be positive");
    auto p = params_;
    switch (kind_) {
        case Kind::cauchy:
        case Kind::laplace: p[0] *= c; break;
        case Kind::gaussian: p[0] *= c * c; break;
        case Kind::stable: p[1] *= std::pow(c, p[0]); break;
        case Kind::two_point: p[0] *= c; p[1] *= c * c; break;
        case Kind::gaussian_mixture:
            for (std::size_t i = 0; i < p.size(); i += 2) p[i] *= c * c;
            break;
    }
    return {kind_, std::move(p)};
}

std::vector<DensityFamily::GaussianComponent> DensityFamily::gaussian_components() const {
    switch (kind_) {
        case Kind::gaussian: return {{params_[0], 1.0, 0.0}};
        case Kind::two_point: return {{params_[1], 0.5, -params_[0]}, {params_[1], 0.5, params_[0]}};
        case Kind::gaussian_mixture: {
            std::vector<GaussianComponent> out;
            for (std::size_t i = 0; i < params_.size(); i += 2) out.push_back({params_[i], params_[i + 1], 0.0});
            return out;
        }
        case Kind::stable:
            if (params_[0] == 2.0) return {{2.0 * params_[1], 1.0, 0.0}};
            return {};
        default: return {};
    }
}

GridFunction DensityFamily::sample(const Grid& grid) const {
    if (kind_ == Kind::stable) return density(StableLaw(params_[0], params_[1]), grid);
    return GridFunction::sample(grid, [this](double x) { return std::max((*this)(x), kDensityFloor); });
}

}  // namespace stable_lab
