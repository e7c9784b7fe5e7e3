#include "stable_lab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace stable_lab {
namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

}  // namespace

Json to_json(const VerificationReport& r) {
    Json j;
    j["identity_name"] = r.identity_name;
    j["convention"] = to_string(r.convention);
    j["residual_norm"] = number(r.residual_norm);
    j["residual_l1"] = number(r.residual_l1);
    j["lhs_value"] = number(r.lhs_value);
    j["rhs_value"] = number(r.rhs_value);
    j["tolerance"] = number(r.tolerance);
    j["pass"] = r.pass;
    j["dt_used"] = number(r.dt_used);
    if (r.grid_used)
        j["grid_used"] = {{"half_width", r.grid_used->half_width()},
                          {"n", r.grid_used->size()},
                          {"spacing", r.grid_used->spacing()}};
    else
        j["grid_used"] = nullptr;
    j["oracle"] = r.oracle;
    j["notes"] = r.notes;
    Json comparisons = Json::array();
    for (const auto& c : r.comparisons)
        comparisons.push_back({{"name", c.name},
                               {"lhs", number(c.lhs)},
                               {"rhs", number(c.rhs)},
                               {"residual", number(c.residual)},
                               {"tolerance", number(c.tolerance)},
                               {"pass", c.pass},
                               {"informational", c.informational}});
    j["comparisons"] = std::move(comparisons);
    Json metrics = Json::object();
    for (const auto& [name, value] : r.metrics) metrics[name] = number(value);
    j["metrics"] = std::move(metrics);
    return j;
}

Json to_json(const std::vector<VerificationReport>& reports) {
    Json j = Json::array();
    for (const auto& r : reports) j.push_back(to_json(r));
    return j;
}

Json to_json(const FunctionalValue& v) {
    return {{"value", number(v.value)}, {"truncation_estimate", number(v.truncation_estimate)},
            {"mask_mass", number(v.mask_mass)}};
}

Json to_json(const AttractionDiagnostic& d) {
    Json distances = Json::array();
    Json entropies = Json::array();
    for (double v : d.sup_distances) distances.push_back(number(v));
    for (double v : d.entropies) entropies.push_back(number(v));
    return {{"n_list", d.n_list}, {"sup_distances", distances}, {"entropies", entropies}};
}

void write_table_csv(std::ostream& out, const std::string& x_name, const std::string& y_name,
                     const std::vector<std::pair<double, double>>& rows) {
    out << x_name << ',' << y_name << '\n';
    char buf[64];
    for (const auto& [x, y] : rows) {
        const int len = std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, y);
        out.write(buf, len);
    }
}

}  // namespace stable_lab
