#pragma once

// JSON and CSV serialization of reports and tables.

#include "stable_lab/functionals.hpp"
#include "stable_lab/maxent.hpp"
#include "stable_lab/verifications.hpp"

#include <json.hpp>

#include <iosfwd>
#include <vector>

namespace stable_lab {

using Json = nlohmann::ordered_json;

/// Non-finite numbers are written as null.
Json to_json(const VerificationReport& report);
Json to_json(const std::vector<VerificationReport>& reports);
Json to_json(const FunctionalValue& value);
Json to_json(const AttractionDiagnostic& diagnostic);

/// Two columns with the given header names.
void write_table_csv(std::ostream& out, const std::string& x_name, const std::string& y_name,
                     const std::vector<std::pair<double, double>>& rows);

}  // namespace stable_lab
