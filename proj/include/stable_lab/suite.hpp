#pragma once

// Fixed batteries of checks used by `stable_lab suite` and the acceptance run.

#include "stable_lab/verifications.hpp"

#include <string>
#include <vector>

namespace stable_lab {

enum class Profile { quick, full };
Profile parse_profile(const std::string& name);
const char* to_string(Profile p);

struct SuiteEntry {
    std::string check;   // e.g. "debruijn cauchy:0.5 alpha=1 s=1 t=0.5"
    bool expected_pass;  // some demos are expected to fail (e.g. a violated sign condition)
    double seconds;
    VerificationReport report;

    bool as_expected() const noexcept { return report.pass == expected_pass; }
};

struct SuiteResult {
    Profile profile;
    Fault fault;
    std::vector<SuiteEntry> entries;

    bool pass() const;
    std::vector<std::string> failures() const;
};

/// Runs the battery in a fixed order. The fault is injected into every check
/// that accepts one.
SuiteResult run_suite(Profile profile, Fault fault = Fault::none);

}  // namespace stable_lab
