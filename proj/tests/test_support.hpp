#pragma once

#include "stable_lab/verifications.hpp"

#include <gtest/gtest.h>

#include <string>

namespace stable_lab::testing {

inline const Comparison& comparison(const VerificationReport& r, const std::string& name) {
    for (const auto& c : r.comparisons)
        if (c.name == name) return c;
    throw std::runtime_error("no comparison named '" + name + "' in " + r.identity_name);
}

inline double metric(const VerificationReport& r, const std::string& name) {
    for (const auto& [key, value] : r.metrics)
        if (key == name) return value;
    throw std::runtime_error("no metric named '" + name + "' in " + r.identity_name);
}

inline InputDensity input(const std::string& spec) { return InputDensity(DensityFamily::parse(spec)); }

}  // namespace stable_lab::testing
