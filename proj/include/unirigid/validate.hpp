// Built-in invariant suites run by `unirigid validate`.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace unirigid {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

const std::vector<std::string>& validation_suite_names();

/// Throws InvalidArgument for an unknown suite name.
SuiteResult run_validation_suite(std::string_view name);

}  // namespace unirigid
