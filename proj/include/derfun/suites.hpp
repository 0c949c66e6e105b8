#pragma once

#include "derfun/doldkan.hpp"

#include <map>
#include <string>
#include <vector>

namespace derfun {

struct Check {
    std::string name;
    std::map<std::string, long> params;
    bool pass = false;
    std::string detail;
};

struct SuiteOptions {
    int d = 4;         // conjecture suite
    int max_rank = 2;  // brute-cross and conjecture suites
    EngineOptions engine;
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs one of koszul, closedform, stable, conjecture, brute-cross. Checks run
/// in a fixed order; exceptions inside a check become failures.
std::vector<Check> run_suite(const std::string& suite, const SuiteOptions& opts = {});

}  // namespace derfun
