#pragma once

// Structured result of a verification step. Certificates carry the exact
// evidence that justifies the verdict so a report consumer can replay the
// check; "inconclusive" always records the exhausted budget in parameters.

#include <string>
#include <utility>
#include <vector>

namespace bendlab {

struct Certificate {
    std::string check;    // which verification produced this
    std::string verdict;  // "pass" | "fail" | "inconclusive"
    std::string detail;   // one-line human-readable summary
    std::vector<std::pair<std::string, std::string>> evidence;    // ordered exact data
    std::vector<std::pair<std::string, std::string>> parameters;  // budgets, precision, primes

    bool passed() const { return verdict == "pass"; }
};

}  // namespace bendlab
