#pragma once

#include <string>
#include <vector>

#include "renewal/asymptotics.hpp"

#include "json.hpp"

namespace renewal::cases {

struct RunOptions {
    std::size_t nmax = 0;  // 0 = case default
    ConvMethod method = ConvMethod::fft;
    std::size_t grid_start = 0;  // 0 = case default
    double grid_ratio = 2.0;
};

struct CaseResult {
    AsymptoticReport report;
    bool pass = false;
    std::string detail;
    nlohmann::json verdict;
};

std::vector<std::string> list();
bool known(const std::string& case_id);

// Builds the case's pinned laws, runs the comparison and applies the case's
// verdict rule. Throws std::invalid_argument for unknown ids and
// std::domain_error when a case is inapplicable at the requested size.
CaseResult run(const std::string& case_id, const RunOptions& opt = {});

}  // namespace renewal::cases
