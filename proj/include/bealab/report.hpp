#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace bealab {

// one acceptance criterion: hard pass/fail plus informational notes that are
// recorded but never affect the verdict
struct CriterionResult {
    std::string id;
    bool pass = false;
    std::vector<std::string> details;
    std::vector<std::string> info;
    nlohmann::json data;
};

std::vector<std::string> criterion_ids();
CriterionResult run_criterion(const std::string& id);
std::vector<CriterionResult> run_all_criteria();

// machine-readable report over all criteria, including the standing
// informational entries; deterministic body (no timestamps)
nlohmann::json build_report(const std::vector<CriterionResult>& results);

}  // namespace bealab
