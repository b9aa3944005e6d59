#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crsma/experiment.hpp"

namespace crsma {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AcceptanceOptions {
    std::uint64_t seed = kDefaultSeed;
    /// 0 means default_worker_count().
    unsigned workers = 0;
    /// Criteria to run; empty runs all of them.
    std::vector<int> only;
};

inline constexpr int kNumCriteria = 10;

std::string criterion_name(int id);

/// Runs the acceptance criteria in id order with their full trial budgets.
/// The results depend only on the seed, never on the worker count.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// One "[PASS] id name: detail" line per criterion plus a summary line.
std::string render_report(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace crsma
