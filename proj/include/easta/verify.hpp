#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "easta/config.hpp"

namespace easta {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    // "<=" for defect bounds, ">" for expected obstructions / dips.
    std::string comparison = "<=";
    std::string note;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass = false;
    std::string config_hash;
    std::uint64_t seed = 0;
    double elapsed_seconds = 0.0;

    nlohmann::json to_json() const;
};

// Runs the full invariant suite: linear-algebra contracts, gauge and
// propagation checks, transport/cost identities, the similarity and
// spectrum equalities, and the uneven-probability obstruction diagnostics.
// Failures are reported, never thrown.
VerifyReport run_verify(const RunConfig& cfg, std::uint64_t seed);

} // namespace easta
