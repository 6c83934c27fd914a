#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "easta/errors.hpp"
#include "easta/model.hpp"

namespace easta {

struct ModelConfig {
    double B = 1.0;
    double tau = 1.0;
    ScheduleKind schedule = ScheduleKind::CosineSquared;
    int steps = 2000;
    int dim = 2;
    std::vector<double> samples;  // custom-sampled schedule only

    DriveSchedule drive() const { return DriveSchedule{schedule, B, tau, samples}; }
};

struct BranchingConfig {
    std::vector<double> probabilities{0.5, 0.5};
    int dim_system = 0;  // 0 = inherit model.dim; must match it when set
    int dim_environment = 2;
};

struct SweepConfig {
    std::vector<double> tau_values{0.1, 0.3, 1.0, 3.0, 10.0};
};

// Parsed and validated run configuration (schema version 1, documented in
// the README). Unknown fields are rejected rather than ignored.
struct RunConfig {
    int schema = 1;
    ModelConfig model;
    BranchingConfig branching;
    SweepConfig sweep;
    std::string experiment;  // optional; must name a subcommand when set
    std::string out_dir = "out";
    std::map<std::string, double> tolerances;

    static RunConfig defaults();
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);

    nlohmann::json to_json() const;
    std::string canonical() const;  // sorted-key dump, hash input
    std::string hash() const;       // fnv1a-64 of canonical(), hex
    void validate() const;          // throws ConfigError

    // Tolerance override lookup with a documented default.
    double tolerance(const std::string& key, double fallback) const;
};

// Tolerance override keys accepted in the "tolerances" block.
const std::vector<std::string>& known_tolerance_keys();

} // namespace easta
