#include "easta/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace easta {

using nlohmann::json;

namespace {

void expect_fields(const json& j, const std::string& where,
                   const std::set<std::string>& allowed) {
    if (!j.is_object()) {
        throw ConfigError("config: '" + where + "' must be a JSON object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (allowed.find(it.key()) == allowed.end()) {
            throw ConfigError("config: unknown field '" + it.key() + "' in " + where);
        }
    }
}

double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) {
        throw ConfigError("config: '" + where + "' must be a number");
    }
    return j.get<double>();
}

int require_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) {
        throw ConfigError("config: '" + where + "' must be an integer");
    }
    return j.get<int>();
}

std::string require_string(const json& j, const std::string& where) {
    if (!j.is_string()) {
        throw ConfigError("config: '" + where + "' must be a string");
    }
    return j.get<std::string>();
}

std::vector<double> require_number_array(const json& j, const std::string& where) {
    if (!j.is_array()) {
        throw ConfigError("config: '" + where + "' must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        out.push_back(require_number(v, where));
    }
    return out;
}

const std::set<std::string> kExperiments = {"figure-overlap", "figure-cost", "sweep-tau",
                                            "verify"};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

const std::vector<std::string>& known_tolerance_keys() {
    static const std::vector<std::string> keys = {
        "easta_overlap",     // per-branch transport overlap deviation from 1
        "cost_equality",     // |C_CD - C_env| relative bound
        "defining_identity", // joint-state residual of the transport identity
        "spectrum_equality", // H_env vs H_CD eigenvalue match
        "route_agreement",   // env_hamiltonian closed form vs derivative route
        "obstruction_floor", // uneven-probability defect must exceed this
        "unitarity",         // generic unitarity defect bound
        "self_convergence",  // propagator K vs 2K final difference
    };
    return keys;
}

RunConfig RunConfig::defaults() { return RunConfig{}; }

RunConfig RunConfig::from_json(const json& j) {
    expect_fields(j, "top level",
                  {"schema", "model", "branching", "sweep", "experiment", "out_dir",
                   "tolerances"});
    RunConfig cfg;
    if (j.contains("schema")) cfg.schema = require_int(j["schema"], "schema");

    if (j.contains("model")) {
        const auto& m = j["model"];
        expect_fields(m, "model", {"B", "tau", "schedule", "steps", "dim", "samples"});
        if (m.contains("B")) cfg.model.B = require_number(m["B"], "model.B");
        if (m.contains("tau")) cfg.model.tau = require_number(m["tau"], "model.tau");
        if (m.contains("schedule")) {
            const std::string name = require_string(m["schedule"], "model.schedule");
            try {
                cfg.model.schedule = schedule_kind_from_string(name);
            } catch (const ContractError& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
        }
        if (m.contains("steps")) cfg.model.steps = require_int(m["steps"], "model.steps");
        if (m.contains("dim")) cfg.model.dim = require_int(m["dim"], "model.dim");
        if (m.contains("samples"))
            cfg.model.samples = require_number_array(m["samples"], "model.samples");
    }

    if (j.contains("branching")) {
        const auto& b = j["branching"];
        expect_fields(b, "branching", {"probabilities", "dim_system", "dim_environment"});
        if (b.contains("probabilities"))
            cfg.branching.probabilities =
                require_number_array(b["probabilities"], "branching.probabilities");
        if (b.contains("dim_system"))
            cfg.branching.dim_system = require_int(b["dim_system"], "branching.dim_system");
        if (b.contains("dim_environment"))
            cfg.branching.dim_environment =
                require_int(b["dim_environment"], "branching.dim_environment");
    }

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        expect_fields(s, "sweep", {"tau_values"});
        if (s.contains("tau_values"))
            cfg.sweep.tau_values = require_number_array(s["tau_values"], "sweep.tau_values");
    }

    if (j.contains("experiment")) cfg.experiment = require_string(j["experiment"], "experiment");
    if (j.contains("out_dir")) cfg.out_dir = require_string(j["out_dir"], "out_dir");

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) {
            throw ConfigError("config: 'tolerances' must be an object");
        }
        const auto& keys = known_tolerance_keys();
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
                throw ConfigError("config: unknown tolerance key '" + it.key() + "'");
            }
            cfg.tolerances[it.key()] = require_number(it.value(), "tolerances." + it.key());
        }
    }

    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config: parse error in '" + path + "': " + e.what());
    }
    return from_json(j);
}

json RunConfig::to_json() const {
    json j;
    j["schema"] = schema;
    j["model"] = {{"B", model.B},
                  {"tau", model.tau},
                  {"schedule", to_string(model.schedule)},
                  {"steps", model.steps},
                  {"dim", model.dim}};
    if (!model.samples.empty()) {
        j["model"]["samples"] = model.samples;
    }
    j["branching"] = {{"probabilities", branching.probabilities},
                      {"dim_environment", branching.dim_environment}};
    if (branching.dim_system != 0) {
        j["branching"]["dim_system"] = branching.dim_system;
    }
    j["sweep"] = {{"tau_values", sweep.tau_values}};
    if (!experiment.empty()) {
        j["experiment"] = experiment;
    }
    j["out_dir"] = out_dir;
    if (!tolerances.empty()) {
        j["tolerances"] = tolerances;
    }
    return j;
}

std::string RunConfig::canonical() const {
    // nlohmann objects keep keys sorted, so dump() is canonical.
    return to_json().dump();
}

std::string RunConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical())));
    return std::string(buf);
}

void RunConfig::validate() const {
    if (schema != 1) {
        throw ConfigError("config: unsupported schema version (expected 1)");
    }
    if (!std::isfinite(model.B)) {
        throw ConfigError("config: model.B must be finite");
    }
    if (!(model.tau > 0.0) || !std::isfinite(model.tau)) {
        throw ConfigError("config: model.tau must be positive");
    }
    if (model.steps < 2) {
        throw ConfigError("config: model.steps must be >= 2");
    }
    if (model.dim < 1) {
        throw ConfigError("config: model.dim must be >= 1");
    }
    if (model.schedule == ScheduleKind::CustomSampled && model.samples.size() < 2) {
        throw ConfigError("config: custom-sampled schedule needs >= 2 samples");
    }
    if (model.schedule != ScheduleKind::CustomSampled && !model.samples.empty()) {
        throw ConfigError("config: model.samples is only valid for the custom-sampled schedule");
    }
    if (branching.probabilities.empty()) {
        throw ConfigError("config: branching.probabilities must not be empty");
    }
    double sum = 0.0;
    for (double p : branching.probabilities) {
        if (!(p >= 0.0) || p > 1.0) {
            throw ConfigError("config: branch probabilities must lie in [0, 1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ConfigError("config: branch probabilities must sum to 1");
    }
    if (branching.dim_system != 0 && branching.dim_system != model.dim) {
        throw ConfigError("config: branching.dim_system must match model.dim when set");
    }
    if (branching.dim_environment < static_cast<int>(branching.probabilities.size())) {
        throw ConfigError("config: branching.dim_environment must be >= branch count");
    }
    if (sweep.tau_values.empty()) {
        throw ConfigError("config: sweep.tau_values must not be empty");
    }
    for (double tau : sweep.tau_values) {
        if (!(tau > 0.0) || !std::isfinite(tau)) {
            throw ConfigError("config: sweep.tau_values must be positive");
        }
    }
    if (!experiment.empty() && kExperiments.find(experiment) == kExperiments.end()) {
        throw ConfigError("config: unknown experiment '" + experiment + "'");
    }
    for (const auto& [key, value] : tolerances) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw ConfigError("config: tolerance '" + key + "' must be positive");
        }
    }
}

double RunConfig::tolerance(const std::string& key, double fallback) const {
    const auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
}

} // namespace easta
