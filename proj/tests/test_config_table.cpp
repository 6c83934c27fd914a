#include <doctest.h>

#include <json.hpp>

#include "easta/config.hpp"
#include "easta/experiments.hpp"
#include "easta/table.hpp"

using namespace easta;
using nlohmann::json;

TEST_CASE("defaults validate and round-trip through JSON") {
    const RunConfig cfg = RunConfig::defaults();
    cfg.validate();
    const RunConfig reparsed = RunConfig::from_json(cfg.to_json());
    CHECK(reparsed.canonical() == cfg.canonical());
    CHECK(reparsed.hash() == cfg.hash());
    CHECK(cfg.hash().size() == 16);
}

TEST_CASE("a full config parses field by field") {
    const json j = {
        {"schema", 1},
        {"model",
         {{"B", 2.0}, {"tau", 0.5}, {"schedule", "linear"}, {"steps", 500}, {"dim", 2}}},
        {"branching", {{"probabilities", {0.25, 0.25, 0.25, 0.25}}, {"dim_environment", 6}}},
        {"sweep", {{"tau_values", {0.2, 2.0}}}},
        {"experiment", "figure-cost"},
        {"out_dir", "results"},
        {"tolerances", {{"easta_overlap", 1e-7}}},
    };
    const RunConfig cfg = RunConfig::from_json(j);
    CHECK(cfg.model.B == 2.0);
    CHECK(cfg.model.tau == 0.5);
    CHECK(cfg.model.schedule == ScheduleKind::Linear);
    CHECK(cfg.model.steps == 500);
    CHECK(cfg.branching.probabilities.size() == 4);
    CHECK(cfg.branching.dim_environment == 6);
    CHECK(cfg.sweep.tau_values == std::vector<double>{0.2, 2.0});
    CHECK(cfg.experiment == "figure-cost");
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.tolerance("easta_overlap", 1e-6) == 1e-7);
    CHECK(cfg.tolerance("cost_equality", 1e-6) == 1e-6);
}

TEST_CASE("unknown fields are rejected everywhere") {
    CHECK_THROWS_AS(RunConfig::from_json({{"schema", 1}, {"surprise", 1}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"model", {{"B", 1.0}, {"bee", 2.0}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"branching", {{"probs", {1.0}}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"sweep", {{"taus", {1.0}}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"tolerances", {{"magic", 1e-3}}}}), ConfigError);
}

TEST_CASE("validation rejects out-of-contract values") {
    CHECK_THROWS_AS(RunConfig::from_json({{"schema", 2}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"model", {{"steps", 1}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"model", {{"tau", -1.0}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"model", {{"schedule", "smooth"}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"model", {{"schedule", "custom-sampled"}}}}),
                    ConfigError);
    CHECK_THROWS_AS(
        RunConfig::from_json({{"model", {{"samples", {1.0, 0.0}}}}}),  // not custom-sampled
        ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"branching", {{"probabilities", {0.9, 0.2}}}}}),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"branching",
                                           {{"probabilities", {0.5, 0.5}},
                                            {"dim_environment", 1}}}}),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"branching", {{"dim_system", 3}}}}), ConfigError);
    CHECK(RunConfig::from_json({{"branching", {{"dim_system", 2}}}}).branching.dim_system == 2);
    CHECK_THROWS_AS(RunConfig::from_json({{"experiment", "plot-everything"}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"sweep", {{"tau_values", json::array()}}}}),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("result tables enforce shape and finiteness") {
    ResultTable table;
    table.columns = {"a", "b"};
    table.add_row({1.0, 2.0});
    CHECK_THROWS_AS(table.add_row({1.0}), ContractError);
    CHECK_THROWS_AS(table.add_row({1.0, std::numeric_limits<double>::infinity()}),
                    ContractError);
}

TEST_CASE("CSV output carries metadata comments and 12 significant digits") {
    ResultTable table;
    table.columns = {"x", "y"};
    table.metadata["config_hash"] = "deadbeef";
    table.add_row({1.0 / 3.0, 2.0});
    const std::string csv = table.to_csv();
    CHECK(csv.find("# config_hash=deadbeef\n") != std::string::npos);
    CHECK(csv.find("x,y\n") != std::string::npos);
    CHECK(csv.find("0.333333333333,2\n") != std::string::npos);
}

TEST_CASE("experiment tables are deterministic and reproducible from embedded config") {
    RunConfig cfg = RunConfig::defaults();
    cfg.model.steps = 200;

    const ResultTable first = figure_cost(cfg, 42);
    const ResultTable second = figure_cost(cfg, 42);
    CHECK(first.to_csv() == second.to_csv());

    // re-running from the embedded config reproduces the rows bit for bit
    const RunConfig embedded =
        RunConfig::from_json(json::parse(first.metadata.at("config")));
    const ResultTable third = figure_cost(embedded, 42);
    REQUIRE(third.rows.size() == first.rows.size());
    for (std::size_t r = 0; r < first.rows.size(); ++r) {
        for (std::size_t c = 0; c < first.rows[r].size(); ++c) {
            CHECK(third.rows[r][c] == first.rows[r][c]);
        }
    }
    CHECK(first.metadata.at("config_hash") == embedded.hash());
}
