#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "ricsim/report.hpp"
#include "ricsim/runner.hpp"
#include "ricsim/scenario.hpp"

using namespace ricsim;
using namespace ricsim::harness;

namespace {

// small but complete: mobility, two cells, short horizon
const char* kMini = R"({
  "name": "mini",
  "ticks": 40,
  "seed": 5,
  "cells": [
    {"id": "cellA", "x": 250, "y": 500},
    {"id": "cellB", "x": 750, "y": 500}
  ],
  "ues": [{"count": 6, "traffic_demand_mbps": 40, "speed_m_per_tick": 5, "initial_cell": "cellA"}],
  "apps": {"rapp_period": 10, "anomaly_threshold": 50.0}
})";

Scenario mini() { return parse_scenario(kMini); }

}  // namespace

TEST_CASE("runs are byte-identical for the same seed") {
    RunResult a = run(mini());
    RunResult b = run(mini());
    CHECK(a.report_bytes == b.report_bytes);
    CHECK_FALSE(a.report_bytes.empty());
    CHECK(a.report_bytes.back() == '\n');

    // and actually differ under another seed
    RunResult c = run(mini(), 99);
    CHECK(c.report.seed == 99);
    CHECK(c.report_bytes != a.report_bytes);
}

TEST_CASE("attack-free report sanity") {
    RunResult r = run(mini());
    const MetricsReport& rep = r.report;
    CHECK(rep.scenario_name == "mini");
    CHECK(rep.ticks == 40);
    CHECK(rep.seed == 5);
    CHECK(rep.config_hash == config_hash(mini()));
    CHECK(rep.attacks.empty());
    CHECK(rep.defence.alert_count == 0);
    CHECK(rep.defence.quarantine_count == 0);
    CHECK(rep.defence.precision == 1.0);  // vacuous
    CHECK(rep.defence.recall == 1.0);
    CHECK(rep.network.mean_ue_throughput_mbps > 0.0);
    CHECK(rep.pipeline.predictions_sent > 0);
    CHECK(rep.pipeline.model_version >= 1);
    CHECK(rep.overhead.tick_ms == kTickMs);
    CHECK(rep.overhead.mean_tick_cost_units > 0.0);
    // no defences enabled: no defence work
    CHECK(rep.overhead.defence_fraction == 0.0);
    CHECK(rep.pipeline.median_control_latency_ms ==
          rep.pipeline.median_control_latency_ticks * kTickMs);
    // kpimon subscribes to both cells every tick and is never rejected
    CHECK(rep.pipeline.legit_sub_attempts == 2 * 40);
    CHECK(rep.pipeline.sub_denial_rate == 0.0);
    CHECK(rep.pipeline.post_quarantine_denial_rate == -1.0);
}

TEST_CASE("csv row matches the header") {
    RunResult r = run(mini());
    const std::string header = report_csv_header();
    const std::string row = report_csv_row(r.report);
    CHECK(std::count(header.begin(), header.end(), ',') ==
          std::count(row.begin(), row.end(), ','));
    CHECK(row.rfind("mini,", 0) == 0);
}

TEST_CASE("sweep enumerates grid times seeds, seeds innermost") {
    Scenario base = mini();

    CHECK(sweep(base, Json::object(), {5}).size() == 1);

    Json grid{{"/ticks", {20, 30}}};
    std::vector<RunResult> results = sweep(base, grid, {1, 2, 3});
    REQUIRE(results.size() == 6);
    const std::pair<Tick, std::uint64_t> want[] = {{20, 1}, {20, 2}, {20, 3},
                                                   {30, 1}, {30, 2}, {30, 3}};
    for (int i = 0; i < 6; ++i) {
        CHECK(results[i].report.ticks == want[i].first);
        CHECK(results[i].report.seed == want[i].second);
    }

    // rerunning the same sweep reproduces every byte
    std::vector<RunResult> again = sweep(base, grid, {1, 2, 3});
    for (int i = 0; i < 6; ++i) CHECK(results[i].report_bytes == again[i].report_bytes);

    CHECK_THROWS_AS(sweep(base, Json{{"/no/such/field", {1, 2}}}, {1}), ValidationError);
    // edits are validated like any other scenario
    CHECK_THROWS_AS(sweep(base, Json{{"/ticks", {0}}}, {1}), ValidationError);
}

TEST_CASE("nested sweep pointers reach platform knobs") {
    Json grid{{"/platform/conflict_budget", {8, 32}}};
    std::vector<RunResult> results = sweep(mini(), grid, {5});
    REQUIRE(results.size() == 2);
    CHECK(results[0].report_bytes != results[1].report_bytes);  // hash differs at least
}

TEST_CASE("compare: identity, deltas, family guard") {
    Json base = report_to_json(run(mini()).report);
    Json cmp = compare_reports(base, {base});
    CHECK(cmp.at("variant_count") == 1);
    CHECK(cmp.at("family").get<std::string>() ==
          base.at("config_hash").get<std::string>().substr(0, 16));
    REQUIRE(cmp.at("deltas").size() == 1);
    for (const auto& entry : cmp["deltas"][0].items()) {
        CHECK(entry.value().at("delta").get<double>() == 0.0);
    }

    // a same-family variant with different ticks produces a nonzero delta
    Scenario variant = mini();
    variant.ticks = 30;
    Json vrep = report_to_json(run(variant).report);
    Json cmp2 = compare_reports(base, {vrep});
    CHECK(cmp2["deltas"][0].at("/ticks").at("delta").get<double>() == -10.0);
    CHECK(cmp2["deltas"][0].at("/ticks").at("ratio").get<double>() == doctest::Approx(0.75));

    // different name = different family: refuse to compare
    Scenario other = mini();
    other.name = "mini-other";
    Json orep = report_to_json(run(other).report);
    CHECK_THROWS_AS(compare_reports(base, {orep}), ValidationError);
}

TEST_CASE("clean-twin runs leave no trace in the attack-free report") {
    // enabling detection triggers a calibration twin; the visible report
    // must still be deterministic and alert-free on benign traffic
    Scenario s = mini();
    s.defence_config.detection = true;
    s.defence_config.detection_threshold = 40.0;
    RunResult a = run(s);
    RunResult b = run(s);
    CHECK(a.report_bytes == b.report_bytes);
    CHECK(a.report.defence.alert_count == 0);
    CHECK(a.report.overhead.defence_fraction > 0.0);
}
