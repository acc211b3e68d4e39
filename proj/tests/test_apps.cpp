#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ricsim/apps.hpp"

using namespace ricsim;
using namespace ricsim::apps;

namespace {

ran::UeMetrics sample_metrics() {
    ran::UeMetrics m;
    m.ue_id = "ue000";
    m.tick = 12;
    m.serving_cell = "cellA";
    m.sinr_serving_db = 10.0;
    m.rsrp_serving_dbm = -80.0;
    m.prb_usage_pct = 50.0;
    m.throughput_dl_mbps = 20.0;
    m.neighbours = {{"cellB", -85.0}, {"cellC", -95.0}};
    return m;
}

}  // namespace

TEST_CASE("metric keys zero-pad the tick") {
    CHECK(metric_key(7, "ue001") == "0000000007:ue001");
    CHECK(metric_key(1234567890, "x") == "1234567890:x");
    // lexicographic order matches numeric tick order
    CHECK(metric_key(99, "ue001") < metric_key(100, "ue001"));
}

TEST_CASE("featurize layout and neighbour padding") {
    FeatureVector f = featurize(sample_metrics(), 37.5);
    REQUIRE(static_cast<int>(f.values.size()) == kFeatureDim);
    CHECK(f.values[0] == 10.0);    // sinr
    CHECK(f.values[1] == -80.0);   // rsrp
    CHECK(f.values[2] == 50.0);    // prb
    CHECK(f.values[3] == -85.0);   // neighbour 1
    CHECK(f.values[4] == -95.0);   // neighbour 2
    CHECK(f.values[5] == kNeighbourPad);  // missing third neighbour
    CHECK(f.values[6] == 20.0);    // throughput
    CHECK(f.values[7] == 37.5);    // serving load
}

TEST_CASE("candidate features carry the interference offset over") {
    FeatureVector base = featurize(sample_metrics(), 37.5);
    // offset = rsrp - sinr = -90; candidate at -85 dBm implies sinr 5
    std::vector<double> x = candidate_features(base, -85.0, 60.0);
    CHECK(x[0] == doctest::Approx(5.0));
    CHECK(x[1] == -85.0);
    CHECK(x[7] == 60.0);
    // untouched slots
    CHECK(x[2] == base.values[2]);
    CHECK(x[6] == base.values[6]);
}

TEST_CASE("qoe_predict clamps to zero and tags the version") {
    linreg::LinearModel m;
    m.weights = {1.0};
    m.bias = -5.0;
    m.model_version = 3;
    ThroughputPrediction p = qoe_predict(m, "ue000", {{"cellA", {2.0}}, {"cellB", {100.0}}});
    CHECK(p.model_version == 3);
    CHECK(p.per_cell_mbps.at("cellA") == 0.0);  // 2 - 5 clamps
    CHECK(p.per_cell_mbps.at("cellB") == 95.0);
}

TEST_CASE("anomaly z-score of latest against the prefix") {
    CHECK_THROWS_AS(ad_detect("u", 0, {1.0, 2.0}, 3.0), std::invalid_argument);

    // prefix [0, 2]: mean 1, stddev 1; latest 4 -> z = 3
    AnomalyReport r = ad_detect("u", 5, {0.0, 2.0, 4.0}, 2.9);
    CHECK(r.score == doctest::Approx(3.0));
    CHECK(r.flagged);
    CHECK_FALSE(ad_detect("u", 5, {0.0, 2.0, 4.0}, 3.1).flagged);  // strict >

    // constant prefix, equal latest: nothing to report
    AnomalyReport flat = ad_detect("u", 5, {1.0, 1.0, 1.0, 1.0}, 3.0);
    CHECK(flat.score == 0.0);
    CHECK_FALSE(flat.flagged);

    // constant prefix, different latest: infinite z either way
    CHECK(ad_detect("u", 5, {1.0, 1.0, 1.0, 2.0}, 3.0).score ==
          std::numeric_limits<double>::infinity());
    AnomalyReport drop = ad_detect("u", 5, {1.0, 1.0, 1.0, 0.0}, 3.0);
    CHECK(drop.score == -std::numeric_limits<double>::infinity());
    CHECK(drop.flagged);  // flag uses |z|
}

TEST_CASE("rApp policy generation") {
    UeObservation starving;
    starving.ue_id = "ue001";
    starving.serving_cell = "cellA";
    starving.mean_throughput_mbps = 2.0;
    starving.neighbour_load_pct = {{"cellA", 90.0}, {"cellB", 40.0}, {"cellC", 20.0}};

    UeObservation healthy = starving;
    healthy.ue_id = "ue002";
    healthy.mean_throughput_mbps = 50.0;

    UeObservation no_escape = starving;
    no_escape.ue_id = "ue003";
    no_escape.neighbour_load_pct = {{"cellB", 80.0}, {"cellC", 95.0}};

    auto policies = rapp_generate_policies({starving, healthy, no_escape}, 5.0, 70.0, 100, 120, 7);
    // healthy meets the SLA; no_escape has no neighbour under the load bar
    REQUIRE(policies.size() == 1);
    const A1Policy& p = policies[0];
    CHECK(p.policy_id == 7);
    CHECK(p.ue_scope == "ue001");
    CHECK(p.valid_from == 100);
    CHECK(p.valid_to == 120);
    CHECK(p.preferences.at("cellC") == CellPreference::Prefer);  // lightest neighbour
    CHECK(p.preferences.at("cellA") == CellPreference::Avoid);   // the serving cell
    CHECK_FALSE(p.preferences.count("cellB"));
}

TEST_CASE("steering decision rules") {
    SteeringInputs in;
    in.serving = "cellA";
    in.hysteresis_margin = 1.2;
    in.predicted_mbps = {{"cellA", 10.0}, {"cellB", 11.9}, {"cellC", 5.0}};

    // under the margin: stay
    CHECK_FALSE(ts_decide(in).has_value());

    in.predicted_mbps["cellB"] = 12.1;
    CHECK(ts_decide(in) == CellId("cellB"));

    // forbidden beats best prediction
    in.forbidden = {"cellB"};
    CHECK_FALSE(ts_decide(in).has_value());  // cellA itself is next best

    // forbidden wins even over preferred
    in.preferred = {"cellB"};
    CHECK_FALSE(ts_decide(in).has_value());

    // everything forbidden: starvation
    in.forbidden = {"cellA", "cellB", "cellC"};
    CHECK_FALSE(ts_decide(in).has_value());

    // anomaly override skips the hysteresis margin
    SteeringInputs anom;
    anom.serving = "cellA";
    anom.predicted_mbps = {{"cellA", 10.0}, {"cellB", 10.5}};
    anom.hysteresis_margin = 1.2;
    CHECK_FALSE(ts_decide(anom).has_value());
    anom.anomaly_flagged = true;
    CHECK(ts_decide(anom) == CellId("cellB"));

    // exact tie: a preferred cell wins, otherwise the lower id
    SteeringInputs tie;
    tie.serving = "cellA";
    tie.predicted_mbps = {{"cellA", 1.0}, {"cellB", 50.0}, {"cellC", 50.0}};
    CHECK(ts_decide(tie) == CellId("cellB"));
    tie.preferred = {"cellC"};
    CHECK(ts_decide(tie) == CellId("cellC"));
}

TEST_CASE("serialization round trips") {
    ran::UeMetrics m = sample_metrics();
    ran::UeMetrics m2 = ue_metrics_from_json(ue_metrics_to_json(m));
    CHECK(m2.ue_id == m.ue_id);
    CHECK(m2.sinr_serving_db == m.sinr_serving_db);
    REQUIRE(m2.neighbours.size() == 2);
    CHECK(m2.neighbours[1].cell_id == "cellC");
    CHECK(m2.neighbours[1].rsrp_dbm == -95.0);

    ran::CellMetrics cm;
    cm.cell_id = "cellA";
    cm.tick = 4;
    cm.connected_ue_count = 3;
    cm.load_pct = 9.375;
    cm.aggregate_throughput_mbps = 61.5;
    ran::CellMetrics cm2 = cell_metrics_from_json(cell_metrics_to_json(cm));
    CHECK(cm2.cell_id == cm.cell_id);
    CHECK(cm2.connected_ue_count == 3);
    CHECK(cm2.load_pct == cm.load_pct);
    CHECK(cm2.aggregate_throughput_mbps == cm.aggregate_throughput_mbps);

    linreg::LinearModel lm;
    lm.weights = {0.25, -1.5};
    lm.bias = 3.75;
    lm.lambda = 0.001;
    lm.training_row_count = 40;
    lm.model_version = 2;
    linreg::LinearModel lm2 = model_from_json(model_to_json(lm));
    CHECK(lm2.weights == lm.weights);
    CHECK(lm2.bias == lm.bias);
    CHECK(lm2.model_version == 2);
    CHECK(lm2.training_row_count == 40);

    A1Policy p;
    p.policy_id = 11;
    p.ue_scope = "ue004";
    p.preferences = {{"cellB", CellPreference::Prefer}, {"cellA", CellPreference::Avoid},
                     {"cellD", CellPreference::Forbid}};
    p.valid_from = 60;
    p.valid_to = 80;
    A1Policy p2 = policy_from_json(policy_to_json(p));
    CHECK(p2.policy_id == 11);
    CHECK(p2.ue_scope == "ue004");
    CHECK(p2.preferences == p.preferences);
    CHECK(p2.valid_from == 60);
    CHECK(p2.valid_to == 80);
}

TEST_CASE("qoe_train is the ridge solver") {
    auto m = qoe_train({{1, 2}, {2, 1}, {3, 3}}, {3, 4, 7}, 0.1);
    CHECK(m.weights[0] == doctest::Approx(1.58357771).epsilon(1e-7));
    CHECK(m.bias == doctest::Approx(0.15053763).epsilon(1e-7));
}
