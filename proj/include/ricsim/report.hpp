#ifndef RICSIM_REPORT_HPP
#define RICSIM_REPORT_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ricsim/attacks.hpp"
#include "ricsim/types.hpp"

namespace ricsim::harness {

struct NetworkKpis {
    double mean_ue_throughput_mbps = 0.0;
    double p5_ue_throughput_mbps = 0.0;
    double p50_ue_throughput_mbps = 0.0;
    double p95_ue_throughput_mbps = 0.0;
    long handover_count = 0;
    long forbidden_handover_count = 0;
    long sla_violation_ticks = 0;
};

struct PipelineKpis {
    long ts_decisions_issued = 0;
    long starvation_count = 0;
    long predictions_sent = 0;
    long anomaly_alerts_sent = 0;
    int model_version = 0;
    long train_failures = 0;
    long policies_issued = 0;
    double median_control_latency_ticks = 0.0;
    double median_control_latency_ms = 0.0;
    long legit_sub_attempts = 0;
    long legit_sub_rejections = 0;
    double sub_denial_rate = 0.0;
    // denial rate restricted to ticks after the first quarantine (-1 = n/a)
    double post_quarantine_denial_rate = -1.0;
};

struct QuarantineEvent {
    XappId xapp;
    Tick tick = 0;
};

struct DefenceKpis {
    long alert_count = 0;
    long quarantine_count = 0;
    std::vector<QuarantineEvent> quarantines;
    double precision = 1.0;  // no alerts = vacuously clean
    double recall = 1.0;     // no attackers = nothing to find
    nlohmann::json alerts = nlohmann::json::array();
};

struct OverheadKpis {
    double mean_tick_cost_units = 0.0;
    double mean_tick_defence_units = 0.0;
    double defence_fraction = 0.0;
    double tick_ms = kTickMs;
};

struct MetricsReport {
    std::string scenario_name;
    std::string config_hash;
    std::uint64_t seed = 0;
    Tick ticks = 0;
    NetworkKpis network;
    PipelineKpis pipeline;
    std::vector<attacks::AttackOutcome> attacks;
    DefenceKpis defence;
    OverheadKpis overhead;
};

// Canonical form: nlohmann objects iterate in key order, so dump() of the
// same report is byte-stable. Determinism tests compare these bytes.
nlohmann::json report_to_json(const MetricsReport& r);
std::string report_to_bytes(const MetricsReport& r);

// Flat row for sweep CSVs.
std::string report_csv_header();
std::string report_csv_row(const MetricsReport& r);

// Per-metric deltas/ratios of scalar report fields, variants vs baseline.
// Reports must share the scenario-family prefix of the config hash.
nlohmann::json compare_reports(const nlohmann::json& baseline,
                               const std::vector<nlohmann::json>& variants);

}  // namespace ricsim::harness

#endif
