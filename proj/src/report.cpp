#include "ricsim/report.hpp"

#include <sstream>

#include "ricsim/scenario.hpp"

namespace ricsim::harness {

using nlohmann::json;

json report_to_json(const MetricsReport& r) {
    json attacks = json::array();
    for (const auto& a : r.attacks) {
        attacks.push_back(json{{"kind", a.kind},
                               {"attacker", a.attacker},
                               {"blocked", a.blocked},
                               {"detected", a.detected},
                               {"metrics", a.metrics},
                               {"detail", a.detail}});
    }
    json quarantines = json::array();
    for (const auto& q : r.defence.quarantines)
        quarantines.push_back(json{{"xapp", q.xapp}, {"tick", q.tick}});

    return json{
        {"scenario", r.scenario_name},
        {"config_hash", r.config_hash},
        {"seed", r.seed},
        {"ticks", r.ticks},
        {"network",
         {{"mean_ue_throughput_mbps", r.network.mean_ue_throughput_mbps},
          {"p5_ue_throughput_mbps", r.network.p5_ue_throughput_mbps},
          {"p50_ue_throughput_mbps", r.network.p50_ue_throughput_mbps},
          {"p95_ue_throughput_mbps", r.network.p95_ue_throughput_mbps},
          {"handover_count", r.network.handover_count},
          {"forbidden_handover_count", r.network.forbidden_handover_count},
          {"sla_violation_ticks", r.network.sla_violation_ticks}}},
        {"pipeline",
         {{"ts_decisions_issued", r.pipeline.ts_decisions_issued},
          {"starvation_count", r.pipeline.starvation_count},
          {"predictions_sent", r.pipeline.predictions_sent},
          {"anomaly_alerts_sent", r.pipeline.anomaly_alerts_sent},
          {"model_version", r.pipeline.model_version},
          {"train_failures", r.pipeline.train_failures},
          {"policies_issued", r.pipeline.policies_issued},
          {"median_control_latency_ticks", r.pipeline.median_control_latency_ticks},
          {"median_control_latency_ms", r.pipeline.median_control_latency_ms},
          {"legit_sub_attempts", r.pipeline.legit_sub_attempts},
          {"legit_sub_rejections", r.pipeline.legit_sub_rejections},
          {"sub_denial_rate", r.pipeline.sub_denial_rate},
          {"post_quarantine_denial_rate", r.pipeline.post_quarantine_denial_rate}}},
        {"attacks", attacks},
        {"defence",
         {{"alert_count", r.defence.alert_count},
          {"quarantine_count", r.defence.quarantine_count},
          {"quarantines", quarantines},
          {"precision", r.defence.precision},
          {"recall", r.defence.recall},
          {"alerts", r.defence.alerts}}},
        {"overhead",
         {{"mean_tick_cost_units", r.overhead.mean_tick_cost_units},
          {"mean_tick_defence_units", r.overhead.mean_tick_defence_units},
          {"defence_fraction", r.overhead.defence_fraction},
          {"tick_ms", r.overhead.tick_ms}}},
    };
}

std::string report_to_bytes(const MetricsReport& r) { return report_to_json(r).dump(2) + "\n"; }

std::string report_csv_header() {
    return "scenario,config_hash,seed,mean_ue_throughput_mbps,p50_ue_throughput_mbps,"
           "handover_count,forbidden_handover_count,sla_violation_ticks,ts_decisions_issued,"
           "median_control_latency_ms,sub_denial_rate,alert_count,quarantine_count,"
           "precision,recall,defence_fraction";
}

std::string report_csv_row(const MetricsReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << r.scenario_name << ',' << r.config_hash << ',' << r.seed << ','
        << r.network.mean_ue_throughput_mbps << ',' << r.network.p50_ue_throughput_mbps << ','
        << r.network.handover_count << ',' << r.network.forbidden_handover_count << ','
        << r.network.sla_violation_ticks << ',' << r.pipeline.ts_decisions_issued << ','
        << r.pipeline.median_control_latency_ms << ',' << r.pipeline.sub_denial_rate << ','
        << r.defence.alert_count << ',' << r.defence.quarantine_count << ','
        << r.defence.precision << ',' << r.defence.recall << ','
        << r.overhead.defence_fraction;
    return out.str();
}

namespace {

void flatten(const json& node, const std::string& path, std::map<std::string, double>& out) {
    if (node.is_number()) {
        out[path] = node.get<double>();
    } else if (node.is_boolean()) {
        out[path] = node.get<bool>() ? 1.0 : 0.0;
    } else if (node.is_object()) {
        for (const auto& entry : node.items()) {
            // free-form sub-documents are not comparable metric-by-metric
            if (entry.key() == "alerts" || entry.key() == "detail") continue;
            flatten(entry.value(), path + "/" + entry.key(), out);
        }
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i)
            flatten(node[i], path + "/" + std::to_string(i), out);
    }
}

std::string family_of(const json& report) {
    const std::string hash = report.at("config_hash").get<std::string>();
    return hash.substr(0, hash.find('-'));
}

}  // namespace

json compare_reports(const json& baseline, const std::vector<json>& variants) {
    const std::string family = family_of(baseline);
    std::map<std::string, double> base;
    flatten(baseline, "", base);

    json rows = json::array();
    for (const json& variant : variants) {
        if (family_of(variant) != family)
            throw ValidationError("config_hash", "reports are from different scenario families");
        std::map<std::string, double> var;
        flatten(variant, "", var);
        json table = json::object();
        for (const auto& [metric, value] : var) {
            auto it = base.find(metric);
            if (it == base.end()) continue;
            json cell{{"baseline", it->second}, {"variant", value}, {"delta", value - it->second}};
            if (it->second != 0.0) cell["ratio"] = value / it->second;
            table[metric] = std::move(cell);
        }
        rows.push_back(std::move(table));
    }
    return json{{"family", family}, {"variant_count", variants.size()}, {"deltas", rows}};
}

}  // namespace ricsim::harness
