#include "ricsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ricsim/attacks.hpp"
#include "ricsim/ran.hpp"

namespace ricsim::harness {

namespace {

using apps::AppParams;
using platform::Platform;

const apps::AppIds kIds;

double percentile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ran::World build_world(const Scenario& s, Rng& init_rng) {
    std::vector<ran::Cell> cells;
    for (const CellSpec& c : s.cells)
        cells.push_back({c.id, {c.x, c.y}, c.tx_power_dbm, c.bandwidth_mhz, c.max_ues, true});

    const std::vector<UeId> ids = s.ue_ids();
    std::vector<ran::Ue> ues;
    std::size_t next = 0;
    for (const UeGroup& g : s.ue_groups) {
        for (int i = 0; i < g.count; ++i) {
            ran::Ue ue;
            ue.ue_id = ids[next++];
            ue.position = {init_rng.uniform(s.area[0], s.area[2]),
                           init_rng.uniform(s.area[1], s.area[3])};
            ue.waypoint = ue.position;
            ue.speed_m_per_tick = g.speed_m_per_tick;
            ue.traffic_demand_mbps = g.traffic_demand_mbps;
            if (g.initial_cell) {
                ue.serving_cell = *g.initial_cell;
            } else {
                double best = -1e300;
                for (const ran::Cell& c : cells) {
                    const double rsrp = ran::received_power_dbm(c, ue.position);
                    if (rsrp > best) {
                        best = rsrp;
                        ue.serving_cell = c.cell_id;
                    }
                }
            }
            ues.push_back(std::move(ue));
        }
    }
    return ran::World(std::move(cells), std::move(ues), {s.area[0], s.area[1]},
                      {s.area[2], s.area[3]});
}

bool forbidden_for(const std::vector<apps::A1Policy>& policies, const UeId& ue, const CellId& cell,
                   Tick tick) {
    for (const apps::A1Policy& p : policies) {
        if (p.ue_scope != "ALL" && p.ue_scope != ue) continue;
        if (tick < p.valid_from || tick >= p.valid_to) continue;
        auto it = p.preferences.find(cell);
        if (it != p.preferences.end() && it->second == apps::CellPreference::Forbid) return true;
    }
    return false;
}

struct AttackRuntime {
    std::unique_ptr<attacks::Attack> attack;
    Rng rng;
};

RunResult run_internal(const Scenario& s, std::uint64_t seed,
                       const std::map<XappId, defences::BehaviourProfile>* profiles) {
    const Rng root(seed);
    Rng mobility = root.fork("mobility");
    Rng init = root.fork("init");
    const std::uint64_t run_key = root.fork("token-key").next_u64();

    ran::World world = build_world(s, init);
    std::vector<CellId> cell_ids;
    for (const CellSpec& c : s.cells) cell_ids.push_back(c.id);
    const std::vector<UeId> ue_ids = s.ue_ids();

    Platform plat(s.platform_config, s.defence_config, run_key, cell_ids);

    defences::ZoneGraph zones;
    zones.membership = s.zones.membership;
    for (const auto& [from, to] : s.zones.edges) zones.edges.insert({from, to});
    // the E2 termination (admin identity) must be able to reach the pipeline
    zones.edges.insert({"platform", s.zones.pipeline_zone});
    plat.set_zone_graph(std::move(zones));
    plat.set_on_node_state([&world](const CellId& node, bool online) {
        world.set_cell_online(node, online);
    });

    for (const XAppDescriptor& d : apps::pipeline_descriptors(kIds, s.zones.pipeline_zone))
        plat.register_xapp(d);

    apps::KpimonApp kpimon(kIds.kpimon, cell_ids);
    apps::QoeApp qoe(kIds.qoe, s.app_params);
    apps::AdApp ad(kIds.ad, s.app_params);
    apps::TsApp ts(kIds.ts, s.app_params);
    apps::RcApp rc(kIds.rc);
    apps::TsRapp rapp(kIds.rapp, s.app_params, ue_ids);
    apps::RequestIdSource request_ids;

    plat.rmr_update_routes(platform::kAdminId,
                           {{MsgType::QoePrediction, kIds.ts},
                            {MsgType::AnomalyAlert, kIds.ts},
                            {MsgType::A1Policy, kIds.ts},
                            {MsgType::TsControl, kIds.rc}},
                           plat.token_of(platform::kAdminId));

    std::vector<AttackRuntime> malicious;
    for (std::size_t i = 0; i < s.attacks.size(); ++i) {
        AttackRuntime rt{attacks::make_attack(s.attacks[i], static_cast<int>(i)),
                         root.fork("attack-" + std::to_string(i))};
        plat.register_xapp(rt.attack->descriptor());
        malicious.push_back(std::move(rt));
    }

    RunResult res;
    std::map<UeId, double> tput_sum;
    long sla_violations = 0;
    long handovers = 0;
    long forbidden_handovers = 0;
    long cost_sum = 0;
    long defence_cost_sum = 0;
    std::set<long> legit_request_ids;
    std::size_t audit_cursor = 0;
    std::size_t alert_cursor = 0;

    for (Tick t = 0; t < s.ticks; ++t) {
        plat.begin_tick(t);
        const long cost_before = plat.costs().total_units;
        const long defence_before = plat.costs().defence_units;

        const ran::TickOutput out = world.step(t, mobility);

        // E2 report fan-out for subscriptions established on earlier ticks
        for (const platform::E2Subscription& sub : plat.due_subscriptions(t)) {
            platform::Json ues = platform::Json::array();
            for (const ran::UeMetrics& m : out.ue_metrics)
                if (m.serving_cell == sub.node) ues.push_back(apps::ue_metrics_to_json(m));
            const ran::CellMetrics* cm = nullptr;
            for (const ran::CellMetrics& c : out.cell_metrics)
                if (c.cell_id == sub.node) cm = &c;
            if (!cm) continue;
            plat.deliver_e2_report(sub,
                                   {{"cell", apps::cell_metrics_to_json(*cm)}, {"ues", ues}});
        }

        for (AttackRuntime& rt : malicious) {
            attacks::AttackContext ctx{plat, t, rt.rng, request_ids, ue_ids, cell_ids};
            rt.attack->step(ctx);
        }

        kpimon.step(plat, t);
        const long qoe_before = qoe.predictions_sent;
        qoe.step(plat, t);
        res.qoe_sent_per_tick.push_back(qoe.predictions_sent - qoe_before);
        ad.step(plat, t);

        const int version_before = rapp.model_version;
        rapp.step(plat, t);
        if (rapp.model_version != version_before) {
            res.trainset_rows.clear();
            res.trainset_labels.clear();
            for (const auto& [key, rec] : plat.raw_sdl()) {
                if (key.first != apps::kNsTrainSet) continue;
                res.trainset_rows.push_back(rec.value.at("features").get<std::vector<double>>());
                res.trainset_labels.push_back(rec.value.at("label").get<double>());
            }
            auto it = plat.raw_sdl().find({apps::kNsModelStore, "current"});
            if (it != plat.raw_sdl().end())
                res.model_history.push_back(apps::model_from_json(it->second.value));
        }

        const long ts_before = ts.predictions_received;
        ts.step(plat, t, request_ids);
        res.ts_received_per_tick.push_back(ts.predictions_received - ts_before);
        for (long id : rc.issued_request_ids) legit_request_ids.insert(id);
        rc.step(plat, t);
        for (long id : rc.issued_request_ids) legit_request_ids.insert(id);

        const platform::ConflictOutcome resolved = plat.conflict_resolve(t);
        for (const platform::RicControlRequest& req : resolved.accepted) {
            if (!world.has_ue(req.ue_id) || !world.has_cell(req.target_cell)) continue;
            if (!plat.node_online(req.target_cell)) continue;
            const ran::HandoverResult hr = world.execute_handover(req.ue_id, req.target_cell, t);
            if (hr.status == ran::HandoverStatus::Applied) {
                ++handovers;
                if (forbidden_for(rapp.issued_policies, req.ue_id, req.target_cell, t))
                    ++forbidden_handovers;
            }
        }
        auto note_latency = [&](const platform::RicControlRequest& req) {
            if (!legit_request_ids.count(req.request_id)) return;
            res.legit_latencies.emplace_back(t, static_cast<double>(t - req.tick + 1));
        };
        for (const auto& req : resolved.accepted) note_latency(req);
        for (const auto& req : resolved.rejected) note_latency(req);

        for (const ran::UeMetrics& m : out.ue_metrics) tput_sum[m.ue_id] += m.throughput_dl_mbps;
        for (const UeId& ue : ue_ids) {
            double sample = 0.0;
            for (const ran::UeMetrics& m : out.ue_metrics)
                if (m.ue_id == ue) sample = m.throughput_dl_mbps;
            if (sample < s.app_params.sla_mbps) ++sla_violations;
        }

        if (s.defence_config.detection) {
            std::map<XappId, std::map<std::string, double>> live;
            for (; audit_cursor < plat.audit().size(); ++audit_cursor) {
                const AuditEntry& e = plat.audit()[audit_cursor];
                const std::string key = defences::profile_key(e);
                if (!key.empty()) live[e.caller][key] += 1.0;
            }
            for (const XAppDescriptor& d : plat.descriptors()) {
                if (d.xapp_id == platform::kAdminId || plat.is_quarantined(d.xapp_id)) continue;
                plat.costs().defence(platform::kCostProfileScore);
                defences::BehaviourProfile profile;
                profile.xapp_id = d.xapp_id;
                if (profiles) {
                    auto it = profiles->find(d.xapp_id);
                    if (it != profiles->end()) profile = it->second;
                }
                const defences::ScoreResult sr = defences::profile_score(
                    profile, live[d.xapp_id], s.defence_config.detection_threshold, t);
                if (sr.alert) plat.raise_alert(*sr.alert);
            }
        } else {
            audit_cursor = plat.audit().size();
        }
        if (s.defence_config.auto_quarantine) {
            // quarantine emits its own alert, so iterate by index
            for (; alert_cursor < plat.alerts().size(); ++alert_cursor) {
                const defences::AlertEvent& a = plat.alerts()[alert_cursor];
                if (a.action != defences::AlertAction::None) continue;
                if (a.subject == platform::kAdminId || plat.is_quarantined(a.subject)) continue;
                plat.quarantine(a.subject);
            }
        } else {
            alert_cursor = plat.alerts().size();
        }

        cost_sum += plat.costs().total_units - cost_before;
        defence_cost_sum += plat.costs().defence_units - defence_before;
    }

    for (AttackRuntime& rt : malicious) {
        attacks::AttackContext ctx{plat, s.ticks, rt.rng, request_ids, ue_ids, cell_ids};
        rt.attack->finish(ctx);
        res.report.attacks.push_back(rt.attack->outcome());
    }

    // --- assemble the report ---
    MetricsReport& rep = res.report;
    rep.scenario_name = s.name;
    rep.config_hash = config_hash(s);
    rep.seed = seed;
    rep.ticks = s.ticks;

    std::vector<double> per_ue_mean;
    for (const UeId& ue : ue_ids)
        per_ue_mean.push_back(tput_sum[ue] / static_cast<double>(s.ticks));
    std::vector<double> sorted = per_ue_mean;
    std::sort(sorted.begin(), sorted.end());
    rep.network.mean_ue_throughput_mbps =
        sorted.empty() ? 0.0
                       : std::accumulate(sorted.begin(), sorted.end(), 0.0) /
                             static_cast<double>(sorted.size());
    rep.network.p5_ue_throughput_mbps = percentile(sorted, 5.0);
    rep.network.p50_ue_throughput_mbps = percentile(sorted, 50.0);
    rep.network.p95_ue_throughput_mbps = percentile(sorted, 95.0);
    rep.network.handover_count = handovers;
    rep.network.forbidden_handover_count = forbidden_handovers;
    rep.network.sla_violation_ticks = sla_violations;

    rep.pipeline.ts_decisions_issued = ts.decisions_issued;
    rep.pipeline.starvation_count = ts.starvation_count;
    rep.pipeline.predictions_sent = qoe.predictions_sent;
    rep.pipeline.anomaly_alerts_sent = ad.alerts_sent;
    rep.pipeline.model_version = rapp.model_version;
    rep.pipeline.train_failures = rapp.train_failures;
    rep.pipeline.policies_issued = rapp.policies_issued;
    std::vector<double> latencies;
    for (const auto& [tick, lat] : res.legit_latencies) latencies.push_back(lat);
    rep.pipeline.median_control_latency_ticks = median(latencies);
    rep.pipeline.median_control_latency_ms = rep.pipeline.median_control_latency_ticks * kTickMs;
    rep.pipeline.legit_sub_attempts = kpimon.legit_sub_attempts;
    rep.pipeline.legit_sub_rejections = kpimon.legit_sub_rejections;
    rep.pipeline.sub_denial_rate =
        kpimon.legit_sub_attempts == 0
            ? 0.0
            : static_cast<double>(kpimon.legit_sub_rejections) /
                  static_cast<double>(kpimon.legit_sub_attempts);

    for (const defences::AlertEvent& a : plat.alerts()) {
        if (a.action != defences::AlertAction::Quarantine) continue;
        if (!res.quarantine_ticks.count(a.subject)) res.quarantine_ticks[a.subject] = a.tick;
    }
    if (!res.quarantine_ticks.empty()) {
        Tick first_q = s.ticks;
        for (const auto& [xapp, tick] : res.quarantine_ticks) first_q = std::min(first_q, tick);
        long att = 0, rej = 0;
        for (Tick t = first_q + 1; t < s.ticks; ++t) {
            att += kpimon.per_tick_subs[static_cast<std::size_t>(t)].first;
            rej += kpimon.per_tick_subs[static_cast<std::size_t>(t)].second;
        }
        rep.pipeline.post_quarantine_denial_rate =
            att == 0 ? 0.0 : static_cast<double>(rej) / static_cast<double>(att);
    }

    rep.defence.alert_count = static_cast<long>(plat.alerts().size());
    rep.defence.quarantine_count = static_cast<long>(res.quarantine_ticks.size());
    for (const auto& [xapp, tick] : res.quarantine_ticks)
        rep.defence.quarantines.push_back({xapp, tick});
    rep.defence.alerts = platform::Json::array();
    for (const defences::AlertEvent& a : plat.alerts())
        rep.defence.alerts.push_back(
            {{"tick", a.tick},
             {"subject", a.subject},
             {"rule", a.rule},
             {"score", a.score},
             {"action", a.action == defences::AlertAction::Quarantine ? "quarantine" : "none"}});

    rep.overhead.mean_tick_cost_units = static_cast<double>(cost_sum) / static_cast<double>(s.ticks);
    rep.overhead.mean_tick_defence_units =
        static_cast<double>(defence_cost_sum) / static_cast<double>(s.ticks);
    rep.overhead.defence_fraction =
        cost_sum == 0 ? 0.0
                      : static_cast<double>(defence_cost_sum) / static_cast<double>(cost_sum);

    res.audit = plat.audit();
    res.alerts = plat.alerts();
    res.kpimon_subs = kpimon.per_tick_subs;
    res.ts_decisions = ts.decision_log;

    // ground truth for MIA / outage scoring, taken outside access control
    if (!malicious.empty()) {
        platform::Json sdl_ue_metrics = platform::Json::array();
        for (const auto& [key, rec] : plat.raw_sdl())
            if (key.first == apps::kNsUeMetric)
                sdl_ue_metrics.push_back(
                    {{"tick", rec.value.value("tick", Tick{0})},
                     {"serving", rec.value.value("serving", std::string{})}});
        for (attacks::AttackOutcome& o : rep.attacks) {
            if (o.kind != "E2MGR_EXPLOIT") continue;
            const Tick down = o.detail.value("shutdown_tick", Tick{-1});
            if (down < 0) {  // shutdown was refused; no outage to score
                o.metrics["outage_ticks"] = 0.0;
                continue;
            }
            const CellId node = o.detail.value("node", std::string{});
            long writes = 0;
            for (const auto& e : sdl_ue_metrics)
                if (e.at("tick").get<Tick>() > down && e.at("serving").get<std::string>() == node)
                    ++writes;
            o.metrics["outage_ticks"] = static_cast<double>(s.ticks - down - 1);
            o.metrics["outage_ue_writes"] = static_cast<double>(writes);
        }
    }

    return res;
}

double pairwise_auc(const std::map<UeId, double>& scores, const std::set<UeId>& members) {
    double wins = 0.0;
    long pairs = 0;
    for (const auto& [m_ue, m_score] : scores) {
        if (!members.count(m_ue)) continue;
        for (const auto& [n_ue, n_score] : scores) {
            if (members.count(n_ue)) continue;
            ++pairs;
            if (m_score > n_score)
                wins += 1.0;
            else if (m_score == n_score)
                wins += 0.5;
        }
    }
    return pairs == 0 ? 1.0 : wins / static_cast<double>(pairs);
}

double model_delta_at(const linreg::LinearModel& a, const linreg::LinearModel& b,
                      const std::vector<double>& x) {
    double shift = b.bias - a.bias;
    for (std::size_t i = 0; i < x.size() && i < a.weights.size(); ++i)
        shift += (b.weights[i] - a.weights[i]) * x[i];
    return std::fabs(shift);
}

void finalize_attack_metrics(RunResult& res, const Scenario& s,
                             const std::optional<RunResult>& twin) {
    std::set<XappId> alert_subjects;
    for (const defences::AlertEvent& a : res.alerts) alert_subjects.insert(a.subject);

    for (attacks::AttackOutcome& o : res.report.attacks) {
        o.detected = alert_subjects.count(o.attacker) > 0;

        const AttackSpec* spec = nullptr;
        for (const AttackSpec& a : s.attacks)
            if (o.kind == a.kind && !spec) spec = &a;  // kinds are unique per scenario
        if (!spec) continue;

        if (o.kind == "RMR_FLOOD") {
            long att = 0, rej = 0;
            for (Tick t = spec->start; t < std::min(spec->stop, s.ticks); ++t) {
                att += res.kpimon_subs[static_cast<std::size_t>(t)].first;
                rej += res.kpimon_subs[static_cast<std::size_t>(t)].second;
            }
            o.metrics["denial_rate"] = att == 0 ? 0.0 : static_cast<double>(rej) / att;
            auto q = res.quarantine_ticks.find(o.attacker);
            if (q != res.quarantine_ticks.end()) {
                o.metrics["quarantine_delay_ticks"] = static_cast<double>(q->second - spec->start);
                o.metrics["post_quarantine_denial_rate"] =
                    res.report.pipeline.post_quarantine_denial_rate;
            }
        } else if (o.kind == "ROUTE_HIJACK") {
            const Tick accept = o.detail.value("accept_tick", Tick{-1});
            double fraction = 0.0;
            if (accept >= 0) {
                long sent = 0, received = 0;
                for (Tick t = accept; t < std::min(spec->stop, s.ticks); ++t) {
                    sent += res.qoe_sent_per_tick[static_cast<std::size_t>(t)];
                    received += res.ts_received_per_tick[static_cast<std::size_t>(t)];
                }
                if (sent > 0) fraction = 1.0 - static_cast<double>(received) / sent;
            }
            o.metrics["redirect_fraction"] = fraction;
        } else if (o.kind == "CONFLICT_EXHAUST" && twin) {
            std::vector<double> base;
            for (const auto& [t, lat] : twin->legit_latencies) base.push_back(lat);
            const double baseline = std::max(1.0, median(base));
            std::vector<double> during;
            for (const auto& [t, lat] : res.legit_latencies)
                if (t >= spec->start && t < spec->stop) during.push_back(lat);
            o.metrics["baseline_median_latency_ticks"] = baseline;
            o.metrics["attack_median_latency_ticks"] = median(during);
            o.metrics["latency_factor"] = during.empty() ? 0.0 : median(during) / baseline;
            auto q = res.quarantine_ticks.find(o.attacker);
            if (q != res.quarantine_ticks.end()) {
                std::vector<double> after;
                for (const auto& [t, lat] : res.legit_latencies)
                    if (t > q->second && t <= q->second + 20) after.push_back(lat);
                o.metrics["post_quarantine_latency_factor"] =
                    after.empty() ? 0.0 : median(after) / baseline;
            }
        } else if (o.kind == "MIA_LEAK" && !o.blocked) {
            std::set<UeId> members = s.app_params.train_members;
            if (members.empty())
                for (const UeId& ue : s.ue_ids()) members.insert(ue);
            std::map<UeId, double> scores;
            if (o.detail.contains("scores"))
                for (const auto& entry : o.detail.at("scores").items())
                    scores[entry.key()] = entry.value().get<double>();
            o.metrics["auc"] = pairwise_auc(scores, members);
        } else if (o.kind == "MIA_POISON" && twin) {
            if (o.detail.contains("probe_features") && o.detail.contains("pre_version")) {
                const auto probe = o.detail.at("probe_features").get<std::vector<double>>();
                const int pre = o.detail.at("pre_version").get<int>();
                const linreg::LinearModel* before = nullptr;
                const linreg::LinearModel* after = nullptr;
                for (const linreg::LinearModel& m : twin->model_history) {
                    if (m.model_version == pre) before = &m;
                    if (m.model_version == pre + 1) after = &m;
                }
                if (before && after)
                    o.metrics["control_shift"] = model_delta_at(*before, *after, probe);
            }
        } else if ((o.kind == "MEA_SCRAPE" || o.kind == "MEA_POISON") && !o.blocked &&
                   !res.model_history.empty()) {
            const linreg::LinearModel& victim = res.model_history.back();
            std::vector<double> estimate;
            double bias_diff = 0.0;
            if (o.kind == "MEA_SCRAPE" && o.detail.contains("surrogate_weights")) {
                estimate = o.detail.at("surrogate_weights").get<std::vector<double>>();
                bias_diff = std::fabs(o.detail.at("surrogate_bias").get<double>() - victim.bias);
            } else if (o.detail.contains("weight_estimate")) {
                estimate = o.detail.at("weight_estimate").get<std::vector<double>>();
            }
            if (estimate.size() == victim.weights.size()) {
                double max_diff = bias_diff;
                for (std::size_t i = 0; i < estimate.size(); ++i)
                    max_diff = std::max(max_diff, std::fabs(estimate[i] - victim.weights[i]));
                o.metrics["weight_max_abs_diff"] = max_diff;
                if (o.kind == "MEA_SCRAPE" && o.detail.contains("surrogate_bias")) {
                    linreg::LinearModel surrogate;
                    surrogate.weights = estimate;
                    surrogate.bias = o.detail.at("surrogate_bias").get<double>();
                    long matched = 0;
                    for (const auto& row : res.trainset_rows)
                        if (std::fabs(surrogate.predict_raw(row) - victim.predict_raw(row)) <= 1e-6)
                            ++matched;
                    o.metrics["fidelity"] =
                        res.trainset_rows.empty()
                            ? 0.0
                            : static_cast<double>(matched) /
                                  static_cast<double>(res.trainset_rows.size());
                }
            }
        } else if (o.kind == "DATA_POISON" && twin && !res.model_history.empty() &&
                   !twin->model_history.empty()) {
            const linreg::LinearModel& poisoned = res.model_history.back();
            const linreg::LinearModel& clean = twin->model_history.back();
            double shift = std::fabs(poisoned.bias - clean.bias);
            for (std::size_t i = 0;
                 i < std::min(poisoned.weights.size(), clean.weights.size()); ++i)
                shift = std::max(shift, std::fabs(poisoned.weights[i] - clean.weights[i]));
            o.metrics["weight_shift"] = shift;
        } else if (o.kind == "TAMPER" && twin && !o.blocked) {
            std::map<std::pair<Tick, UeId>, CellId> twin_decisions;
            for (const auto& [t, ue, target] : twin->ts_decisions)
                if (t >= spec->start && t < spec->stop) twin_decisions[{t, ue}] = target;
            long compared = 0, diverged = 0;
            for (const auto& [t, ue, target] : res.ts_decisions) {
                if (t < spec->start || t >= spec->stop) continue;
                auto it = twin_decisions.find({t, ue});
                if (it == twin_decisions.end()) continue;
                ++compared;
                if (it->second != target) ++diverged;
            }
            o.metrics["decision_divergence"] =
                compared == 0 ? 0.0 : static_cast<double>(diverged) / compared;
        }
    }

    // detection quality against harness ground truth
    std::set<XappId> attackers;
    for (const attacks::AttackOutcome& o : res.report.attacks) attackers.insert(o.attacker);
    if (!alert_subjects.empty()) {
        long tp = 0;
        for (const XappId& subject : alert_subjects)
            if (attackers.count(subject)) ++tp;
        res.report.defence.precision =
            static_cast<double>(tp) / static_cast<double>(alert_subjects.size());
    }
    if (!attackers.empty()) {
        long found = 0;
        for (const XappId& a : attackers)
            if (alert_subjects.count(a)) ++found;
        res.report.defence.recall = static_cast<double>(found) / static_cast<double>(attackers.size());
    }
}

}  // namespace

RunResult run(const Scenario& scenario, std::optional<std::uint64_t> seed_override) {
    const std::uint64_t seed = seed_override.value_or(scenario.seed);

    static const std::set<std::string> kTwinKinds = {"MIA_POISON", "DATA_POISON", "TAMPER",
                                                     "CONFLICT_EXHAUST"};
    bool need_twin = scenario.defence_config.detection;
    for (const AttackSpec& a : scenario.attacks)
        if (kTwinKinds.count(a.kind)) need_twin = true;

    std::optional<RunResult> twin;
    std::map<XappId, defences::BehaviourProfile> profiles;
    if (need_twin) {
        Scenario clean = scenario;
        clean.attacks.clear();
        clean.defence_config.detection = false;
        clean.defence_config.auto_quarantine = false;
        twin = run_internal(clean, seed, nullptr);
        if (scenario.defence_config.detection)
            profiles = defences::profile_build(twin->audit, scenario.ticks);
    }

    RunResult res = run_internal(scenario, seed,
                                 scenario.defence_config.detection ? &profiles : nullptr);
    finalize_attack_metrics(res, scenario, twin);
    res.report_bytes = report_to_bytes(res.report);
    return res;
}

std::vector<RunResult> sweep(const Scenario& base, const Json& grid,
                             const std::vector<std::uint64_t>& seeds) {
    if (!grid.is_object()) throw ValidationError("grid", "must be a JSON object");
    const Json canon = scenario_to_json(base);

    std::vector<std::string> keys;
    std::vector<Json> values;
    for (const auto& entry : grid.items()) {
        const Json::json_pointer ptr(entry.key());
        if (!canon.contains(ptr))
            throw ValidationError("grid", "unknown parameter: " + entry.key());
        if (!entry.value().is_array() || entry.value().empty())
            throw ValidationError("grid", "values for " + entry.key() + " must be a non-empty array");
        keys.push_back(entry.key());
        values.push_back(entry.value());
    }

    std::vector<RunResult> out;
    std::vector<std::size_t> idx(keys.size(), 0);
    while (true) {
        Json doc = canon;
        for (std::size_t i = 0; i < keys.size(); ++i)
            doc[Json::json_pointer(keys[i])] = values[i][idx[i]];
        const Scenario variant = parse_scenario(doc.dump());
        for (std::uint64_t seed : seeds) out.push_back(run(variant, seed));

        // odometer over grid positions, last key fastest
        std::size_t pos = keys.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < values[pos].size()) break;
            idx[pos] = 0;
            if (pos == 0) return out;
        }
        if (keys.empty()) return out;
    }
}

}  // namespace ricsim::harness
