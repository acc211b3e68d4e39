#include "ricsim/apps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ricsim::apps {

using platform::Json;
using platform::Message;
using platform::Platform;

std::string metric_key(Tick tick, const std::string& id) {
    std::ostringstream out;
    out.width(10);
    out.fill('0');
    out << tick;
    return out.str() + ":" + id;
}

FeatureVector featurize(const ran::UeMetrics& m, double serving_load_pct) {
    FeatureVector f;
    f.values = {m.sinr_serving_db, m.rsrp_serving_dbm, m.prb_usage_pct};
    for (int i = 0; i < ran::kNeighbourListSize; ++i) {
        f.values.push_back(i < static_cast<int>(m.neighbours.size()) ? m.neighbours[i].rsrp_dbm
                                                                     : kNeighbourPad);
    }
    f.values.push_back(m.throughput_dl_mbps);
    f.values.push_back(serving_load_pct);
    return f;
}

std::vector<double> candidate_features(const FeatureVector& base, double candidate_rsrp_dbm,
                                       double candidate_load_pct) {
    std::vector<double> x = base.values;
    const double interference_offset = base.values[1] - base.values[0];  // rsrp - sinr
    x[0] = candidate_rsrp_dbm - interference_offset;
    x[1] = candidate_rsrp_dbm;
    x[7] = candidate_load_pct;
    return x;
}

linreg::LinearModel qoe_train(const std::vector<std::vector<double>>& rows,
                              const std::vector<double>& labels, double lambda) {
    return linreg::ridge_fit(rows, labels, lambda);
}

ThroughputPrediction qoe_predict(const linreg::LinearModel& model, const UeId& ue,
                                 const std::map<CellId, std::vector<double>>& per_cell_features) {
    ThroughputPrediction pred;
    pred.ue_id = ue;
    pred.model_version = model.model_version;
    for (const auto& [cell, x] : per_cell_features)
        pred.per_cell_mbps[cell] = std::max(0.0, model.predict_raw(x));
    return pred;
}

AnomalyReport ad_detect(const UeId& ue, Tick tick, const std::vector<double>& window,
                        double threshold) {
    if (window.size() < 3) throw std::invalid_argument("ad_detect: window must have >= 3 samples");
    const double latest = window.back();
    const std::size_t n = window.size() - 1;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += window[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (window[i] - mean) * (window[i] - mean);
    const double stddev = std::sqrt(var / static_cast<double>(n));

    AnomalyReport report;
    report.ue_id = ue;
    report.tick = tick;
    report.threshold = threshold;
    if (stddev == 0.0) {
        report.score = latest == mean ? 0.0
                                      : std::copysign(std::numeric_limits<double>::infinity(),
                                                      latest - mean);
    } else {
        report.score = (latest - mean) / stddev;
    }
    report.flagged = std::fabs(report.score) > threshold;
    return report;
}

std::vector<A1Policy> rapp_generate_policies(const std::vector<UeObservation>& observations,
                                             double sla_mbps, double load_threshold_pct,
                                             Tick valid_from, Tick valid_to, long first_policy_id) {
    std::vector<A1Policy> policies;
    long id = first_policy_id;
    for (const UeObservation& obs : observations) {
        if (obs.mean_throughput_mbps >= sla_mbps) continue;
        std::optional<CellId> best;
        double best_load = load_threshold_pct;
        for (const auto& [cell, load] : obs.neighbour_load_pct) {
            if (cell == obs.serving_cell) continue;
            if (load < best_load || (best && load == best_load && cell < *best)) {
                best = cell;
                best_load = load;
            }
        }
        if (!best) continue;
        A1Policy p;
        p.policy_id = id++;
        p.ue_scope = obs.ue_id;
        p.preferences[*best] = CellPreference::Prefer;
        p.preferences[obs.serving_cell] = CellPreference::Avoid;
        p.valid_from = valid_from;
        p.valid_to = valid_to;
        policies.push_back(std::move(p));
    }
    return policies;
}

std::optional<CellId> ts_decide(const SteeringInputs& in) {
    std::optional<CellId> best;
    double best_pred = -1.0;
    bool best_preferred = false;
    for (const auto& [cell, pred] : in.predicted_mbps) {
        if (in.forbidden.count(cell)) continue;
        const bool preferred = in.preferred.count(cell) > 0;
        const bool wins = pred > best_pred ||
                          (pred == best_pred && preferred && !best_preferred) ||
                          (pred == best_pred && preferred == best_preferred && best && cell < *best);
        if (!best || wins) {
            best = cell;
            best_pred = pred;
            best_preferred = preferred;
        }
    }
    if (!best) return std::nullopt;  // starvation
    if (*best == in.serving) return std::nullopt;
    auto serving_it = in.predicted_mbps.find(in.serving);
    const double serving_pred = serving_it == in.predicted_mbps.end() ? 0.0 : serving_it->second;
    if (in.anomaly_flagged) return best;
    if (best_pred > in.hysteresis_margin * serving_pred) return best;
    return std::nullopt;
}

// --- serialization ---

Json ue_metrics_to_json(const ran::UeMetrics& m) {
    Json neighbours = Json::array();
    for (const auto& n : m.neighbours) neighbours.push_back({{"cell", n.cell_id}, {"rsrp", n.rsrp_dbm}});
    return Json{{"ue", m.ue_id},
                {"tick", m.tick},
                {"serving", m.serving_cell},
                {"sinr", m.sinr_serving_db},
                {"rsrp", m.rsrp_serving_dbm},
                {"prb", m.prb_usage_pct},
                {"tput", m.throughput_dl_mbps},
                {"neighbours", neighbours}};
}

ran::UeMetrics ue_metrics_from_json(const Json& j) {
    ran::UeMetrics m;
    m.ue_id = j.at("ue").get<std::string>();
    m.tick = j.at("tick").get<Tick>();
    m.serving_cell = j.at("serving").get<std::string>();
    m.sinr_serving_db = j.at("sinr").get<double>();
    m.rsrp_serving_dbm = j.at("rsrp").get<double>();
    m.prb_usage_pct = j.at("prb").get<double>();
    m.throughput_dl_mbps = j.at("tput").get<double>();
    for (const auto& n : j.at("neighbours"))
        m.neighbours.push_back({n.at("cell").get<std::string>(), n.at("rsrp").get<double>()});
    return m;
}

Json cell_metrics_to_json(const ran::CellMetrics& m) {
    return Json{{"cell", m.cell_id},
                {"tick", m.tick},
                {"connected", m.connected_ue_count},
                {"load", m.load_pct},
                {"agg_tput", m.aggregate_throughput_mbps}};
}

ran::CellMetrics cell_metrics_from_json(const Json& j) {
    ran::CellMetrics m;
    m.cell_id = j.at("cell").get<std::string>();
    m.tick = j.at("tick").get<Tick>();
    m.connected_ue_count = j.at("connected").get<int>();
    m.load_pct = j.at("load").get<double>();
    m.aggregate_throughput_mbps = j.at("agg_tput").get<double>();
    return m;
}

Json model_to_json(const linreg::LinearModel& m) {
    return Json{{"weights", m.weights},
                {"bias", m.bias},
                {"lambda", m.lambda},
                {"rows", m.training_row_count},
                {"version", m.model_version}};
}

linreg::LinearModel model_from_json(const Json& j) {
    linreg::LinearModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.lambda = j.at("lambda").get<double>();
    m.training_row_count = j.at("rows").get<int>();
    m.model_version = j.at("version").get<int>();
    return m;
}

Json policy_to_json(const A1Policy& p) {
    Json prefs = Json::object();
    for (const auto& [cell, pref] : p.preferences) {
        prefs[cell] = pref == CellPreference::Prefer  ? "PREFER"
                      : pref == CellPreference::Avoid ? "AVOID"
                                                      : "FORBID";
    }
    return Json{{"id", p.policy_id},
                {"scope", p.ue_scope},
                {"prefs", prefs},
                {"from", p.valid_from},
                {"to", p.valid_to}};
}

A1Policy policy_from_json(const Json& j) {
    A1Policy p;
    p.policy_id = j.at("id").get<long>();
    p.ue_scope = j.at("scope").get<std::string>();
    for (const auto& [cell, pref] : j.at("prefs").items()) {
        const std::string s = pref.get<std::string>();
        p.preferences[cell] = s == "PREFER"  ? CellPreference::Prefer
                              : s == "AVOID" ? CellPreference::Avoid
                                             : CellPreference::Forbid;
    }
    p.valid_from = j.at("from").get<Tick>();
    p.valid_to = j.at("to").get<Tick>();
    return p;
}

// --- actors ---

std::vector<XAppDescriptor> pipeline_descriptors(const AppIds& ids, const std::string& zone) {
    std::vector<XAppDescriptor> out;

    XAppDescriptor kpimon;
    kpimon.xapp_id = ids.kpimon;
    kpimon.write_namespaces = {kNsUeMetric, kNsCellMetric};
    kpimon.recv_msg_types = {MsgType::E2Report};
    kpimon.e2_subscribe = true;
    kpimon.zone = zone;
    out.push_back(kpimon);

    XAppDescriptor qoe;
    qoe.xapp_id = ids.qoe;
    qoe.read_namespaces = {kNsUeMetric, kNsCellMetric, kNsModelStore};
    qoe.write_namespaces = {kNsPrediction};
    qoe.send_msg_types = {MsgType::QoePrediction};
    qoe.zone = zone;
    out.push_back(qoe);

    XAppDescriptor ad;
    ad.xapp_id = ids.ad;
    ad.read_namespaces = {kNsUeMetric};
    ad.send_msg_types = {MsgType::AnomalyAlert};
    ad.zone = zone;
    out.push_back(ad);

    XAppDescriptor ts;
    ts.xapp_id = ids.ts;
    ts.recv_msg_types = {MsgType::QoePrediction, MsgType::AnomalyAlert, MsgType::A1Policy};
    ts.send_msg_types = {MsgType::TsControl};
    ts.zone = zone;
    out.push_back(ts);

    XAppDescriptor rc;
    rc.xapp_id = ids.rc;
    rc.recv_msg_types = {MsgType::TsControl};
    rc.e2_control = true;
    rc.zone = zone;
    out.push_back(rc);

    XAppDescriptor rapp;
    rapp.xapp_id = ids.rapp;
    rapp.read_namespaces = {kNsUeMetric, kNsCellMetric, kNsTrainSet};
    rapp.write_namespaces = {kNsTrainSet, kNsModelStore};
    rapp.send_msg_types = {MsgType::A1Policy};
    rapp.zone = zone;
    out.push_back(rapp);

    return out;
}

void KpimonApp::step(Platform& plat, Tick tick) {
    long attempts = 0;
    long rejections = 0;
    for (const CellId& node : nodes_) {
        if (!plat.node_online(node)) continue;
        ++attempts;
        const auto result = plat.e2_subscribe(id_, node, 1);
        if (result.status != platform::SubscribeStatus::Accepted) ++rejections;
    }
    legit_sub_attempts += attempts;
    legit_sub_rejections += rejections;
    per_tick_subs.emplace_back(attempts, rejections);

    for (Message& msg : plat.drain_inbox(id_)) {
        if (msg.msg_type != MsgType::E2Report) continue;
        const Json& cell = msg.payload.at("cell");
        const std::string cell_id = cell.at("cell").get<std::string>();
        const Tick report_tick = cell.at("tick").get<Tick>();
        auto w = plat.sdl_write(id_, kNsCellMetric, metric_key(report_tick, cell_id), cell);
        if (!w.denied) ++write_count;
        for (const Json& ue : msg.payload.at("ues")) {
            const std::string ue_id = ue.at("ue").get<std::string>();
            auto wu = plat.sdl_write(id_, kNsUeMetric, metric_key(report_tick, ue_id), ue);
            if (!wu.denied) ++write_count;
        }
    }
    (void)tick;
}

void QoeApp::step(Platform& plat, Tick tick) {
    auto model_rec = plat.sdl_read(id_, kNsModelStore, "current");
    if (model_rec.denied || !model_rec.record) return;
    const linreg::LinearModel model = model_from_json(model_rec.record->value);

    auto rows = plat.sdl_scan(id_, kNsUeMetric, metric_key(tick, ""));
    if (rows.denied) return;
    for (const auto& rec : rows.records) {
        const ran::UeMetrics m = ue_metrics_from_json(rec.value);

        auto serving_cm = plat.sdl_read(id_, kNsCellMetric, metric_key(tick, m.serving_cell));
        if (serving_cm.denied || !serving_cm.record) continue;
        const double serving_load = serving_cm.record->value.at("load").get<double>();

        const FeatureVector base = featurize(m, serving_load);
        std::map<CellId, std::vector<double>> per_cell;
        per_cell[m.serving_cell] = base.values;
        for (const auto& n : m.neighbours) {
            auto cm = plat.sdl_read(id_, kNsCellMetric, metric_key(tick, n.cell_id));
            if (cm.denied || !cm.record) continue;
            per_cell[n.cell_id] =
                candidate_features(base, n.rsrp_dbm, cm.record->value.at("load").get<double>());
        }

        const ThroughputPrediction pred = qoe_predict(model, m.ue_id, per_cell);
        Json per_cell_json = Json::object();
        for (const auto& [cell, mbps] : pred.per_cell_mbps) per_cell_json[cell] = mbps;
        Json payload{{"ue", pred.ue_id},
                     {"serving", m.serving_cell},
                     {"per_cell", per_cell_json},
                     {"model_version", pred.model_version},
                     {"tick", tick}};
        plat.sdl_write(id_, kNsPrediction, metric_key(tick, m.ue_id), payload);

        Message msg;
        msg.msg_type = MsgType::QoePrediction;
        msg.sender = id_;
        msg.token = plat.token_of(id_);
        msg.payload = payload;
        if (plat.rmr_send(std::move(msg)).status == platform::SendStatus::Delivered)
            ++predictions_sent;
    }
}

void AdApp::step(Platform& plat, Tick tick) {
    auto rows = plat.sdl_scan(id_, kNsUeMetric, metric_key(tick, ""));
    if (rows.denied) return;
    for (const auto& rec : rows.records) {
        const std::string ue = rec.value.at("ue").get<std::string>();
        std::vector<double> window;
        for (Tick t = std::max<Tick>(0, tick - params_.history_window + 1); t <= tick; ++t) {
            auto r = plat.sdl_read(id_, kNsUeMetric, metric_key(t, ue));
            if (r.denied || !r.record) continue;
            window.push_back(r.record->value.at("tput").get<double>());
        }
        if (window.size() < 3) continue;
        const AnomalyReport report = ad_detect(ue, tick, window, params_.anomaly_threshold);
        if (!report.flagged) continue;
        Message msg;
        msg.msg_type = MsgType::AnomalyAlert;
        msg.sender = id_;
        msg.token = plat.token_of(id_);
        const double score = std::isfinite(report.score) ? report.score
                                                         : std::copysign(1e308, report.score);
        msg.payload = {{"ue", ue}, {"tick", tick}, {"score", score}};
        if (plat.rmr_send(std::move(msg)).status == platform::SendStatus::Delivered) ++alerts_sent;
    }
}

void TsApp::step(Platform& plat, Tick tick, RequestIdSource& ids) {
    anomalies_this_tick_.clear();
    std::vector<platform::Json> predictions;
    for (Message& msg : plat.drain_inbox(id_)) {
        switch (msg.msg_type) {
            case MsgType::A1Policy: active_policies_.push_back(policy_from_json(msg.payload)); break;
            case MsgType::AnomalyAlert:
                anomalies_this_tick_.insert(msg.payload.at("ue").get<std::string>());
                break;
            case MsgType::QoePrediction:
                ++predictions_received;
                predictions.push_back(msg.payload);
                break;
            default: break;
        }
    }
    std::erase_if(active_policies_, [&](const A1Policy& p) { return p.valid_to <= tick; });
    if (!params_.ts_enabled) return;

    for (const Json& pred : predictions) {
        const UeId ue = pred.at("ue").get<std::string>();
        SteeringInputs in;
        in.serving = pred.at("serving").get<std::string>();
        for (const auto& [cell, mbps] : pred.at("per_cell").items())
            in.predicted_mbps[cell] = mbps.get<double>();
        in.anomaly_flagged = anomalies_this_tick_.count(ue) > 0;
        in.hysteresis_margin = params_.hysteresis_margin;
        for (const A1Policy& p : active_policies_) {
            if (p.ue_scope != "ALL" && p.ue_scope != ue) continue;
            if (tick < p.valid_from || tick >= p.valid_to) continue;
            for (const auto& [cell, pref] : p.preferences) {
                if (pref == CellPreference::Forbid) in.forbidden.insert(cell);
                if (pref == CellPreference::Prefer) in.preferred.insert(cell);
            }
        }
        bool all_forbidden = true;
        for (const auto& [cell, mbps] : in.predicted_mbps)
            if (!in.forbidden.count(cell)) all_forbidden = false;
        if (all_forbidden) {
            ++starvation_count;
            decision_log.emplace_back(tick, ue, "");
            continue;
        }
        const std::optional<CellId> target = ts_decide(in);
        decision_log.emplace_back(tick, ue, target.value_or(""));
        if (!target) continue;

        Message msg;
        msg.msg_type = MsgType::TsControl;
        msg.sender = id_;
        msg.token = plat.token_of(id_);
        msg.payload = {{"request_id", ids.next()}, {"ue", ue}, {"target", *target}, {"priority", 5}};
        if (plat.rmr_send(std::move(msg)).status == platform::SendStatus::Delivered)
            ++decisions_issued;
    }
}

void RcApp::step(Platform& plat, Tick tick) {
    for (Message& msg : plat.drain_inbox(id_)) {
        if (msg.msg_type != MsgType::TsControl) continue;
        platform::RicControlRequest req;
        req.request_id = msg.payload.at("request_id").get<long>();
        req.ue_id = msg.payload.at("ue").get<std::string>();
        req.target_cell = msg.payload.at("target").get<std::string>();
        req.priority = msg.payload.at("priority").get<int>();
        req.issuer = id_;
        req.tick = tick;
        if (plat.e2_control(req)) {
            ++forwarded;
            issued_request_ids.push_back(req.request_id);
        } else {
            ++denied;
        }
    }
}

bool TsRapp::is_member(const UeId& ue) const {
    return params_.train_members.empty() || params_.train_members.count(ue) > 0;
}

void TsRapp::step(Platform& plat, Tick tick) {
    if (tick == 0 || tick % params_.rapp_period != 0) return;
    const Tick horizon_start = std::max<Tick>(0, tick - params_.rapp_period);

    // assemble new training rows: features at t, label = throughput at t+1
    std::vector<std::vector<double>> new_rows;
    std::vector<double> new_labels;
    for (const UeId& ue : all_ues_) {
        if (!is_member(ue)) continue;
        for (Tick t = horizon_start; t + 1 < tick; ++t) {
            auto cur = plat.sdl_read(id_, kNsUeMetric, metric_key(t, ue));
            auto next = plat.sdl_read(id_, kNsUeMetric, metric_key(t + 1, ue));
            if (cur.denied || next.denied || !cur.record || !next.record) continue;
            const ran::UeMetrics m = ue_metrics_from_json(cur.record->value);
            auto cm = plat.sdl_read(id_, kNsCellMetric, metric_key(t, m.serving_cell));
            if (cm.denied || !cm.record) continue;
            new_rows.push_back(featurize(m, cm.record->value.at("load").get<double>()).values);
            new_labels.push_back(next.record->value.at("tput").get<double>());
        }
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    if (params_.retention) {
        for (std::size_t i = 0; i < new_rows.size(); ++i) {
            Json row{{"features", new_rows[i]}, {"label", new_labels[i]}};
            plat.sdl_write(id_, kNsTrainSet, metric_key(train_row_counter_++, "r"), row);
        }
        auto all = plat.sdl_scan(id_, kNsTrainSet, "");
        if (!all.denied) {
            for (const auto& rec : all.records) {
                rows.push_back(rec.value.at("features").get<std::vector<double>>());
                labels.push_back(rec.value.at("label").get<double>());
            }
        }
    } else {
        mem_rows_.insert(mem_rows_.end(), new_rows.begin(), new_rows.end());
        mem_labels_.insert(mem_labels_.end(), new_labels.begin(), new_labels.end());
        rows = mem_rows_;
        labels = mem_labels_;
    }

    if (rows.size() >= 2) {
        try {
            linreg::LinearModel model = qoe_train(rows, labels, params_.ridge_lambda);
            model.model_version = ++model_version;
            plat.sdl_write(id_, kNsModelStore, "current", model_to_json(model));
        } catch (const linreg::SingularSystem&) {
            ++train_failures;
        }
    }

    // policy generation from the completed horizon window
    std::map<CellId, double> latest_load;
    auto cells = plat.sdl_scan(id_, kNsCellMetric, metric_key(tick - 1, ""));
    if (!cells.denied)
        for (const auto& rec : cells.records)
            latest_load[rec.value.at("cell").get<std::string>()] =
                rec.value.at("load").get<double>();

    std::vector<UeObservation> observations;
    for (const UeId& ue : all_ues_) {
        double sum = 0.0;
        long count = 0;
        CellId serving;
        for (Tick t = horizon_start; t < tick; ++t) {
            auto r = plat.sdl_read(id_, kNsUeMetric, metric_key(t, ue));
            if (r.denied || !r.record) continue;
            sum += r.record->value.at("tput").get<double>();
            serving = r.record->value.at("serving").get<std::string>();
            ++count;
        }
        if (count == 0) continue;
        UeObservation obs;
        obs.ue_id = ue;
        obs.serving_cell = serving;
        obs.mean_throughput_mbps = sum / static_cast<double>(count);
        obs.neighbour_load_pct = latest_load;
        observations.push_back(std::move(obs));
    }

    const auto policies = rapp_generate_policies(observations, params_.sla_mbps,
                                                 params_.load_threshold_pct, tick,
                                                 tick + params_.rapp_period, policy_counter_);
    policy_counter_ += static_cast<long>(policies.size());
    for (const A1Policy& p : policies) {
        Message msg;
        msg.msg_type = MsgType::A1Policy;
        msg.sender = id_;
        msg.token = plat.token_of(id_);
        msg.payload = policy_to_json(p);
        if (plat.rmr_send(std::move(msg)).status == platform::SendStatus::Delivered) {
            ++policies_issued;
            issued_policies.push_back(p);
        }
    }
}

}  // namespace ricsim::apps
