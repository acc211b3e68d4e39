#include "ricsim/attacks.hpp"

#include <algorithm>
#include <cmath>

namespace ricsim::attacks {

using apps::metric_key;
using platform::Json;
using platform::Platform;

double feature_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return 0.0;
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    if (d2 == 0.0) return 1.0;
    return 1.0 / (1.0 + std::sqrt(d2));
}

XAppDescriptor Attack::descriptor() const {
    XAppDescriptor d;
    d.xapp_id = id_;
    d.read_namespaces = {apps::kNsCellMetric};  // the cover story: a KPI viewer
    d.zone = "attacker";
    return d;
}

namespace {

const apps::AppIds kAppIds;

// Rebuild the QoE feature vector for (tick, ue) from the SDL, exactly as
// the pipeline does. denied is set when access control blocks the reads.
std::optional<apps::FeatureVector> read_features(Platform& plat, const XappId& caller, Tick tick,
                                                 const UeId& ue, bool& denied) {
    auto rec = plat.sdl_read(caller, apps::kNsUeMetric, metric_key(tick, ue));
    if (rec.denied) {
        denied = true;
        return std::nullopt;
    }
    if (!rec.record) return std::nullopt;
    const ran::UeMetrics m = apps::ue_metrics_from_json(rec.record->value);
    auto cm = plat.sdl_read(caller, apps::kNsCellMetric, metric_key(tick, m.serving_cell));
    if (cm.denied) {
        denied = true;
        return std::nullopt;
    }
    if (!cm.record) return std::nullopt;
    return apps::featurize(m, cm.record->value.at("load").get<double>());
}

class RmrFloodAttack final : public Attack {
public:
    using Attack::Attack;
    void step(AttackContext& ctx) override {
        if (!active(ctx.tick)) return;
        const CellId node = spec_.target_cell.value_or(ctx.cells.front());
        const long rate = static_cast<long>(spec_.intensity);
        for (long i = 0; i < rate; ++i) {
            const auto result = ctx.plat.e2_subscribe(id_, node, 1);
            if (result.status == platform::SubscribeStatus::Denied) {
                outcome_.blocked = true;
                return;
            }
        }
    }
};

class RouteHijackAttack final : public Attack {
public:
    using Attack::Attack;

    XAppDescriptor descriptor() const override {
        XAppDescriptor d = Attack::descriptor();
        d.recv_msg_types = {MsgType::QoePrediction};
        return d;
    }

    void step(AttackContext& ctx) override {
        if (ctx.tick == spec_.start) {
            std::map<MsgType, XappId> forged{{MsgType::QoePrediction, id_}};
            accepted_ = ctx.plat.rmr_update_routes(id_, forged, ctx.plat.token_of(id_));
            outcome_.blocked = !accepted_;
            outcome_.detail["accept_tick"] = accepted_ ? ctx.tick : -1;
        }
        if (!accepted_) return;
        for (platform::Message& msg : ctx.plat.drain_inbox(id_)) {
            if (msg.msg_type != MsgType::QoePrediction) continue;
            ++redirected_;
            if (spec_.spoof == "corrupt") {
                Json corrupted = msg.payload;
                for (auto& entry : corrupted.at("per_cell").items()) entry.value() = 0.0;
                platform::Message fwd;
                fwd.msg_type = MsgType::QoePrediction;
                fwd.sender = id_;
                fwd.token = ctx.plat.token_of(id_);
                fwd.payload = std::move(corrupted);
                ctx.plat.rmr_send_direct(std::move(fwd), kAppIds.ts);
            }
            // blackhole: message simply dies here
        }
    }

    void finish(AttackContext& ctx) override {
        (void)ctx;
        outcome_.detail["redirected_count"] = redirected_;
    }

private:
    bool accepted_ = false;
    long redirected_ = 0;
};

class E2MgrExploitAttack final : public Attack {
public:
    using Attack::Attack;
    void step(AttackContext& ctx) override {
        if (ctx.tick != spec_.start) return;
        const CellId node = spec_.target_cell.value_or(ctx.cells.front());
        const auto status = ctx.plat.e2mgr_admin(id_, platform::AdminAction::Shutdown, node,
                                                 ctx.plat.token_of(id_));
        outcome_.blocked = status == platform::AdminStatus::Denied;
        outcome_.detail["shutdown_tick"] = outcome_.blocked ? -1 : ctx.tick;
        outcome_.detail["node"] = node;
    }
};

class ConflictExhaustAttack final : public Attack {
public:
    using Attack::Attack;

    XAppDescriptor descriptor() const override {
        XAppDescriptor d = Attack::descriptor();
        d.e2_control = true;  // granted when defences are off; revoked manifests vary per scenario
        return d;
    }

    void step(AttackContext& ctx) override {
        if (!active(ctx.tick)) return;
        const long rate = static_cast<long>(spec_.intensity);
        for (long i = 0; i < rate; ++i) {
            platform::RicControlRequest req;
            req.request_id = ctx.request_ids.next();
            req.issuer = id_;
            req.ue_id = ctx.ues[ctx.rng.below(ctx.ues.size())];
            req.target_cell = ctx.cells[ctx.rng.below(ctx.cells.size())];
            req.priority = 1;
            if (!ctx.plat.e2_control(req)) {
                outcome_.blocked = true;
                return;
            }
        }
    }
};

class MiaLeakAttack final : public Attack {
public:
    using Attack::Attack;

    void step(AttackContext& ctx) override {
        if (ctx.tick != spec_.stop - 1) return;
        auto train = ctx.plat.sdl_scan(id_, apps::kNsTrainSet, "");
        if (train.denied) {
            outcome_.blocked = true;
            return;
        }
        std::vector<std::vector<double>> train_features;
        for (const auto& rec : train.records)
            train_features.push_back(rec.value.at("features").get<std::vector<double>>());

        Json scores = Json::object();
        bool denied = false;
        for (const UeId& ue : ctx.ues) {
            double best = 0.0;
            for (Tick t = spec_.start; t < ctx.tick && !denied; ++t) {
                const auto fp = read_features(ctx.plat, id_, t, ue, denied);
                if (!fp) continue;
                for (const auto& row : train_features)
                    best = std::max(best, feature_similarity(fp->values, row));
                if (best == 1.0) break;
            }
            scores[ue] = best;
        }
        if (denied) {
            outcome_.blocked = true;
            return;
        }
        outcome_.detail["scores"] = scores;
    }
};

class MiaPoisonAttack final : public Attack {
public:
    using Attack::Attack;

    XAppDescriptor descriptor() const override {
        XAppDescriptor d = Attack::descriptor();
        d.read_namespaces.push_back(apps::kNsUeMetric);
        return d;
    }

    void step(AttackContext& ctx) override {
        if (!active(ctx.tick) || done_ || !spec_.target_ue) return;
        Platform& plat = ctx.plat;

        if (!probe_) {
            bool denied = false;
            auto fp = read_features(plat, id_, ctx.tick - 1, *spec_.target_ue, denied);
            auto model = plat.sdl_read(id_, apps::kNsModelStore, "current");
            if (denied || model.denied) {
                outcome_.blocked = true;
                done_ = true;
                return;
            }
            if (!fp || !model.record) return;  // pipeline not warm yet
            probe_ = fp->values;
            pre_model_ = apps::model_from_json(model.record->value);
            outcome_.detail["probe_features"] = *probe_;
            outcome_.detail["pre_version"] = pre_model_->model_version;
            return;
        }

        // watch for the next retrain
        auto model = plat.sdl_read(id_, apps::kNsModelStore, "current");
        if (!model.denied && model.record) {
            const linreg::LinearModel current = apps::model_from_json(model.record->value);
            if (current.model_version > pre_model_->model_version) {
                double shift = current.bias - pre_model_->bias;
                for (std::size_t i = 0; i < probe_->size(); ++i)
                    shift += (current.weights[i] - pre_model_->weights[i]) * (*probe_)[i];
                outcome_.metrics["shift"] = std::fabs(shift);
                outcome_.detail["retrain_tick"] = ctx.tick;
                done_ = true;
                return;
            }
        }

        // keep the target's recent rows perturbed until the retrain lands
        for (Tick t = std::max<Tick>(0, ctx.tick - 2); t <= ctx.tick; ++t) {
            const std::string key = metric_key(t, *spec_.target_ue);
            auto rec = plat.sdl_read(id_, apps::kNsUeMetric, key);
            if (rec.denied || !rec.record) continue;
            Json value = rec.record->value;
            if (value.value("poisoned", false)) continue;
            value["tput"] = value.at("tput").get<double>() + spec_.delta;
            value["poisoned"] = true;
            auto w = plat.sdl_write(id_, apps::kNsUeMetric, key, value);
            if (w.denied) {
                outcome_.blocked = true;
                done_ = true;
                return;
            }
        }
    }

    void finish(AttackContext& ctx) override {
        (void)ctx;
        if (!done_ && !outcome_.blocked) outcome_.detail["inconclusive"] = true;
    }

private:
    bool done_ = false;
    std::optional<std::vector<double>> probe_;
    std::optional<linreg::LinearModel> pre_model_;
};

class MeaScrapeAttack final : public Attack {
public:
    using Attack::Attack;

    void step(AttackContext& ctx) override {
        if (!active(ctx.tick) || outcome_.blocked) return;
        Platform& plat = ctx.plat;
        if (ctx.tick == spec_.start) {
            // opportunistic: is the model simply lying around readable?
            auto model = plat.sdl_read(id_, apps::kNsModelStore, "current");
            outcome_.detail["model_store_readable"] = !model.denied;
        }
        if (static_cast<long>(pairs_.size()) >= spec_.query_budget) return;

        auto preds = plat.sdl_scan(id_, apps::kNsPrediction, metric_key(ctx.tick - 1, ""));
        if (preds.denied) {
            outcome_.blocked = true;
            return;
        }
        bool denied = false;
        for (const auto& rec : preds.records) {
            const UeId ue = rec.value.at("ue").get<std::string>();
            const CellId serving = rec.value.at("serving").get<std::string>();
            const auto fp = read_features(plat, id_, ctx.tick - 1, ue, denied);
            if (denied) {
                outcome_.blocked = true;
                return;
            }
            if (!fp) continue;
            const Json& per_cell = rec.value.at("per_cell");

            add_pair(fp->values, per_cell.at(serving).get<double>());

            // neighbour candidates reuse the same reconstruction the QoE app applies
            auto ue_rec = plat.sdl_read(id_, apps::kNsUeMetric, metric_key(ctx.tick - 1, ue));
            if (ue_rec.denied || !ue_rec.record) continue;
            const ran::UeMetrics m = apps::ue_metrics_from_json(ue_rec.record->value);
            for (const auto& n : m.neighbours) {
                if (!per_cell.contains(n.cell_id)) continue;
                auto cm = plat.sdl_read(id_, apps::kNsCellMetric, metric_key(ctx.tick - 1, n.cell_id));
                if (cm.denied || !cm.record) continue;
                add_pair(apps::candidate_features(*fp, n.rsrp_dbm,
                                                  cm.record->value.at("load").get<double>()),
                         per_cell.at(n.cell_id).get<double>());
            }
            if (static_cast<long>(pairs_.size()) >= spec_.query_budget) break;
        }
    }

    void finish(AttackContext& ctx) override {
        (void)ctx;
        outcome_.detail["pairs"] = pairs_.size();
        if (outcome_.blocked) return;
        if (pairs_.size() < 2) {
            outcome_.detail["error"] = "insufficient";
            return;
        }
        try {
            const linreg::LinearModel surrogate = linreg::ridge_fit(pairs_, labels_, 0.0);
            outcome_.detail["surrogate_weights"] = surrogate.weights;
            outcome_.detail["surrogate_bias"] = surrogate.bias;
        } catch (const linreg::SingularSystem&) {
            outcome_.detail["error"] = "singular";
        }
    }

private:
    void add_pair(std::vector<double> x, double prediction) {
        if (prediction <= 0.0) return;  // clamped outputs poison a linear fit
        if (static_cast<long>(pairs_.size()) >= spec_.query_budget) return;
        pairs_.push_back(std::move(x));
        labels_.push_back(prediction);
    }

    std::vector<std::vector<double>> pairs_;
    std::vector<double> labels_;
};

class MeaPoisonProbeAttack final : public Attack {
public:
    using Attack::Attack;

    void step(AttackContext& ctx) override {
        if (!active(ctx.tick) || outcome_.blocked || probe_index_ > kProbeCount) return;
        Platform& plat = ctx.plat;

        if (pending_tick_ >= 0) {
            auto pred = plat.sdl_read(id_, apps::kNsPrediction, metric_key(pending_tick_, kProbeUe));
            if (pred.denied) {
                outcome_.blocked = true;
                return;
            }
            if (pred.record) {
                readings_.push_back(pred.record->value.at("per_cell").at(kProbeCell).get<double>());
                ++probe_index_;
                pending_tick_ = -1;
                if (probe_index_ > kProbeCount) return;
            }
            // absent: the model is not live yet, re-issue the same probe
        }

        // Synthetic operating point. The neighbour fields are spaced 10 dB
        // apart so a unit probe offset never reorders the sorted list the
        // pipeline rebuilds from the injected record.
        std::vector<double> x = {15.0, -80.0, 50.0, -85.0, -95.0, -105.0, 10.0, 40.0};
        if (probe_index_ > 0) x[probe_index_ - 1] += 1.0;  // axis-aligned unit offset

        Json row{{"ue", kProbeUe},
                 {"tick", ctx.tick},
                 {"serving", kProbeCell},
                 {"sinr", x[0]},
                 {"rsrp", x[1]},
                 {"prb", x[2]},
                 {"tput", x[6]},
                 {"neighbours", Json::array()}};
        for (int i = 0; i < 3; ++i)
            row["neighbours"].push_back(
                {{"cell", "probe-n" + std::to_string(i)}, {"rsrp", x[3 + i]}});
        auto w1 = plat.sdl_write(id_, apps::kNsUeMetric, metric_key(ctx.tick, kProbeUe), row);
        Json cell_row{{"cell", kProbeCell},
                      {"tick", ctx.tick},
                      {"connected", 1},
                      {"load", x[7]},
                      {"agg_tput", 0.0}};
        auto w2 = plat.sdl_write(id_, apps::kNsCellMetric, metric_key(ctx.tick, kProbeCell), cell_row);
        if (w1.denied || w2.denied) {
            outcome_.blocked = true;
            return;
        }
        pending_tick_ = ctx.tick;
    }

    void finish(AttackContext& ctx) override {
        (void)ctx;
        if (outcome_.blocked) return;
        if (readings_.size() < 1 + apps::kFeatureDim) {
            outcome_.detail["error"] = "insufficient";
            return;
        }
        std::vector<double> estimate;
        for (int i = 0; i < apps::kFeatureDim; ++i)
            estimate.push_back(readings_[1 + i] - readings_[0]);
        outcome_.detail["weight_estimate"] = estimate;
    }

    static constexpr const char* kProbeUe = "zz-probe";
    static constexpr const char* kProbeCell = "zz-probe-cell";
    static constexpr int kProbeCount = apps::kFeatureDim;  // baseline + one per axis

private:
    int probe_index_ = 0;     // 0 = baseline, i = axis i-1
    Tick pending_tick_ = -1;  // probe written, prediction not yet read
    std::vector<double> readings_;
};

class DataPoisonAttack final : public Attack {
public:
    using Attack::Attack;

    void step(AttackContext& ctx) override {
        if (!active(ctx.tick) || done_) return;
        auto rows = ctx.plat.sdl_scan(id_, apps::kNsTrainSet, "");
        if (rows.denied) {
            outcome_.blocked = true;
            done_ = true;
            return;
        }
        if (rows.records.empty()) return;  // wait for the first retrain to populate it

        const long n = static_cast<long>(rows.records.size());
        const long m = static_cast<long>(std::ceil(spec_.intensity * static_cast<double>(n)));
        long corrupted = 0;
        if (spec_.strategy == "row-injection") {
            for (long i = 0; i < m; ++i) {
                Json row = rows.records[ctx.rng.below(rows.records.size())].value;
                row["label"] = row.at("label").get<double>() + spec_.delta;
                auto w = ctx.plat.sdl_write(id_, apps::kNsTrainSet,
                                            "zzz-injected-" + std::to_string(i), row);
                if (w.denied) {
                    outcome_.blocked = true;
                    done_ = true;
                    return;
                }
                ++corrupted;
            }
        } else {  // label-shift
            for (long i = 0; i < m; ++i) {
                Json row = rows.records[i].value;
                row["label"] = row.at("label").get<double>() + spec_.delta;
                auto w = ctx.plat.sdl_write(id_, apps::kNsTrainSet, rows.records[i].key, row);
                if (w.denied) {
                    outcome_.blocked = true;
                    done_ = true;
                    return;
                }
                ++corrupted;
            }
        }
        outcome_.detail["corrupted_rows"] = corrupted;
        done_ = true;
    }

private:
    bool done_ = false;
};

class TamperAttack final : public Attack {
public:
    using Attack::Attack;

    void step(AttackContext& ctx) override {
        if (ctx.tick != spec_.start) return;
        const std::string mutation = spec_.mutation;
        const bool ok = ctx.plat.register_interceptor(
            id_, MsgType::QoePrediction, [mutation](const Json& payload) {
                Json mutated = payload;
                if (mutation == "identity" || !mutated.contains("per_cell")) return mutated;
                if (mutation == "swap") {
                    auto& per_cell = mutated["per_cell"];
                    std::string lo, hi;
                    for (const auto& entry : per_cell.items()) {
                        const std::string& cell = entry.key();
                        const double mbps = entry.value().get<double>();
                        if (lo.empty() || mbps < per_cell[lo].get<double>()) lo = cell;
                        if (hi.empty() || mbps > per_cell[hi].get<double>()) hi = cell;
                    }
                    if (!lo.empty() && hi != lo) std::swap(per_cell[lo], per_cell[hi]);
                    return mutated;
                }
                // default: zero every prediction
                for (auto& entry : mutated["per_cell"].items()) entry.value() = 0.0;
                return mutated;
            });
        outcome_.blocked = !ok;
    }
};

}  // namespace

std::unique_ptr<Attack> make_attack(const harness::AttackSpec& spec, int index) {
    std::string lower = spec.kind;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::replace(lower.begin(), lower.end(), '_', '-');
    const XappId id = "mal-" + lower + "-" + std::to_string(index);

    if (spec.kind == "RMR_FLOOD") return std::make_unique<RmrFloodAttack>(spec, id);
    if (spec.kind == "ROUTE_HIJACK") return std::make_unique<RouteHijackAttack>(spec, id);
    if (spec.kind == "E2MGR_EXPLOIT") return std::make_unique<E2MgrExploitAttack>(spec, id);
    if (spec.kind == "CONFLICT_EXHAUST") return std::make_unique<ConflictExhaustAttack>(spec, id);
    if (spec.kind == "MIA_LEAK") return std::make_unique<MiaLeakAttack>(spec, id);
    if (spec.kind == "MIA_POISON") return std::make_unique<MiaPoisonAttack>(spec, id);
    if (spec.kind == "MEA_SCRAPE") return std::make_unique<MeaScrapeAttack>(spec, id);
    if (spec.kind == "MEA_POISON") return std::make_unique<MeaPoisonProbeAttack>(spec, id);
    if (spec.kind == "DATA_POISON") return std::make_unique<DataPoisonAttack>(spec, id);
    if (spec.kind == "TAMPER") return std::make_unique<TamperAttack>(spec, id);
    throw std::invalid_argument("unknown attack kind: " + spec.kind);
}

}  // namespace ricsim::attacks
