#ifndef RICSIM_APPS_HPP
#define RICSIM_APPS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ricsim/linreg.hpp"
#include "ricsim/platform.hpp"
#include "ricsim/ran.hpp"
#include "ricsim/types.hpp"

namespace ricsim::apps {

// SDL namespaces used by the pipeline.
inline constexpr const char* kNsUeMetric = "UE-Metric";
inline constexpr const char* kNsCellMetric = "Cell-Metric";
inline constexpr const char* kNsTrainSet = "TrainSet";
inline constexpr const char* kNsModelStore = "ModelStore";
inline constexpr const char* kNsPrediction = "Prediction";

// Keys are "<zero-padded tick>:<id>" so a tick prefix scans one snapshot.
std::string metric_key(Tick tick, const std::string& id);

constexpr int kFeatureDim = 8;
constexpr double kNeighbourPad = ran::kNeighbourPadRsrpDbm;

struct FeatureVector {
    int schema_id = 1;
    // serving sinr dB, serving rsrp dBm, prb %, top-3 neighbour rsrp dBm,
    // current throughput Mbps, serving cell load %
    std::vector<double> values;
};

struct ThroughputPrediction {
    UeId ue_id;
    std::map<CellId, double> per_cell_mbps;
    int model_version = 0;
};

enum class CellPreference { Prefer, Avoid, Forbid };

struct A1Policy {
    long policy_id = 0;
    std::string ue_scope;  // ue id or "ALL"
    std::map<CellId, CellPreference> preferences;
    Tick valid_from = 0;
    Tick valid_to = 0;  // exclusive
};

struct AnomalyReport {
    UeId ue_id;
    Tick tick = 0;
    double score = 0.0;
    double threshold = 0.0;
    bool flagged = false;
};

// --- pure pipeline operations ---

FeatureVector featurize(const ran::UeMetrics& m, double serving_load_pct);

// Candidate vector for a neighbour cell: the interference offset seen on
// the serving cell is assumed to carry over.
std::vector<double> candidate_features(const FeatureVector& base, double candidate_rsrp_dbm,
                                       double candidate_load_pct);

linreg::LinearModel qoe_train(const std::vector<std::vector<double>>& rows,
                              const std::vector<double>& labels, double lambda);

ThroughputPrediction qoe_predict(const linreg::LinearModel& model, const UeId& ue,
                                 const std::map<CellId, std::vector<double>>& per_cell_features);

// window = prefix ++ latest; score = z of latest against the prefix.
AnomalyReport ad_detect(const UeId& ue, Tick tick, const std::vector<double>& window,
                        double threshold);

struct UeObservation {
    UeId ue_id;
    CellId serving_cell;
    double mean_throughput_mbps = 0.0;
    std::map<CellId, double> neighbour_load_pct;
};

std::vector<A1Policy> rapp_generate_policies(const std::vector<UeObservation>& observations,
                                             double sla_mbps, double load_threshold_pct,
                                             Tick valid_from, Tick valid_to,
                                             long first_policy_id);

struct SteeringInputs {
    CellId serving;
    std::map<CellId, double> predicted_mbps;
    std::set<CellId> forbidden;
    std::set<CellId> preferred;
    bool anomaly_flagged = false;
    double hysteresis_margin = 1.2;
};

// Target cell, or nullopt (stay / starvation).
std::optional<CellId> ts_decide(const SteeringInputs& in);

// --- app actors, scheduled round-robin by the runner ---

struct AppParams {
    double ridge_lambda = 1e-3;
    double hysteresis_margin = 1.2;
    double anomaly_threshold = 3.0;
    double sla_mbps = 5.0;
    double load_threshold_pct = 70.0;
    Tick rapp_period = 100;
    Tick history_window = 10;
    bool retention = true;
    bool ts_enabled = true;
    std::set<UeId> train_members;  // empty = all UEs
};

class RequestIdSource {
public:
    long next() { return next_++; }

private:
    long next_ = 1;
};

struct AppIds {
    XappId kpimon = "kpimon-xapp";
    XappId qoe = "qoe-xapp";
    XappId ad = "ad-xapp";
    XappId ts = "ts-xapp";
    XappId rc = "rc-xapp";
    XappId rapp = "ts-rapp";
};

std::vector<XAppDescriptor> pipeline_descriptors(const AppIds& ids, const std::string& zone);

class KpimonApp {
public:
    KpimonApp(XappId id, std::vector<CellId> nodes) : id_(std::move(id)), nodes_(std::move(nodes)) {}
    void step(platform::Platform& plat, Tick tick);
    long legit_sub_attempts = 0;
    long legit_sub_rejections = 0;
    long write_count = 0;
    // per step: (attempts, rejections), for denial-rate series
    std::vector<std::pair<long, long>> per_tick_subs;

private:
    XappId id_;
    std::vector<CellId> nodes_;
};

class QoeApp {
public:
    QoeApp(XappId id, AppParams params) : id_(std::move(id)), params_(std::move(params)) {}
    void step(platform::Platform& plat, Tick tick);
    long predictions_sent = 0;

private:
    XappId id_;
    AppParams params_;
};

class AdApp {
public:
    AdApp(XappId id, AppParams params) : id_(std::move(id)), params_(std::move(params)) {}
    void step(platform::Platform& plat, Tick tick);
    long alerts_sent = 0;

private:
    XappId id_;
    AppParams params_;
};

class TsApp {
public:
    TsApp(XappId id, AppParams params) : id_(std::move(id)), params_(std::move(params)) {}
    void step(platform::Platform& plat, Tick tick, RequestIdSource& ids);
    long decisions_issued = 0;
    long starvation_count = 0;
    long predictions_received = 0;
    // decision stream for tamper scoring: (tick, ue, target or "")
    std::vector<std::tuple<Tick, UeId, CellId>> decision_log;

private:
    XappId id_;
    AppParams params_;
    std::vector<A1Policy> active_policies_;
    std::set<UeId> anomalies_this_tick_;
};

class RcApp {
public:
    explicit RcApp(XappId id) : id_(std::move(id)) {}
    void step(platform::Platform& plat, Tick tick);
    long forwarded = 0;
    long denied = 0;
    std::vector<long> issued_request_ids;

private:
    XappId id_;
};

class TsRapp {
public:
    TsRapp(XappId id, AppParams params, std::vector<UeId> all_ues)
        : id_(std::move(id)), params_(std::move(params)), all_ues_(std::move(all_ues)) {}
    void step(platform::Platform& plat, Tick tick);
    int model_version = 0;
    long policies_issued = 0;
    long train_failures = 0;
    std::vector<A1Policy> issued_policies;

private:
    bool is_member(const UeId& ue) const;

    XappId id_;
    AppParams params_;
    std::vector<UeId> all_ues_;
    long train_row_counter_ = 0;
    long policy_counter_ = 0;
    // retention-off path keeps rows app-side instead of in the SDL
    std::vector<std::vector<double>> mem_rows_;
    std::vector<double> mem_labels_;
};

// Serialization helpers shared with attacks and the harness.
platform::Json ue_metrics_to_json(const ran::UeMetrics& m);
ran::UeMetrics ue_metrics_from_json(const platform::Json& j);
platform::Json cell_metrics_to_json(const ran::CellMetrics& m);
ran::CellMetrics cell_metrics_from_json(const platform::Json& j);
platform::Json model_to_json(const linreg::LinearModel& m);
linreg::LinearModel model_from_json(const platform::Json& j);
platform::Json policy_to_json(const A1Policy& p);
A1Policy policy_from_json(const platform::Json& j);

}  // namespace ricsim::apps

#endif
