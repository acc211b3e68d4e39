#ifndef RICSIM_RUNNER_HPP
#define RICSIM_RUNNER_HPP

#include <optional>
#include <tuple>
#include <vector>

#include "ricsim/linreg.hpp"
#include "ricsim/report.hpp"
#include "ricsim/scenario.hpp"

namespace ricsim::harness {

// Everything a run produces: the serializable report plus the raw
// artifacts the test suite and attack scoring need. Only `report` is
// part of the external contract.
struct RunResult {
    MetricsReport report;
    std::string report_bytes;

    std::vector<AuditEntry> audit;
    std::vector<defences::AlertEvent> alerts;

    // per tick: (kpimon subscription attempts, rejections)
    std::vector<std::pair<long, long>> kpimon_subs;
    std::vector<long> qoe_sent_per_tick;
    std::vector<long> ts_received_per_tick;
    std::vector<std::tuple<Tick, UeId, CellId>> ts_decisions;  // target "" = stay/starved

    std::vector<linreg::LinearModel> model_history;
    // TrainSet snapshot at the moment of the last retrain
    std::vector<std::vector<double>> trainset_rows;
    std::vector<double> trainset_labels;

    // (resolve tick, latency in ticks) for pipeline-issued control requests
    std::vector<std::pair<Tick, double>> legit_latencies;
    std::map<XappId, Tick> quarantine_ticks;
};

RunResult run(const Scenario& scenario, std::optional<std::uint64_t> seed_override = std::nullopt);

// Cartesian product of grid values (keys are JSON pointers into the
// canonical scenario document, iterated in key order) times seeds, in
// that order. An unknown pointer or invalid resulting scenario throws.
std::vector<RunResult> sweep(const Scenario& base, const Json& grid,
                             const std::vector<std::uint64_t>& seeds);

}  // namespace ricsim::harness

#endif
