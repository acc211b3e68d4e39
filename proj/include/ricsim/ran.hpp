#ifndef RICSIM_RAN_HPP
#define RICSIM_RAN_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ricsim/types.hpp"

namespace ricsim::ran {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

struct Cell {
    CellId cell_id;
    Position position;
    double tx_power_dbm = 46.0;
    double bandwidth_mhz = 10.0;
    int max_ues = 32;
    bool online = true;
};

struct Ue {
    UeId ue_id;
    Position position;
    Position waypoint;           // random-waypoint target
    double speed_m_per_tick = 0.0;
    CellId serving_cell;
    double traffic_demand_mbps = 0.0;
};

struct NeighbourMeasurement {
    CellId cell_id;
    double rsrp_dbm = 0.0;
};

struct UeMetrics {
    UeId ue_id;
    Tick tick = 0;
    CellId serving_cell;
    double sinr_serving_db = 0.0;
    double rsrp_serving_dbm = 0.0;
    double prb_usage_pct = 0.0;
    double throughput_dl_mbps = 0.0;
    std::vector<NeighbourMeasurement> neighbours;  // sorted by rsrp desc, tie-break cell_id
};

struct CellMetrics {
    CellId cell_id;
    Tick tick = 0;
    int connected_ue_count = 0;
    double load_pct = 0.0;
    double aggregate_throughput_mbps = 0.0;
};

enum class HandoverStatus { Applied, NoOp, RejectedCapacity };

struct HandoverResult {
    HandoverStatus status = HandoverStatus::Applied;
    UeId ue_id;
    CellId from_cell;
    CellId to_cell;
    Tick tick = 0;
};

struct TickOutput {
    std::vector<UeMetrics> ue_metrics;
    std::vector<CellMetrics> cell_metrics;
};

constexpr double kNoiseFloorDbm = -104.0;
constexpr int kNeighbourListSize = 3;
constexpr double kNeighbourPadRsrpDbm = -156.0;

double path_loss_db(double distance_m);
double received_power_dbm(const Cell& cell, const Position& at);

// SINR in dB over the linear power domain; interference is the sum of
// received powers from every other online cell.
double compute_sinr(const Ue& ue, const Cell& cell, const std::vector<Cell>& world);

// Shannon share of the cell bandwidth, clamped to [0, per-UE cap].
double compute_throughput(double sinr_db, const Cell& cell, int sharing_ues, double per_ue_cap_mbps);

class World {
public:
    World(std::vector<Cell> cells, std::vector<Ue> ues, Position area_min, Position area_max);

    // One simulation tick: random-waypoint movement, metric emission.
    TickOutput step(Tick tick, Rng& mobility_rng);

    HandoverResult execute_handover(const UeId& ue_id, const CellId& target_cell, Tick tick);

    void set_cell_online(const CellId& cell_id, bool online);

    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<Ue>& ues() const { return ues_; }
    const Cell& cell(const CellId& id) const;
    const Ue& ue(const UeId& id) const;
    bool has_cell(const CellId& id) const;
    bool has_ue(const UeId& id) const;
    int connected_count(const CellId& cell_id) const;

private:
    Cell& cell_mut(const CellId& id);
    void move_ue(Ue& ue, Rng& rng);

    std::vector<Cell> cells_;
    std::vector<Ue> ues_;
    Position area_min_;
    Position area_max_;
};

}  // namespace ricsim::ran

#endif
