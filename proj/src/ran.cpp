#include "ricsim/ran.hpp"

#include <algorithm>
#include <cmath>

namespace ricsim::ran {

namespace {

double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace

double path_loss_db(double distance_m) {
    // Standard macro-cell model, distance in km.
    return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

double received_power_dbm(const Cell& cell, const Position& at) {
    return cell.tx_power_dbm - path_loss_db(distance(cell.position, at));
}

double compute_sinr(const Ue& ue, const Cell& cell, const std::vector<Cell>& world) {
    if (!cell.online) throw std::invalid_argument("compute_sinr: cell offline: " + cell.cell_id);
    const double d = distance(ue.position, cell.position);
    if (d <= 0.0) throw std::invalid_argument("compute_sinr: zero distance to cell " + cell.cell_id);

    const double signal_mw = dbm_to_mw(received_power_dbm(cell, ue.position));
    double denom_mw = dbm_to_mw(kNoiseFloorDbm);
    for (const Cell& other : world) {
        if (other.cell_id == cell.cell_id || !other.online) continue;
        denom_mw += dbm_to_mw(received_power_dbm(other, ue.position));
    }
    return mw_to_dbm(signal_mw / denom_mw);
}

double compute_throughput(double sinr_db, const Cell& cell, int sharing_ues, double per_ue_cap_mbps) {
    if (sharing_ues < 1) throw std::invalid_argument("compute_throughput: sharing_ues must be >= 1");
    const double snr_lin = std::pow(10.0, sinr_db / 10.0);
    const double t = (cell.bandwidth_mhz / static_cast<double>(sharing_ues)) * std::log2(1.0 + snr_lin);
    return std::clamp(t, 0.0, per_ue_cap_mbps);
}

World::World(std::vector<Cell> cells, std::vector<Ue> ues, Position area_min, Position area_max)
    : cells_(std::move(cells)), ues_(std::move(ues)), area_min_(area_min), area_max_(area_max) {
    for (const Cell& c : cells_) {
        if (!(c.bandwidth_mhz > 0.0)) throw std::invalid_argument("cell bandwidth must be > 0");
        if (c.max_ues < 1) throw std::invalid_argument("cell max_ues must be >= 1");
        if (!std::isfinite(c.tx_power_dbm)) throw std::invalid_argument("cell tx_power must be finite");
    }
    for (const Ue& u : ues_) {
        if (!has_cell(u.serving_cell)) throw std::invalid_argument("ue serving_cell unknown: " + u.serving_cell);
        if (u.traffic_demand_mbps < 0.0) throw std::invalid_argument("ue traffic_demand must be >= 0");
    }
}

const Cell& World::cell(const CellId& id) const {
    for (const Cell& c : cells_)
        if (c.cell_id == id) return c;
    throw std::out_of_range("unknown cell: " + id);
}

Cell& World::cell_mut(const CellId& id) {
    for (Cell& c : cells_)
        if (c.cell_id == id) return c;
    throw std::out_of_range("unknown cell: " + id);
}

const Ue& World::ue(const UeId& id) const {
    for (const Ue& u : ues_)
        if (u.ue_id == id) return u;
    throw std::out_of_range("unknown ue: " + id);
}

bool World::has_cell(const CellId& id) const {
    return std::any_of(cells_.begin(), cells_.end(), [&](const Cell& c) { return c.cell_id == id; });
}

bool World::has_ue(const UeId& id) const {
    return std::any_of(ues_.begin(), ues_.end(), [&](const Ue& u) { return u.ue_id == id; });
}

int World::connected_count(const CellId& cell_id) const {
    int n = 0;
    for (const Ue& u : ues_)
        if (u.serving_cell == cell_id) ++n;
    return n;
}

void World::set_cell_online(const CellId& cell_id, bool online) {
    cell_mut(cell_id).online = online;
}

void World::move_ue(Ue& ue, Rng& rng) {
    if (ue.speed_m_per_tick <= 0.0) return;
    const double dx = ue.waypoint.x - ue.position.x;
    const double dy = ue.waypoint.y - ue.position.y;
    const double dist = std::hypot(dx, dy);
    if (dist <= ue.speed_m_per_tick) {
        ue.position = ue.waypoint;
        ue.waypoint.x = rng.uniform(area_min_.x, area_max_.x);
        ue.waypoint.y = rng.uniform(area_min_.y, area_max_.y);
    } else {
        ue.position.x += ue.speed_m_per_tick * dx / dist;
        ue.position.y += ue.speed_m_per_tick * dy / dist;
    }
}

TickOutput World::step(Tick tick, Rng& mobility_rng) {
    TickOutput out;

    for (Ue& ue : ues_) move_ue(ue, mobility_rng);

    std::map<CellId, int> counts;
    for (const Cell& c : cells_) counts[c.cell_id] = 0;
    for (const Ue& u : ues_) counts[u.serving_cell]++;

    std::map<CellId, double> aggregate;
    for (const Ue& u : ues_) {
        const Cell& serving = cell(u.serving_cell);
        if (!serving.online) continue;  // no service, no report

        UeMetrics m;
        m.ue_id = u.ue_id;
        m.tick = tick;
        m.serving_cell = u.serving_cell;
        m.sinr_serving_db = compute_sinr(u, serving, cells_);
        m.rsrp_serving_dbm = received_power_dbm(serving, u.position);
        const int sharing = std::max(1, counts[u.serving_cell]);
        const double cap = std::min(u.traffic_demand_mbps, 1000.0);
        m.throughput_dl_mbps = compute_throughput(m.sinr_serving_db, serving, sharing, cap);
        m.prb_usage_pct = std::min(100.0, 100.0 / static_cast<double>(sharing));

        for (const Cell& c : cells_) {
            if (c.cell_id == u.serving_cell || !c.online) continue;
            m.neighbours.push_back({c.cell_id, received_power_dbm(c, u.position)});
        }
        std::sort(m.neighbours.begin(), m.neighbours.end(),
                  [](const NeighbourMeasurement& a, const NeighbourMeasurement& b) {
                      if (a.rsrp_dbm != b.rsrp_dbm) return a.rsrp_dbm > b.rsrp_dbm;
                      return a.cell_id < b.cell_id;
                  });
        if (m.neighbours.size() > kNeighbourListSize) m.neighbours.resize(kNeighbourListSize);

        aggregate[u.serving_cell] += m.throughput_dl_mbps;
        out.ue_metrics.push_back(std::move(m));
    }

    for (const Cell& c : cells_) {
        if (!c.online) continue;
        CellMetrics cm;
        cm.cell_id = c.cell_id;
        cm.tick = tick;
        cm.connected_ue_count = counts[c.cell_id];
        cm.load_pct = std::min(100.0, 100.0 * counts[c.cell_id] / static_cast<double>(c.max_ues));
        cm.aggregate_throughput_mbps = aggregate[c.cell_id];
        out.cell_metrics.push_back(cm);
    }
    return out;
}

HandoverResult World::execute_handover(const UeId& ue_id, const CellId& target_cell, Tick tick) {
    if (!has_ue(ue_id)) throw std::out_of_range("execute_handover: unknown ue " + ue_id);
    const Cell& target = cell(target_cell);  // throws on unknown cell
    if (!target.online) throw std::invalid_argument("execute_handover: target offline " + target_cell);

    Ue* u = nullptr;
    for (Ue& cand : ues_)
        if (cand.ue_id == ue_id) u = &cand;

    HandoverResult result;
    result.ue_id = ue_id;
    result.from_cell = u->serving_cell;
    result.to_cell = target_cell;
    result.tick = tick;

    if (u->serving_cell == target_cell) {
        result.status = HandoverStatus::NoOp;
        return result;
    }
    if (connected_count(target_cell) >= target.max_ues) {
        result.status = HandoverStatus::RejectedCapacity;
        return result;
    }
    u->serving_cell = target_cell;
    result.status = HandoverStatus::Applied;
    return result;
}

}  // namespace ricsim::ran
