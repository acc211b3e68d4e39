#ifndef RICSIM_SCENARIO_HPP
#define RICSIM_SCENARIO_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ricsim/apps.hpp"
#include "ricsim/platform.hpp"
#include "ricsim/types.hpp"

namespace ricsim::harness {

using Json = nlohmann::json;

struct ValidationError : std::runtime_error {
    ValidationError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_path(field) {}
    std::string field_path;
};

struct CellSpec {
    CellId id;
    double x = 0.0;
    double y = 0.0;
    double tx_power_dbm = 46.0;
    double bandwidth_mhz = 10.0;
    int max_ues = 32;
};

struct UeGroup {
    int count = 1;
    double traffic_demand_mbps = 100.0;
    double speed_m_per_tick = 0.0;
    std::optional<CellId> initial_cell;  // absent = attach strongest
};

struct ZoneSpec {
    std::map<XappId, std::string> membership;          // default zone otherwise
    std::vector<std::pair<std::string, std::string>> edges;
    std::string pipeline_zone = "default";
};

struct AttackSpec {
    std::string kind;  // RMR_FLOOD, ROUTE_HIJACK, ...
    Tick start = 0;
    Tick stop = 0;
    double intensity = 1.0;  // rate per tick, fraction, or count depending on kind
    double delta = 0.0;
    std::string strategy;    // data_poison: label-shift | row-injection
    std::string mutation;    // tamper: zero | identity | swap
    std::string spoof;       // route_hijack: blackhole | corrupt
    std::string msg_type = "QOE_PREDICTION";
    std::string target_namespace;
    std::optional<UeId> target_ue;
    std::optional<UeId> control_ue;
    std::optional<CellId> target_cell;
    long query_budget = 64;
};

struct Scenario {
    std::string name;
    Tick ticks = 1;
    std::uint64_t seed = 0;
    std::array<double, 4> area{0.0, 0.0, 1000.0, 1000.0};  // x0 y0 x1 y1
    std::vector<CellSpec> cells;
    std::vector<UeGroup> ue_groups;
    apps::AppParams app_params;
    platform::PlatformConfig platform_config;
    platform::DefenceConfig defence_config;
    ZoneSpec zones;
    std::vector<AttackSpec> attacks;

    int total_ues() const;
    std::vector<UeId> ue_ids() const;
};

// Strict parse: unknown fields are rejected, invariants validated.
Scenario parse_scenario(const std::string& bytes);
Scenario load_scenario(const std::string& path);

// Canonical serialization; basis of the config hash and of sweep edits.
Json scenario_to_json(const Scenario& s);

// "<name hash>-<full hash>", both 16 hex digits.
std::string config_hash(const Scenario& s);

}  // namespace ricsim::harness

#endif
