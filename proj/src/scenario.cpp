#include "ricsim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ricsim::harness {

namespace {

void check_keys(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ValidationError(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ValidationError(path + "." + key, "unknown field");
    }
}

template <typename T>
T get_or(const Json& obj, const std::string& key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    return it->get<T>();
}

const std::set<std::string> kAttackKinds = {
    "MIA_LEAK",  "MIA_POISON", "MEA_SCRAPE",    "MEA_POISON",       "DATA_POISON",
    "TAMPER",    "RMR_FLOOD",  "ROUTE_HIJACK",  "E2MGR_EXPLOIT",    "CONFLICT_EXHAUST"};

}  // namespace

int Scenario::total_ues() const {
    int n = 0;
    for (const UeGroup& g : ue_groups) n += g.count;
    return n;
}

std::vector<UeId> Scenario::ue_ids() const {
    std::vector<UeId> ids;
    for (int i = 0; i < total_ues(); ++i) {
        std::ostringstream out;
        out << "ue";
        out.width(3);
        out.fill('0');
        out << i;
        ids.push_back(out.str());
    }
    return ids;
}

Scenario parse_scenario(const std::string& bytes) {
    Json doc;
    try {
        doc = Json::parse(bytes);
    } catch (const Json::parse_error& e) {
        throw ValidationError("$", std::string("parse error: ") + e.what());
    }

    check_keys(doc, "$",
               {"name", "ticks", "seed", "area", "cells", "ues", "apps", "platform", "defences",
                "zones", "attacks"});

    Scenario s;
    s.name = get_or<std::string>(doc, "name", "");
    if (s.name.empty()) throw ValidationError("$.name", "required");
    s.ticks = get_or<Tick>(doc, "ticks", 0);
    if (s.ticks < 1) throw ValidationError("$.ticks", "must be >= 1");
    s.seed = get_or<std::uint64_t>(doc, "seed", 0);
    if (doc.contains("area")) {
        const auto a = doc["area"].get<std::vector<double>>();
        if (a.size() != 4) throw ValidationError("$.area", "expected [x0, y0, x1, y1]");
        s.area = {a[0], a[1], a[2], a[3]};
    }

    if (!doc.contains("cells") || !doc["cells"].is_array() || doc["cells"].empty())
        throw ValidationError("$.cells", "at least one cell required");
    std::set<CellId> cell_ids;
    for (std::size_t i = 0; i < doc["cells"].size(); ++i) {
        const Json& c = doc["cells"][i];
        const std::string path = "$.cells[" + std::to_string(i) + "]";
        check_keys(c, path, {"id", "x", "y", "tx_power_dbm", "bandwidth_mhz", "max_ues"});
        CellSpec spec;
        spec.id = get_or<std::string>(c, "id", "");
        if (spec.id.empty()) throw ValidationError(path + ".id", "required");
        if (!cell_ids.insert(spec.id).second) throw ValidationError(path + ".id", "duplicate");
        spec.x = get_or<double>(c, "x", 0.0);
        spec.y = get_or<double>(c, "y", 0.0);
        spec.tx_power_dbm = get_or<double>(c, "tx_power_dbm", 46.0);
        spec.bandwidth_mhz = get_or<double>(c, "bandwidth_mhz", 10.0);
        if (spec.bandwidth_mhz <= 0.0) throw ValidationError(path + ".bandwidth_mhz", "must be > 0");
        spec.max_ues = get_or<int>(c, "max_ues", 32);
        if (spec.max_ues < 1) throw ValidationError(path + ".max_ues", "must be >= 1");
        s.cells.push_back(spec);
    }

    if (!doc.contains("ues") || !doc["ues"].is_array() || doc["ues"].empty())
        throw ValidationError("$.ues", "at least one UE group required");
    for (std::size_t i = 0; i < doc["ues"].size(); ++i) {
        const Json& g = doc["ues"][i];
        const std::string path = "$.ues[" + std::to_string(i) + "]";
        check_keys(g, path, {"count", "traffic_demand_mbps", "speed_m_per_tick", "initial_cell"});
        UeGroup group;
        group.count = get_or<int>(g, "count", 1);
        if (group.count < 0) throw ValidationError(path + ".count", "must be >= 0");
        group.traffic_demand_mbps = get_or<double>(g, "traffic_demand_mbps", 100.0);
        if (group.traffic_demand_mbps < 0.0)
            throw ValidationError(path + ".traffic_demand_mbps", "must be >= 0");
        group.speed_m_per_tick = get_or<double>(g, "speed_m_per_tick", 0.0);
        if (g.contains("initial_cell") && !g["initial_cell"].is_null()) {
            group.initial_cell = g["initial_cell"].get<std::string>();
            if (!cell_ids.count(*group.initial_cell))
                throw ValidationError(path + ".initial_cell", "unknown cell");
        }
        s.ue_groups.push_back(group);
    }

    if (doc.contains("apps")) {
        const Json& a = doc["apps"];
        check_keys(a, "$.apps",
                   {"ridge_lambda", "hysteresis_margin", "anomaly_threshold", "sla_mbps",
                    "load_threshold_pct", "rapp_period", "history_window", "retention",
                    "ts_enabled", "train_members"});
        s.app_params.ridge_lambda = get_or<double>(a, "ridge_lambda", 1e-3);
        if (s.app_params.ridge_lambda < 0.0)
            throw ValidationError("$.apps.ridge_lambda", "must be >= 0");
        s.app_params.hysteresis_margin = get_or<double>(a, "hysteresis_margin", 1.2);
        s.app_params.anomaly_threshold = get_or<double>(a, "anomaly_threshold", 3.0);
        s.app_params.sla_mbps = get_or<double>(a, "sla_mbps", 5.0);
        s.app_params.load_threshold_pct = get_or<double>(a, "load_threshold_pct", 70.0);
        s.app_params.rapp_period = get_or<Tick>(a, "rapp_period", 100);
        if (s.app_params.rapp_period < 1)
            throw ValidationError("$.apps.rapp_period", "must be >= 1");
        s.app_params.history_window = get_or<Tick>(a, "history_window", 10);
        s.app_params.retention = get_or<bool>(a, "retention", true);
        s.app_params.ts_enabled = get_or<bool>(a, "ts_enabled", true);
        if (a.contains("train_members") && !a["train_members"].is_null())
            for (const auto& m : a["train_members"])
                s.app_params.train_members.insert(m.get<std::string>());
    }

    if (doc.contains("platform")) {
        const Json& p = doc["platform"];
        check_keys(p, "$.platform",
                   {"inbox_capacity", "subscription_window", "conflict_budget", "channel_secure",
                    "conflict_policy"});
        s.platform_config.inbox_capacity = get_or<int>(p, "inbox_capacity", 64);
        if (s.platform_config.inbox_capacity < 1)
            throw ValidationError("$.platform.inbox_capacity", "must be >= 1");
        s.platform_config.subscription_window = get_or<int>(p, "subscription_window", 128);
        if (s.platform_config.subscription_window < 1)
            throw ValidationError("$.platform.subscription_window", "must be >= 1");
        s.platform_config.conflict_budget = get_or<int>(p, "conflict_budget", 32);
        if (s.platform_config.conflict_budget < 1)
            throw ValidationError("$.platform.conflict_budget", "must be >= 1");
        s.platform_config.channel_secure = get_or<bool>(p, "channel_secure", false);
        const std::string policy = get_or<std::string>(p, "conflict_policy", "priority");
        if (policy == "priority")
            s.platform_config.conflict_policy = platform::ConflictPolicy::Priority;
        else if (policy == "first-wins")
            s.platform_config.conflict_policy = platform::ConflictPolicy::FirstWins;
        else
            throw ValidationError("$.platform.conflict_policy", "expected priority or first-wins");
    }

    if (doc.contains("defences")) {
        const Json& d = doc["defences"];
        check_keys(d, "$.defences",
                   {"access_mode", "zero_trust", "detection", "auto_quarantine",
                    "detection_threshold"});
        const std::string mode = get_or<std::string>(d, "access_mode", "allow-all");
        if (mode == "allow-all")
            s.defence_config.access_mode = defences::AccessMode::AllowAll;
        else if (mode == "least-privilege")
            s.defence_config.access_mode = defences::AccessMode::LeastPrivilege;
        else
            throw ValidationError("$.defences.access_mode",
                                  "expected allow-all or least-privilege");
        s.defence_config.zero_trust = get_or<bool>(d, "zero_trust", false);
        s.defence_config.detection = get_or<bool>(d, "detection", false);
        s.defence_config.auto_quarantine = get_or<bool>(d, "auto_quarantine", false);
        s.defence_config.detection_threshold = get_or<double>(d, "detection_threshold", 5.0);
    }

    if (doc.contains("zones")) {
        const Json& z = doc["zones"];
        check_keys(z, "$.zones", {"membership", "edges", "pipeline_zone"});
        if (z.contains("membership"))
            for (const auto& [xapp, zone] : z["membership"].items())
                s.zones.membership[xapp] = zone.get<std::string>();
        if (z.contains("edges"))
            for (const auto& e : z["edges"]) {
                const auto pair = e.get<std::vector<std::string>>();
                if (pair.size() != 2) throw ValidationError("$.zones.edges", "expected [from, to]");
                s.zones.edges.emplace_back(pair[0], pair[1]);
            }
        s.zones.pipeline_zone = get_or<std::string>(z, "pipeline_zone", "default");
    }

    if (doc.contains("attacks")) {
        const auto ue_ids = s.ue_ids();
        const std::set<UeId> known_ues(ue_ids.begin(), ue_ids.end());
        for (std::size_t i = 0; i < doc["attacks"].size(); ++i) {
            const Json& a = doc["attacks"][i];
            const std::string path = "$.attacks[" + std::to_string(i) + "]";
            check_keys(a, path,
                       {"kind", "start", "stop", "intensity", "delta", "strategy", "mutation",
                        "spoof", "msg_type", "target_namespace", "target_ue", "control_ue",
                        "target_cell", "query_budget"});
            AttackSpec spec;
            spec.kind = get_or<std::string>(a, "kind", "");
            if (!kAttackKinds.count(spec.kind)) throw ValidationError(path + ".kind", "unknown kind");
            spec.start = get_or<Tick>(a, "start", 0);
            spec.stop = get_or<Tick>(a, "stop", s.ticks);
            if (spec.start >= spec.stop) throw ValidationError(path + ".start", "start must be < stop");
            spec.intensity = get_or<double>(a, "intensity", 1.0);
            if (spec.intensity < 0.0) throw ValidationError(path + ".intensity", "must be >= 0");
            spec.delta = get_or<double>(a, "delta", 0.0);
            spec.strategy = get_or<std::string>(a, "strategy", "label-shift");
            spec.mutation = get_or<std::string>(a, "mutation", "zero");
            spec.spoof = get_or<std::string>(a, "spoof", "blackhole");
            spec.msg_type = get_or<std::string>(a, "msg_type", "QOE_PREDICTION");
            spec.target_namespace = get_or<std::string>(a, "target_namespace", apps::kNsTrainSet);
            spec.query_budget = get_or<long>(a, "query_budget", 64);
            if (a.contains("target_ue") && !a["target_ue"].is_null()) {
                spec.target_ue = a["target_ue"].get<std::string>();
                if (!known_ues.count(*spec.target_ue))
                    throw ValidationError(path + ".target_ue", "unknown ue");
            }
            if (a.contains("control_ue") && !a["control_ue"].is_null()) {
                spec.control_ue = a["control_ue"].get<std::string>();
                if (!known_ues.count(*spec.control_ue))
                    throw ValidationError(path + ".control_ue", "unknown ue");
            }
            if (a.contains("target_cell") && !a["target_cell"].is_null()) {
                spec.target_cell = a["target_cell"].get<std::string>();
                if (!cell_ids.count(*spec.target_cell))
                    throw ValidationError(path + ".target_cell", "unknown cell");
            }
            s.attacks.push_back(spec);
        }
    }

    for (const auto& member : s.app_params.train_members) {
        const auto ids = s.ue_ids();
        if (std::find(ids.begin(), ids.end(), member) == ids.end())
            throw ValidationError("$.apps.train_members", "unknown ue " + member);
    }

    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

Json scenario_to_json(const Scenario& s) {
    Json cells = Json::array();
    for (const CellSpec& c : s.cells)
        cells.push_back({{"id", c.id},
                         {"x", c.x},
                         {"y", c.y},
                         {"tx_power_dbm", c.tx_power_dbm},
                         {"bandwidth_mhz", c.bandwidth_mhz},
                         {"max_ues", c.max_ues}});
    Json ues = Json::array();
    for (const UeGroup& g : s.ue_groups) {
        Json group{{"count", g.count},
                   {"traffic_demand_mbps", g.traffic_demand_mbps},
                   {"speed_m_per_tick", g.speed_m_per_tick}};
        if (g.initial_cell) group["initial_cell"] = *g.initial_cell;
        ues.push_back(group);
    }
    Json apps_json{{"ridge_lambda", s.app_params.ridge_lambda},
                   {"hysteresis_margin", s.app_params.hysteresis_margin},
                   {"anomaly_threshold", s.app_params.anomaly_threshold},
                   {"sla_mbps", s.app_params.sla_mbps},
                   {"load_threshold_pct", s.app_params.load_threshold_pct},
                   {"rapp_period", s.app_params.rapp_period},
                   {"history_window", s.app_params.history_window},
                   {"retention", s.app_params.retention},
                   {"ts_enabled", s.app_params.ts_enabled}};
    if (!s.app_params.train_members.empty())
        apps_json["train_members"] =
            std::vector<UeId>(s.app_params.train_members.begin(), s.app_params.train_members.end());
    Json platform_json{
        {"inbox_capacity", s.platform_config.inbox_capacity},
        {"subscription_window", s.platform_config.subscription_window},
        {"conflict_budget", s.platform_config.conflict_budget},
        {"channel_secure", s.platform_config.channel_secure},
        {"conflict_policy",
         s.platform_config.conflict_policy == platform::ConflictPolicy::Priority ? "priority"
                                                                                 : "first-wins"}};
    Json defences_json{
        {"access_mode", s.defence_config.access_mode == defences::AccessMode::AllowAll
                            ? "allow-all"
                            : "least-privilege"},
        {"zero_trust", s.defence_config.zero_trust},
        {"detection", s.defence_config.detection},
        {"auto_quarantine", s.defence_config.auto_quarantine},
        {"detection_threshold", s.defence_config.detection_threshold}};
    Json zones_json = Json::object();
    if (!s.zones.membership.empty()) {
        Json membership = Json::object();
        for (const auto& [xapp, zone] : s.zones.membership) membership[xapp] = zone;
        zones_json["membership"] = membership;
    }
    if (!s.zones.edges.empty()) {
        Json edges = Json::array();
        for (const auto& [from, to] : s.zones.edges) edges.push_back({from, to});
        zones_json["edges"] = edges;
    }
    zones_json["pipeline_zone"] = s.zones.pipeline_zone;
    Json attacks_json = Json::array();
    for (const AttackSpec& a : s.attacks) {
        Json aj{{"kind", a.kind},       {"start", a.start},
                {"stop", a.stop},       {"intensity", a.intensity},
                {"delta", a.delta},     {"strategy", a.strategy},
                {"mutation", a.mutation}, {"spoof", a.spoof},
                {"msg_type", a.msg_type}, {"target_namespace", a.target_namespace},
                {"query_budget", a.query_budget}};
        if (a.target_ue) aj["target_ue"] = *a.target_ue;
        if (a.control_ue) aj["control_ue"] = *a.control_ue;
        if (a.target_cell) aj["target_cell"] = *a.target_cell;
        attacks_json.push_back(aj);
    }

    return Json{{"name", s.name},
                {"ticks", s.ticks},
                {"seed", s.seed},
                {"area", std::vector<double>{s.area[0], s.area[1], s.area[2], s.area[3]}},
                {"cells", cells},
                {"ues", ues},
                {"apps", apps_json},
                {"platform", platform_json},
                {"defences", defences_json},
                {"zones", zones_json},
                {"attacks", attacks_json}};
}

std::string config_hash(const Scenario& s) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%016llx-%016llx",
                  static_cast<unsigned long long>(fnv1a64(s.name)),
                  static_cast<unsigned long long>(fnv1a64(scenario_to_json(s).dump())));
    return buf;
}

}  // namespace ricsim::harness
