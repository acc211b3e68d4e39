#ifndef RICSIM_PLATFORM_HPP
#define RICSIM_PLATFORM_HPP

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ricsim/audit.hpp"
#include "ricsim/defences.hpp"
#include "ricsim/types.hpp"
#include "ricsim/xapp.hpp"

namespace ricsim::platform {

using Json = nlohmann::json;

struct SdlRecord {
    std::string ns;
    std::string key;
    Json value;
    XappId writer;
    long version = 0;
    Tick tick = 0;
};

struct SdlReadResult {
    bool denied = false;
    std::optional<SdlRecord> record;
};

struct SdlWriteResult {
    bool denied = false;
    long version = 0;
};

struct SdlScanResult {
    bool denied = false;
    std::vector<SdlRecord> records;  // key-ordered
};

struct Message {
    MsgType msg_type = MsgType::QoePrediction;
    XappId sender;
    std::optional<defences::IdentityToken> token;
    Json payload;
    Tick tick = 0;
};

enum class SendStatus { Delivered, DroppedNoRoute, DroppedQueueFull, DroppedUnauthorized };

struct SendResult {
    SendStatus status = SendStatus::Delivered;
    XappId delivered_to;
};

struct RoutingTable {
    std::map<MsgType, XappId> entries;
    long generation = 0;
    XappId last_updater;
};

enum class SubscribeStatus { Accepted, RejectedCapacity, Denied };

struct SubscribeResult {
    SubscribeStatus status = SubscribeStatus::Accepted;
    long sub_id = 0;
};

struct E2Subscription {
    long sub_id = 0;
    XappId subscriber;
    CellId node;
    Tick report_period = 1;
    bool active = true;
};

struct RicControlRequest {
    long request_id = 0;
    XappId issuer;
    UeId ue_id;
    CellId target_cell;
    int priority = 0;
    Tick tick = 0;
};

enum class ConflictPolicy { Priority, FirstWins };

struct ConflictOutcome {
    std::vector<RicControlRequest> accepted;
    std::vector<RicControlRequest> rejected;
};

enum class AdminAction { Shutdown, Restart };
enum class AdminStatus { Applied, Denied };

struct TamperRecord {
    Tick tick = 0;
    MsgType msg_type = MsgType::QoePrediction;
    std::uint64_t original_hash = 0;
    std::uint64_t mutated_hash = 0;
};

struct PlatformConfig {
    int inbox_capacity = 64;       // Q
    int subscription_window = 128;  // S, per processing window (tick)
    int conflict_budget = 32;       // B, requests evaluated per tick
    bool channel_secure = false;
    ConflictPolicy conflict_policy = ConflictPolicy::Priority;
};

struct DefenceConfig {
    defences::AccessMode access_mode = defences::AccessMode::AllowAll;
    bool zero_trust = false;
    bool detection = false;
    bool auto_quarantine = false;
    double detection_threshold = 5.0;
};

// Deterministic work accounting, used for the defence-overhead metric.
struct CostMeter {
    long total_units = 0;
    long defence_units = 0;
    void op(long units) { total_units += units; }
    void defence(long units) {
        total_units += units;
        defence_units += units;
    }
};

constexpr long kCostPlatformOp = 20;
constexpr long kCostDefenceCheck = 1;
constexpr long kCostProfileScore = 2;

inline constexpr const char* kAdminId = "platform-admin";

// The Near-RT RIC substrate. With all defences disabled it deliberately
// exhibits the open-SDL, unauthenticated-route, plaintext-admin and
// bounded-queue weaknesses the attack catalogue exercises.
class Platform {
public:
    Platform(PlatformConfig config, DefenceConfig defence, std::uint64_t run_key,
             std::vector<CellId> nodes);

    std::pair<XappId, defences::IdentityToken> register_xapp(const XAppDescriptor& descriptor);
    const defences::IdentityToken& token_of(const XappId& xapp) const;
    const XAppDescriptor& descriptor_of(const XappId& xapp) const;
    bool is_registered(const XappId& xapp) const;
    std::vector<XAppDescriptor> descriptors() const;

    void set_zone_graph(defences::ZoneGraph zones) { zones_ = std::move(zones); }
    void begin_tick(Tick tick);

    // --- SDL ---
    SdlReadResult sdl_read(const XappId& caller, const std::string& ns, const std::string& key);
    SdlWriteResult sdl_write(const XappId& caller, const std::string& ns, const std::string& key,
                             Json value);
    SdlScanResult sdl_scan(const XappId& caller, const std::string& ns,
                           const std::string& key_prefix);

    // --- RMR ---
    bool rmr_update_routes(const XappId& sender, const std::map<MsgType, XappId>& new_entries,
                           const std::optional<defences::IdentityToken>& token);
    SendResult rmr_send(Message msg);
    // Direct addressing (spoofed-endpoint forwarding); same gating as rmr_send.
    SendResult rmr_send_direct(Message msg, const XappId& dest);
    std::vector<Message> drain_inbox(const XappId& xapp);
    const RoutingTable& routing_table() const { return routes_; }

    // --- E2 ---
    SubscribeResult e2_subscribe(const XappId& caller, const CellId& node, Tick report_period);
    std::vector<E2Subscription> due_subscriptions(Tick tick) const;
    SendResult deliver_e2_report(const E2Subscription& sub, Json payload);
    bool e2_control(RicControlRequest request);  // false = denied
    ConflictOutcome conflict_resolve(Tick tick);
    std::size_t pending_control_count() const { return pending_control_.size(); }

    AdminStatus e2mgr_admin(const XappId& caller, AdminAction action, const CellId& node,
                            const std::optional<defences::IdentityToken>& token);
    bool node_online(const CellId& node) const;
    void set_on_node_state(std::function<void(const CellId&, bool)> cb) {
        on_node_state_ = std::move(cb);
    }

    // --- interception (plaintext channel only) ---
    using Mutation = std::function<Json(const Json&)>;
    bool register_interceptor(const XappId& caller, MsgType filter, Mutation mutation);
    const std::vector<TamperRecord>& tamper_log() const { return tamper_log_; }

    // --- defences ---
    void quarantine(const XappId& xapp);
    bool is_quarantined(const XappId& xapp) const;
    void raise_alert(defences::AlertEvent alert) { alerts_.push_back(std::move(alert)); }
    const std::vector<defences::AlertEvent>& alerts() const { return alerts_; }
    const DefenceConfig& defence_config() const { return defence_; }
    const PlatformConfig& config() const { return config_; }
    const defences::AccessPolicy& access_policy() const { return policy_; }
    const defences::TokenAuthority& tokens() const { return authority_; }

    const std::vector<AuditEntry>& audit() const { return audit_; }
    CostMeter& costs() { return costs_; }

    // Ground-truth view for harness scoring and tests; bypasses access
    // control and must never feed back into app or defence decisions.
    const std::map<std::pair<std::string, std::string>, SdlRecord>& raw_sdl() const { return sdl_; }

private:
    void record(const std::string& op, const XappId& caller, const std::string& resource,
                const std::string& verdict);
    void require_registered(const XappId& caller) const;
    bool gate_sdl(const XappId& caller, defences::ResourceKind kind, const std::string& ns);
    void hard_rule_check(const XappId& caller, defences::ResourceKind kind, const std::string& ns);
    void rebuild_policy();

    PlatformConfig config_;
    DefenceConfig defence_;
    defences::TokenAuthority authority_;
    defences::AccessPolicy policy_;
    defences::ZoneGraph zones_;

    std::map<XappId, XAppDescriptor> registry_;
    std::map<XappId, defences::IdentityToken> issued_;
    std::set<XappId> quarantined_;
    std::uint64_t nonce_counter_ = 1;

    std::map<std::pair<std::string, std::string>, SdlRecord> sdl_;
    RoutingTable routes_;
    std::map<XappId, std::deque<Message>> inboxes_;

    std::map<CellId, bool> nodes_;
    std::function<void(const CellId&, bool)> on_node_state_;
    std::map<std::pair<XappId, CellId>, E2Subscription> subscriptions_;
    long next_sub_id_ = 1;
    int window_used_ = 0;  // e2 subscription requests admitted this tick

    std::deque<RicControlRequest> pending_control_;
    std::set<long> seen_request_ids_;

    struct Interceptor {
        XappId owner;
        MsgType filter;
        Mutation mutation;
    };
    std::vector<Interceptor> interceptors_;
    std::vector<TamperRecord> tamper_log_;

    std::vector<AuditEntry> audit_;
    std::vector<defences::AlertEvent> alerts_;
    std::set<std::pair<XappId, std::string>> fired_hard_rules_;
    CostMeter costs_;
    Tick now_ = 0;
};

}  // namespace ricsim::platform

#endif
