#include "ricsim/platform.hpp"

#include <algorithm>

namespace ricsim {

const char* to_string(MsgType t) {
    switch (t) {
        case MsgType::QoePrediction: return "QOE_PREDICTION";
        case MsgType::AnomalyAlert: return "ANOMALY_ALERT";
        case MsgType::TsControl: return "TS_CONTROL";
        case MsgType::A1Policy: return "A1_POLICY";
        case MsgType::E2Report: return "E2_REPORT";
        case MsgType::RouteUpdate: return "ROUTE_UPDATE";
        case MsgType::E2SubReq: return "E2_SUB_REQ";
    }
    return "?";
}

}  // namespace ricsim

namespace ricsim::platform {

namespace {

std::uint64_t payload_hash(const Json& payload) { return fnv1a64(payload.dump()); }

bool declares(const std::vector<std::string>& list, const std::string& ns) {
    return std::find(list.begin(), list.end(), ns) != list.end();
}

}  // namespace

Platform::Platform(PlatformConfig config, DefenceConfig defence, std::uint64_t run_key,
                   std::vector<CellId> nodes)
    : config_(config), defence_(defence), authority_(run_key) {
    for (const CellId& n : nodes) nodes_[n] = true;

    XAppDescriptor admin;
    admin.xapp_id = kAdminId;
    admin.route_update = true;
    admin.e2_control = true;
    admin.zone = "platform";
    register_xapp(admin);
}

void Platform::record(const std::string& op, const XappId& caller, const std::string& resource,
                      const std::string& verdict) {
    audit_.push_back({now_, caller, op, resource, verdict});
}

void Platform::require_registered(const XappId& caller) const {
    if (!registry_.count(caller)) throw std::out_of_range("unregistered xapp: " + caller);
}

void Platform::rebuild_policy() {
    if (defence_.access_mode == defences::AccessMode::LeastPrivilege) {
        policy_ = defences::compile_least_privilege(descriptors());
    } else {
        policy_ = defences::AccessPolicy{};
    }
}

std::pair<XappId, defences::IdentityToken> Platform::register_xapp(const XAppDescriptor& d) {
    costs_.op(kCostPlatformOp);
    if (registry_.count(d.xapp_id)) throw std::invalid_argument("duplicate xapp id: " + d.xapp_id);
    registry_[d.xapp_id] = d;
    issued_[d.xapp_id] = authority_.issue(d.xapp_id, nonce_counter_++);
    if (!zones_.membership.count(d.xapp_id)) zones_.membership[d.xapp_id] = d.zone;
    rebuild_policy();
    record("register", d.xapp_id, "", "allow");
    return {d.xapp_id, issued_[d.xapp_id]};
}

const defences::IdentityToken& Platform::token_of(const XappId& xapp) const {
    require_registered(xapp);
    return issued_.at(xapp);
}

const XAppDescriptor& Platform::descriptor_of(const XappId& xapp) const {
    require_registered(xapp);
    return registry_.at(xapp);
}

bool Platform::is_registered(const XappId& xapp) const { return registry_.count(xapp) > 0; }

std::vector<XAppDescriptor> Platform::descriptors() const {
    std::vector<XAppDescriptor> out;
    for (const auto& [id, d] : registry_) out.push_back(d);
    return out;
}

void Platform::begin_tick(Tick tick) {
    now_ = tick;
    window_used_ = 0;
}

void Platform::hard_rule_check(const XappId& caller, defences::ResourceKind kind,
                               const std::string& ns) {
    if (!defence_.detection) return;
    costs_.defence(kCostDefenceCheck);
    const XAppDescriptor& d = registry_.at(caller);
    const bool declared = kind == defences::ResourceKind::SdlWrite ? declares(d.write_namespaces, ns)
                                                                   : declares(d.read_namespaces, ns);
    if (declared) return;
    const std::string rule = "undeclared-namespace:" + ns;
    if (!fired_hard_rules_.insert({caller, rule}).second) return;
    defences::AlertEvent alert;
    alert.tick = now_;
    alert.subject = caller;
    alert.rule = rule;
    alert.score = 0.0;
    alerts_.push_back(alert);
}

bool Platform::gate_sdl(const XappId& caller, defences::ResourceKind kind, const std::string& ns) {
    if (quarantined_.count(caller)) return false;
    hard_rule_check(caller, kind, ns);
    if (defence_.access_mode == defences::AccessMode::LeastPrivilege) {
        costs_.defence(kCostDefenceCheck);
        return defences::policy_check(policy_, caller, kind, ns);
    }
    return true;
}

SdlReadResult Platform::sdl_read(const XappId& caller, const std::string& ns,
                                 const std::string& key) {
    costs_.op(kCostPlatformOp);
    require_registered(caller);
    if (!gate_sdl(caller, defences::ResourceKind::SdlRead, ns)) {
        record("sdl_read", caller, ns, "deny");
        return {true, std::nullopt};
    }
    record("sdl_read", caller, ns, "allow");
    auto it = sdl_.find({ns, key});
    if (it == sdl_.end()) return {false, std::nullopt};
    return {false, it->second};
}

SdlWriteResult Platform::sdl_write(const XappId& caller, const std::string& ns,
                                   const std::string& key, Json value) {
    costs_.op(kCostPlatformOp);
    require_registered(caller);
    if (!gate_sdl(caller, defences::ResourceKind::SdlWrite, ns)) {
        record("sdl_write", caller, ns, "deny");
        return {true, 0};
    }
    record("sdl_write", caller, ns, "allow");
    SdlRecord& rec = sdl_[{ns, key}];
    rec.ns = ns;
    rec.key = key;
    rec.value = std::move(value);
    rec.writer = caller;
    rec.version += 1;
    rec.tick = now_;
    return {false, rec.version};
}

SdlScanResult Platform::sdl_scan(const XappId& caller, const std::string& ns,
                                 const std::string& key_prefix) {
    costs_.op(kCostPlatformOp);
    require_registered(caller);
    if (!gate_sdl(caller, defences::ResourceKind::SdlRead, ns)) {
        record("sdl_scan", caller, ns, "deny");
        return {true, {}};
    }
    record("sdl_scan", caller, ns, "allow");
    SdlScanResult result;
    // map ordering gives key order within the namespace
    for (auto it = sdl_.lower_bound({ns, key_prefix}); it != sdl_.end(); ++it) {
        if (it->first.first != ns) break;
        if (it->first.second.compare(0, key_prefix.size(), key_prefix) != 0) break;
        result.records.push_back(it->second);
    }
    return result;
}

bool Platform::rmr_update_routes(const XappId& sender, const std::map<MsgType, XappId>& new_entries,
                                 const std::optional<defences::IdentityToken>& token) {
    costs_.op(kCostPlatformOp);
    require_registered(sender);
    if (quarantined_.count(sender)) {
        record("route_update", sender, "", "deny");
        return false;
    }
    const bool forged = sender != kAdminId;
    if (defence_.zero_trust) {
        costs_.defence(kCostDefenceCheck);
        if (forged || !token || !authority_.verify(*token, sender)) {
            record("route_update", sender, "", "deny");
            defences::AlertEvent alert;
            alert.tick = now_;
            alert.subject = sender;
            alert.rule = "forged-route-update";
            alerts_.push_back(alert);
            return false;
        }
    } else if (defence_.detection && forged) {
        costs_.defence(kCostDefenceCheck);
        defences::AlertEvent alert;
        alert.tick = now_;
        alert.subject = sender;
        alert.rule = "forged-route-update";
        alerts_.push_back(alert);
    }
    for (const auto& [type, endpoint] : new_entries) routes_.entries[type] = endpoint;
    routes_.generation += 1;
    routes_.last_updater = sender;
    record("route_update", sender, "", "allow");
    return true;
}

SendResult Platform::rmr_send(Message msg) {
    require_registered(msg.sender);
    auto it = routes_.entries.find(msg.msg_type);
    if (it == routes_.entries.end()) {
        costs_.op(kCostPlatformOp);
        record("rmr_send", msg.sender, to_string(msg.msg_type), "drop:no-route");
        return {SendStatus::DroppedNoRoute, {}};
    }
    return rmr_send_direct(std::move(msg), it->second);
}

SendResult Platform::rmr_send_direct(Message msg, const XappId& dest) {
    costs_.op(kCostPlatformOp);
    require_registered(msg.sender);
    const std::string type_name = to_string(msg.msg_type);
    if (quarantined_.count(msg.sender) || quarantined_.count(dest)) {
        record("rmr_send", msg.sender, type_name, "drop:unauthorized");
        return {SendStatus::DroppedUnauthorized, {}};
    }
    if (defence_.zero_trust) {
        costs_.defence(2 * kCostDefenceCheck);
        const bool token_ok = msg.token && authority_.verify(*msg.token, msg.sender);
        if (!token_ok || !defences::segment_check(zones_, msg.sender, dest)) {
            record("rmr_send", msg.sender, type_name, "drop:unauthorized");
            return {SendStatus::DroppedUnauthorized, {}};
        }
    }
    if (!config_.channel_secure) {
        for (const Interceptor& ic : interceptors_) {
            if (ic.filter != msg.msg_type) continue;
            const std::uint64_t before = payload_hash(msg.payload);
            msg.payload = ic.mutation(msg.payload);
            tamper_log_.push_back({now_, msg.msg_type, before, payload_hash(msg.payload)});
        }
    }
    auto& inbox = inboxes_[dest];
    if (static_cast<int>(inbox.size()) >= config_.inbox_capacity) {
        record("rmr_send", msg.sender, type_name, "drop:queue-full");
        return {SendStatus::DroppedQueueFull, {}};
    }
    msg.tick = now_;
    const XappId sender = msg.sender;
    inbox.push_back(std::move(msg));
    record("rmr_send", sender, type_name, "allow");
    return {SendStatus::Delivered, dest};
}

std::vector<Message> Platform::drain_inbox(const XappId& xapp) {
    auto it = inboxes_.find(xapp);
    if (it == inboxes_.end()) return {};
    std::vector<Message> out(it->second.begin(), it->second.end());
    it->second.clear();
    return out;
}

SubscribeResult Platform::e2_subscribe(const XappId& caller, const CellId& node,
                                       Tick report_period) {
    costs_.op(kCostPlatformOp);
    require_registered(caller);
    if (!nodes_.count(node)) throw std::out_of_range("e2_subscribe: unknown node " + node);
    if (report_period < 1) throw std::invalid_argument("e2_subscribe: report_period must be >= 1");

    bool denied = quarantined_.count(caller) > 0;
    if (!denied && defence_.access_mode == defences::AccessMode::LeastPrivilege) {
        costs_.defence(kCostDefenceCheck);
        denied = !defences::policy_check(policy_, caller, defences::ResourceKind::E2Subscribe, "");
    }
    if (denied) {
        record("e2_subscribe", caller, node, "deny");
        return {SubscribeStatus::Denied, 0};
    }
    if (window_used_ >= config_.subscription_window) {
        record("e2_subscribe", caller, node, "reject:capacity");
        // a failed refresh tears the existing subscription down
        subscriptions_.erase({caller, node});
        return {SubscribeStatus::RejectedCapacity, 0};
    }
    window_used_ += 1;
    E2Subscription sub;
    sub.sub_id = next_sub_id_++;
    sub.subscriber = caller;
    sub.node = node;
    sub.report_period = report_period;
    subscriptions_[{caller, node}] = sub;
    record("e2_subscribe", caller, node, "allow");
    return {SubscribeStatus::Accepted, sub.sub_id};
}

std::vector<E2Subscription> Platform::due_subscriptions(Tick tick) const {
    std::vector<E2Subscription> due;
    for (const auto& [key, sub] : subscriptions_) {
        if (!sub.active || !nodes_.at(sub.node)) continue;
        if (tick % sub.report_period == 0) due.push_back(sub);
    }
    return due;
}

SendResult Platform::deliver_e2_report(const E2Subscription& sub, Json payload) {
    Message msg;
    msg.msg_type = MsgType::E2Report;
    msg.sender = kAdminId;  // reports originate from the platform's E2 termination
    msg.token = issued_.at(kAdminId);
    msg.payload = std::move(payload);
    return rmr_send_direct(std::move(msg), sub.subscriber);
}

bool Platform::e2_control(RicControlRequest request) {
    costs_.op(kCostPlatformOp);
    require_registered(request.issuer);
    if (!seen_request_ids_.insert(request.request_id).second)
        throw std::invalid_argument("e2_control: duplicate request id");

    bool denied = quarantined_.count(request.issuer) > 0;
    if (!denied && defence_.access_mode == defences::AccessMode::LeastPrivilege) {
        costs_.defence(kCostDefenceCheck);
        denied =
            !defences::policy_check(policy_, request.issuer, defences::ResourceKind::E2Control, "");
    }
    if (denied) {
        record("e2_control", request.issuer, request.ue_id, "deny");
        return false;
    }
    record("e2_control", request.issuer, request.ue_id, "allow");
    request.tick = now_;
    pending_control_.push_back(std::move(request));
    return true;
}

ConflictOutcome Platform::conflict_resolve(Tick tick) {
    (void)tick;
    costs_.op(kCostPlatformOp);
    ConflictOutcome outcome;
    const int take = std::min<int>(config_.conflict_budget, static_cast<int>(pending_control_.size()));
    std::vector<RicControlRequest> batch;
    for (int i = 0; i < take; ++i) {
        batch.push_back(pending_control_.front());
        pending_control_.pop_front();
    }

    std::map<UeId, std::vector<std::size_t>> by_ue;
    for (std::size_t i = 0; i < batch.size(); ++i) by_ue[batch[i].ue_id].push_back(i);

    std::set<std::size_t> rejected_idx;
    for (const auto& [ue, idxs] : by_ue) {
        std::set<CellId> targets;
        for (std::size_t i : idxs) targets.insert(batch[i].target_cell);
        if (targets.size() < 2) continue;  // no conflict
        std::size_t winner = idxs.front();
        for (std::size_t i : idxs) {
            const RicControlRequest& a = batch[i];
            const RicControlRequest& b = batch[winner];
            bool better = false;
            if (config_.conflict_policy == ConflictPolicy::Priority) {
                better = a.priority > b.priority ||
                         (a.priority == b.priority && a.request_id < b.request_id);
            } else {
                better = a.tick < b.tick || (a.tick == b.tick && a.request_id < b.request_id);
            }
            if (better) winner = i;
        }
        for (std::size_t i : idxs)
            if (i != winner && batch[i].target_cell != batch[winner].target_cell)
                rejected_idx.insert(i);
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (rejected_idx.count(i))
            outcome.rejected.push_back(batch[i]);
        else
            outcome.accepted.push_back(batch[i]);
    }
    record("conflict_resolve", "conflict-manager", "", "allow");
    return outcome;
}

AdminStatus Platform::e2mgr_admin(const XappId& caller, AdminAction action, const CellId& node,
                                  const std::optional<defences::IdentityToken>& token) {
    costs_.op(kCostPlatformOp);
    require_registered(caller);
    if (!nodes_.count(node)) throw std::out_of_range("e2mgr_admin: unknown node " + node);
    const char* action_name = action == AdminAction::Shutdown ? "shutdown" : "restart";
    bool denied = quarantined_.count(caller) > 0;
    if (!denied && config_.channel_secure) {
        costs_.defence(kCostDefenceCheck);
        denied = caller != kAdminId || !token || !authority_.verify(*token, caller);
    }
    if (denied) {
        record("e2mgr_admin", caller, node, std::string("deny:") + action_name);
        return AdminStatus::Denied;
    }
    const bool online = action == AdminAction::Restart;
    nodes_[node] = online;
    if (on_node_state_) on_node_state_(node, online);
    record("e2mgr_admin", caller, node, std::string("allow:") + action_name);
    return AdminStatus::Applied;
}

bool Platform::node_online(const CellId& node) const {
    auto it = nodes_.find(node);
    if (it == nodes_.end()) throw std::out_of_range("unknown node: " + node);
    return it->second;
}

bool Platform::register_interceptor(const XappId& caller, MsgType filter, Mutation mutation) {
    costs_.op(kCostPlatformOp);
    require_registered(caller);
    if (config_.channel_secure || quarantined_.count(caller)) {
        record("intercept", caller, to_string(filter), "deny");
        return false;
    }
    interceptors_.push_back({caller, filter, std::move(mutation)});
    record("intercept", caller, to_string(filter), "allow");
    return true;
}

void Platform::quarantine(const XappId& xapp) {
    require_registered(xapp);
    if (!quarantined_.insert(xapp).second) return;  // idempotent
    inboxes_[xapp].clear();
    std::erase_if(pending_control_,
                  [&](const RicControlRequest& r) { return r.issuer == xapp; });
    std::erase_if(interceptors_, [&](const Interceptor& ic) { return ic.owner == xapp; });
    for (auto it = subscriptions_.begin(); it != subscriptions_.end();) {
        if (it->first.first == xapp)
            it = subscriptions_.erase(it);
        else
            ++it;
    }
    defences::AlertEvent alert;
    alert.tick = now_;
    alert.subject = xapp;
    alert.rule = "quarantine";
    alert.action = defences::AlertAction::Quarantine;
    alerts_.push_back(alert);
    record("quarantine", xapp, "", "allow");
}

bool Platform::is_quarantined(const XappId& xapp) const { return quarantined_.count(xapp) > 0; }

}  // namespace ricsim::platform
