#include "ricsim/defences.hpp"

#include <cmath>
#include <stdexcept>

namespace ricsim::defences {

bool policy_check(const AccessPolicy& policy, const XappId& caller, ResourceKind kind,
                  const std::string& resource) {
    if (policy.mode == AccessMode::AllowAll) return true;
    auto it = policy.grants.find(caller);
    if (it == policy.grants.end()) return false;
    return it->second.count({kind, resource}) > 0;
}

AccessPolicy compile_least_privilege(const std::vector<XAppDescriptor>& descriptors) {
    AccessPolicy policy;
    policy.mode = AccessMode::LeastPrivilege;
    for (const XAppDescriptor& d : descriptors) {
        auto& g = policy.grants[d.xapp_id];
        for (const auto& ns : d.read_namespaces) g.insert({ResourceKind::SdlRead, ns});
        for (const auto& ns : d.write_namespaces) g.insert({ResourceKind::SdlWrite, ns});
        for (MsgType t : d.send_msg_types) g.insert({ResourceKind::MsgSend, to_string(t)});
        for (MsgType t : d.recv_msg_types) g.insert({ResourceKind::MsgReceive, to_string(t)});
        if (d.e2_subscribe) g.insert({ResourceKind::E2Subscribe, ""});
        if (d.e2_control) g.insert({ResourceKind::E2Control, ""});
        if (d.route_update) g.insert({ResourceKind::RouteUpdate, ""});
    }
    return policy;
}

std::uint64_t TokenAuthority::mac_over(const XappId& xapp_id, std::uint64_t nonce) const {
    std::string buf = xapp_id;
    buf.push_back('\0');
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((nonce >> (8 * i)) & 0xff));
    return fnv1a64(buf, key_);
}

IdentityToken TokenAuthority::issue(const XappId& xapp_id, std::uint64_t nonce) const {
    return {xapp_id, nonce, mac_over(xapp_id, nonce)};
}

bool TokenAuthority::verify(const IdentityToken& token, const XappId& claimed_sender) const {
    return claimed_sender == token.xapp_id && token.mac == mac_over(token.xapp_id, token.nonce);
}

bool segment_check(const ZoneGraph& zones, const XappId& src, const XappId& dst) {
    auto s = zones.membership.find(src);
    auto d = zones.membership.find(dst);
    if (s == zones.membership.end() || d == zones.membership.end()) return false;
    if (s->second == d->second) return true;
    return zones.edges.count({s->second, d->second}) > 0;
}

std::string profile_key(const AuditEntry& entry) {
    if (entry.op == "sdl_read" || entry.op == "sdl_scan") return "read:" + entry.resource;
    if (entry.op == "sdl_write") return "write:" + entry.resource;
    if (entry.op == "rmr_send") return "send:" + entry.resource;
    if (entry.op == "e2_subscribe" || entry.op == "e2_control") return "e2";
    return "";
}

std::map<XappId, BehaviourProfile> profile_build(const std::vector<AuditEntry>& trace,
                                                 Tick window_ticks) {
    if (trace.empty()) throw std::invalid_argument("profile_build: empty trace");
    if (window_ticks < 1) throw std::invalid_argument("profile_build: window must be >= 1 tick");

    // per xapp, per feature, per tick counts
    std::map<XappId, std::map<std::string, std::map<Tick, double>>> counts;
    std::map<XappId, long> reads, writes;
    std::map<XappId, std::map<std::string, long>> send_hist;
    for (const AuditEntry& e : trace) {
        const std::string key = profile_key(e);
        if (key.empty()) continue;
        counts[e.caller][key][e.tick] += 1.0;
        if (e.op == "sdl_read" || e.op == "sdl_scan") reads[e.caller]++;
        if (e.op == "sdl_write") writes[e.caller]++;
        if (e.op == "rmr_send") send_hist[e.caller][e.resource]++;
    }

    std::map<XappId, BehaviourProfile> profiles;
    for (auto& [xapp, features] : counts) {
        BehaviourProfile p;
        p.xapp_id = xapp;
        for (auto& [key, by_tick] : features) {
            double sum = 0.0;
            for (auto& [t, c] : by_tick) sum += c;
            const double mean = sum / static_cast<double>(window_ticks);
            double var = 0.0;
            // ticks with zero count contribute (0 - mean)^2
            for (auto& [t, c] : by_tick) var += (c - mean) * (c - mean) - mean * mean;
            var += static_cast<double>(window_ticks) * mean * mean;
            var /= static_cast<double>(window_ticks);
            p.rates[key] = {mean, std::sqrt(std::max(0.0, var))};
        }
        const long w = writes[xapp];
        p.read_write_ratio = w == 0 ? static_cast<double>(reads[xapp])
                                    : static_cast<double>(reads[xapp]) / static_cast<double>(w);
        p.send_histogram = send_hist[xapp];
        profiles[xapp] = p;
    }
    return profiles;
}

ScoreResult profile_score(const BehaviourProfile& profile,
                          const std::map<std::string, double>& live_rates, double threshold,
                          Tick tick) {
    ScoreResult result;
    for (const auto& [key, live] : live_rates) {
        RateStats stats;  // unseen feature: zero-mean baseline
        auto it = profile.rates.find(key);
        if (it != profile.rates.end()) stats = it->second;
        const double z = (live - stats.mean) / std::max(stats.stddev, kStddevFloor);
        if (z > result.score) {
            result.score = z;
            result.worst_feature = key;
        }
    }
    if (result.score > threshold) {
        AlertEvent alert;
        alert.tick = tick;
        alert.subject = profile.xapp_id;
        alert.rule = "rate:" + result.worst_feature;
        alert.score = result.score;
        result.alert = alert;
    }
    return result;
}

int risk_points(const XAppDescriptor& d) {
    return static_cast<int>(d.write_namespaces.size()) + (d.e2_control ? 2 : 0) +
           (d.route_update ? 1 : 0);
}

RiskLevel risk_score_manifest(const XAppDescriptor& d) {
    const int points = risk_points(d);
    if (points <= 1) return RiskLevel::Low;
    if (points <= 3) return RiskLevel::Medium;
    return RiskLevel::High;
}

const char* to_string(RiskLevel level) {
    switch (level) {
        case RiskLevel::Low: return "LOW";
        case RiskLevel::Medium: return "MEDIUM";
        case RiskLevel::High: return "HIGH";
    }
    return "?";
}

}  // namespace ricsim::defences
