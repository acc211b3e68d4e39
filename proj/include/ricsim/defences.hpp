#ifndef RICSIM_DEFENCES_HPP
#define RICSIM_DEFENCES_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ricsim/audit.hpp"
#include "ricsim/types.hpp"
#include "ricsim/xapp.hpp"

namespace ricsim::defences {

enum class ResourceKind {
    SdlRead,
    SdlWrite,
    MsgSend,
    MsgReceive,
    E2Subscribe,
    E2Control,
    RouteUpdate,
};

enum class AccessMode { AllowAll, LeastPrivilege };

struct AccessPolicy {
    AccessMode mode = AccessMode::AllowAll;
    // grants[xapp] = set of (kind, resource id); resource id empty for E2/route capabilities
    std::map<XappId, std::set<std::pair<ResourceKind, std::string>>> grants;
};

bool policy_check(const AccessPolicy& policy, const XappId& caller, ResourceKind kind,
                  const std::string& resource);

// Grants are exactly the manifest declarations, nothing more.
AccessPolicy compile_least_privilege(const std::vector<XAppDescriptor>& descriptors);

struct IdentityToken {
    XappId xapp_id;
    std::uint64_t nonce = 0;
    std::uint64_t mac = 0;
};

// Keyed-MAC abstraction over (xapp_id, nonce); the key is per run.
class TokenAuthority {
public:
    explicit TokenAuthority(std::uint64_t run_key) : key_(run_key) {}
    IdentityToken issue(const XappId& xapp_id, std::uint64_t nonce) const;
    bool verify(const IdentityToken& token, const XappId& claimed_sender) const;

private:
    std::uint64_t mac_over(const XappId& xapp_id, std::uint64_t nonce) const;
    std::uint64_t key_;
};

struct ZoneGraph {
    std::map<XappId, std::string> membership;
    std::set<std::pair<std::string, std::string>> edges;  // directed zone -> zone
};

// Allow iff same zone or an explicit directed edge exists.
bool segment_check(const ZoneGraph& zones, const XappId& src, const XappId& dst);

struct RateStats {
    double mean = 0.0;
    double stddev = 0.0;
};

struct BehaviourProfile {
    XappId xapp_id;
    // keyed "read:<ns>", "write:<ns>", "send:<msg type>", "e2"
    std::map<std::string, RateStats> rates;
    double read_write_ratio = 0.0;
    std::map<std::string, long> send_histogram;
};

enum class AlertAction { None, Quarantine };

struct AlertEvent {
    Tick tick = 0;
    XappId subject;
    std::string rule;
    double score = 0.0;
    AlertAction action = AlertAction::None;
};

// Feature key for an audit entry, or empty when the op is not profiled.
std::string profile_key(const AuditEntry& entry);

// Per-xApp per-tick rate statistics from a benign window of the audit trace.
std::map<XappId, BehaviourProfile> profile_build(const std::vector<AuditEntry>& trace,
                                                 Tick window_ticks);

struct ScoreResult {
    double score = 0.0;
    std::string worst_feature;
    std::optional<AlertEvent> alert;
};

constexpr double kStddevFloor = 0.1;

// z-score of live rates against the profile, one-sided (excess activity).
// Hard rules (undeclared namespace access, non-admin route update) fire
// regardless of score; they are applied by the platform, not here.
ScoreResult profile_score(const BehaviourProfile& profile,
                          const std::map<std::string, double>& live_rates, double threshold,
                          Tick tick);

enum class RiskLevel { Low, Medium, High };

// writes + 2*e2_control + 1*route_update; LOW <=1, MEDIUM 2-3, HIGH >=4
RiskLevel risk_score_manifest(const XAppDescriptor& descriptor);
int risk_points(const XAppDescriptor& descriptor);

const char* to_string(RiskLevel level);

}  // namespace ricsim::defences

#endif
