#ifndef RICSIM_ATTACKS_HPP
#define RICSIM_ATTACKS_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ricsim/apps.hpp"
#include "ricsim/platform.hpp"
#include "ricsim/scenario.hpp"
#include "ricsim/types.hpp"

namespace ricsim::attacks {

struct AttackOutcome {
    std::string kind;
    XappId attacker;
    bool blocked = false;
    bool detected = false;                  // set by the harness from alerts
    std::map<std::string, double> metrics;  // attack- and harness-populated
    platform::Json detail = platform::Json::object();
};

struct AttackContext {
    platform::Platform& plat;
    Tick tick;
    Rng& rng;
    apps::RequestIdSource& request_ids;
    const std::vector<UeId>& ues;
    const std::vector<CellId>& cells;
};

// A malicious xApp. step() runs before the pipeline apps each tick;
// finish() runs once after the last tick. Outcome metrics that need
// ground truth (AUC, fidelity, latency factors) are filled in by the
// harness, never by the attacker itself.
class Attack {
public:
    Attack(harness::AttackSpec spec, XappId id) : spec_(std::move(spec)), id_(std::move(id)) {
        outcome_.kind = spec_.kind;
        outcome_.attacker = id_;
    }
    virtual ~Attack() = default;

    virtual XAppDescriptor descriptor() const;
    virtual void step(AttackContext& ctx) = 0;
    virtual void finish(AttackContext& ctx) { (void)ctx; }

    bool active(Tick t) const { return t >= spec_.start && t < spec_.stop; }
    const harness::AttackSpec& spec() const { return spec_; }
    const XappId& id() const { return id_; }
    AttackOutcome& outcome() { return outcome_; }

protected:
    harness::AttackSpec spec_;
    XappId id_;
    AttackOutcome outcome_;
};

std::unique_ptr<Attack> make_attack(const harness::AttackSpec& spec, int index);

// Similarity used by the leakage attack: 1 on exact feature match,
// otherwise normalized inverse Euclidean distance.
double feature_similarity(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ricsim::attacks

#endif
