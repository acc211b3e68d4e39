#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ricsim/attacks.hpp"

using namespace ricsim;
using namespace ricsim::attacks;
using ricsim::harness::AttackSpec;

namespace {

AttackSpec spec_of(const std::string& kind, Tick start = 10, Tick stop = 20) {
    AttackSpec s;
    s.kind = kind;
    s.start = start;
    s.stop = stop;
    return s;
}

}  // namespace

TEST_CASE("feature similarity") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    CHECK(feature_similarity(a, a) == 1.0);
    // distance 5 -> 1 / (1 + 5)
    CHECK(feature_similarity({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(1.0 / 6.0));
    // monotone in distance
    CHECK(feature_similarity(a, {1.0, 2.0, 3.5}) > feature_similarity(a, {1.0, 2.0, 4.0}));
    CHECK(feature_similarity(a, {1.0, 2.0, 3.5}) < 1.0);
}

TEST_CASE("factory covers the catalogue and derives attacker ids") {
    const std::pair<const char*, const char*> kinds[] = {
        {"MIA_LEAK", "mal-mia-leak-0"},
        {"MIA_POISON", "mal-mia-poison-1"},
        {"MEA_SCRAPE", "mal-mea-scrape-2"},
        {"MEA_POISON", "mal-mea-poison-3"},
        {"DATA_POISON", "mal-data-poison-4"},
        {"TAMPER", "mal-tamper-5"},
        {"RMR_FLOOD", "mal-rmr-flood-6"},
        {"ROUTE_HIJACK", "mal-route-hijack-7"},
        {"E2MGR_EXPLOIT", "mal-e2mgr-exploit-8"},
        {"CONFLICT_EXHAUST", "mal-conflict-exhaust-9"},
    };
    int index = 0;
    for (const auto& [kind, want_id] : kinds) {
        auto attack = make_attack(spec_of(kind), index++);
        REQUIRE(attack != nullptr);
        CHECK(attack->id() == want_id);
        CHECK(attack->outcome().kind == kind);
        CHECK(attack->outcome().attacker == want_id);
        CHECK(attack->descriptor().xapp_id == want_id);
    }
    CHECK_THROWS(make_attack(spec_of("NOT_A_KIND"), 0));
}

TEST_CASE("activity window is half-open") {
    auto attack = make_attack(spec_of("RMR_FLOOD", 10, 20), 0);
    CHECK_FALSE(attack->active(9));
    CHECK(attack->active(10));
    CHECK(attack->active(19));
    CHECK_FALSE(attack->active(20));
}

TEST_CASE("descriptors understate intent") {
    // every attacker registers with a low-risk manifest: the point of the
    // manifest-risk defence is that declarations, not behaviour, are scored
    for (const char* kind : {"MIA_LEAK", "MEA_SCRAPE", "DATA_POISON", "RMR_FLOOD"}) {
        auto attack = make_attack(spec_of(kind), 0);
        const XAppDescriptor d = attack->descriptor();
        CHECK(d.zone == "attacker");
        CHECK_FALSE(d.route_update);
    }
    // the conflict attacker must declare e2_control to get requests in at all
    CHECK(make_attack(spec_of("CONFLICT_EXHAUST"), 0)->descriptor().e2_control);
}
