// End-to-end acceptance checks over the bundled scenario catalogue.
// Each criterion prints exactly one PASS/FAIL line so the run log doubles
// as a scorecard.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "ricsim/runner.hpp"
#include "ricsim/scenario.hpp"

using namespace ricsim;
using namespace ricsim::harness;

namespace {

Scenario load(const std::string& name) {
    return load_scenario(std::string(RICSIM_SCENARIO_DIR) + "/" + name + ".json");
}

// runs are deterministic, so cache scenario results across criteria
const RunResult& cached_run(const std::string& name) {
    static std::map<std::string, RunResult> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, run(load(name))).first;
    return it->second;
}

const attacks::AttackOutcome& outcome(const RunResult& r, std::size_t idx = 0) {
    REQUIRE(r.report.attacks.size() > idx);
    return r.report.attacks[idx];
}

struct Criterion {
    int number;
    std::string label;
    bool ok = true;

    Criterion(int n, std::string text) : number(n), label(std::move(text)) {}

    void expect(bool condition, const std::string& what) {
        if (!condition) ok = false;
        INFO("criterion ", number, ": ", what);
        CHECK(condition);
    }

    ~Criterion() {
        std::printf("[criterion %2d] %-58s %s\n", number, label.c_str(), ok ? "PASS" : "FAIL");
        std::fflush(stdout);
    }
};

double metric(const attacks::AttackOutcome& o, const std::string& key) {
    auto it = o.metrics.find(key);
    // NaN compares false against every bound, failing the criterion cleanly
    return it == o.metrics.end() ? std::nan("") : it->second;
}

}  // namespace

TEST_CASE("1: traffic steering lifts throughput without breaking policy") {
    Criterion c(1, "steering beats no-steering on >= 9/10 seeds");
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Scenario on = load("baseline-2cell");
        Scenario off = on;
        off.app_params.ts_enabled = false;
        RunResult with_ts = run(on, seed);
        RunResult without = run(off, seed);
        if (with_ts.report.network.mean_ue_throughput_mbps >
            without.report.network.mean_ue_throughput_mbps)
            ++wins;
        c.expect(with_ts.report.network.forbidden_handover_count == 0,
                 "steered run respects FORBID policies");
        c.expect(with_ts.report.network.handover_count > 0, "steering actually moves UEs");
    }
    c.expect(wins >= 9, "win count " + std::to_string(wins) + "/10");
}

TEST_CASE("2: flooding starves subscriptions until quarantine restores them") {
    const RunResult& open = cached_run("rmr-flood");
    Criterion c(2, "rmr flood: total denial, then clean recovery");
    c.expect(metric(outcome(open), "denial_rate") == 1.0,
             "undefended flood denies every renewal in the window");
    c.expect(!outcome(open).blocked, "no defences, nothing blocks it");
    c.expect(open.report.defence.quarantine_count == 0, "no auto-quarantine undefended");

    const RunResult& def = cached_run("rmr-flood-defended");
    c.expect(outcome(def).detected, "behavioural profiling flags the flooder");
    c.expect(def.report.defence.quarantine_count == 1, "exactly one quarantine");
    c.expect(metric(outcome(def), "quarantine_delay_ticks") <= 10.0,
             "quarantined within 10 ticks of attack start");
    c.expect(metric(outcome(def), "post_quarantine_denial_rate") == 0.0,
             "no denials after quarantine");
    c.expect(metric(outcome(def), "denial_rate") < 0.1, "overall denial stays low when defended");
}

TEST_CASE("3: route hijack blackholes predictions unless routes are authenticated") {
    const RunResult& open = cached_run("route-hijack");
    Criterion c(3, "route hijack: full redirect vs zero-trust block");
    c.expect(metric(outcome(open), "redirect_fraction") == 1.0,
             "every prediction vanishes during the hijack");
    c.expect(!outcome(open).blocked, "plaintext routing accepts the forged update");

    const RunResult& def = cached_run("route-hijack-defended");
    c.expect(outcome(def).blocked, "zero trust refuses the forged update");
    c.expect(metric(outcome(def), "redirect_fraction") == 0.0, "no predictions lost");
    long forged_alerts = 0;
    for (const auto& a : def.alerts)
        if (a.rule == "forged-route-update") ++forged_alerts;
    c.expect(forged_alerts == 1, "the forged update raises exactly one alert");
    c.expect(outcome(def).detected, "and it attributes the attacker");
}

TEST_CASE("4: plaintext E2 admin lets anyone take a cell down") {
    const RunResult& open = cached_run("e2mgr-exploit");
    Criterion c(4, "e2 manager exploit: outage vs secured admin channel");
    c.expect(!outcome(open).blocked, "shutdown accepted on the plaintext channel");
    c.expect(metric(outcome(open), "outage_ticks") > 0.0, "the node goes dark");
    c.expect(metric(outcome(open), "outage_ue_writes") == 0.0,
             "no UE metrics flow from the dead cell");

    const RunResult& def = cached_run("e2mgr-exploit-defended");
    c.expect(outcome(def).blocked, "secure channel denies the non-admin shutdown");
    c.expect(metric(outcome(def), "outage_ticks") == 0.0, "node never goes offline");
    bool attacker_applied = false;
    for (const AuditEntry& e : def.audit)
        if (e.caller == outcome(def).attacker && e.op == "e2mgr_admin" &&
            e.verdict.rfind("allow", 0) == 0)
            attacker_applied = true;
    c.expect(!attacker_applied, "audit shows zero successful admin calls by the attacker");
}

TEST_CASE("5: conflict-queue exhaustion inflates control latency") {
    const RunResult& open = cached_run("conflict-exhaust");
    Criterion c(5, "conflict exhaust: latency blowup vs quarantine recovery");
    c.expect(metric(outcome(open), "latency_factor") >= 3.0,
             "median control latency at least triples under attack");

    const RunResult& def = cached_run("conflict-exhaust-defended");
    c.expect(def.report.defence.quarantine_count == 1, "attacker quarantined");
    c.expect(metric(outcome(def), "post_quarantine_latency_factor") <= 1.5,
             "latency returns to near baseline after quarantine");
    c.expect(outcome(def).detected, "profiling attributes the burst");
}

TEST_CASE("6: membership leaks through the open SDL; poison shifts the target") {
    const RunResult& leak = cached_run("mia-leak");
    Criterion c(6, "membership/poisoning inference across SDL postures");
    c.expect(metric(outcome(leak), "auc") == 1.0,
             "retained training rows separate members perfectly");

    const RunResult& no_retain = cached_run("mia-leak-retention-off");
    c.expect(metric(outcome(no_retain), "auc") <= 0.6,
             "without retention the inference collapses to chance");

    const RunResult& leak_def = cached_run("mia-leak-defended");
    c.expect(outcome(leak_def).blocked, "least privilege blocks the TrainSet scan");

    const RunResult& poison = cached_run("mia-poison");
    const double shift = metric(outcome(poison), "shift");
    const double control = metric(outcome(poison), "control_shift");
    c.expect(shift > 10.0 * control,
             "target prediction moves an order of magnitude more than the control UE");

    const RunResult& poison_def = cached_run("mia-poison-defended");
    c.expect(outcome(poison_def).blocked, "least privilege blocks the metric writes");
}

TEST_CASE("7: the model can be stolen through predictions alone") {
    const RunResult& scrape = cached_run("mea-scrape");
    Criterion c(7, "model extraction: surrogate matches the deployed model");
    c.expect(metric(outcome(scrape), "weight_max_abs_diff") <= 1e-6,
             "scraped surrogate recovers weights and bias");
    c.expect(metric(outcome(scrape), "fidelity") == 1.0,
             "surrogate agrees with the victim on every training row");
    c.expect(!outcome(scrape).blocked, "open SDL permits the scrape");

    const RunResult& probe = cached_run("mea-poison");
    c.expect(metric(outcome(probe), "weight_max_abs_diff") <= 1e-6,
             "active probing recovers the weights by finite differences");

    c.expect(outcome(cached_run("mea-scrape-defended")).blocked,
             "least privilege blocks the prediction scrape");
    c.expect(outcome(cached_run("mea-poison-defended")).blocked,
             "least privilege blocks the probe writes");
}

TEST_CASE("8: training-data integrity attacks corrupt the pipeline") {
    const RunResult& poison = cached_run("data-poison");
    Criterion c(8, "data poisoning and in-flight tampering corrupt decisions");
    c.expect(metric(outcome(poison), "weight_shift") >= 10.0,
             "label shifting moves the model far from the clean fit");
    c.expect(!outcome(poison).blocked, "open TrainSet namespace accepts the writes");

    const RunResult& tamper = cached_run("tamper");
    c.expect(metric(outcome(tamper), "decision_divergence") > 0.0,
             "zeroed predictions change steering decisions");

    c.expect(outcome(cached_run("data-poison-defended")).blocked,
             "least privilege rejects foreign TrainSet writes");
    c.expect(outcome(cached_run("tamper-defended")).blocked,
             "a secure channel refuses the interceptor");
}

TEST_CASE("9: detection quality holds across seeds") {
    Criterion c(9, "mixed-attack detection: precision/recall over 10 seeds");
    const Scenario mix = load("detection-mix");
    double min_precision = 1.0, min_recall = 1.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RunResult r = run(mix, seed);
        min_precision = std::min(min_precision, r.report.defence.precision);
        min_recall = std::min(min_recall, r.report.defence.recall);
        c.expect(r.report.attacks.size() == 3, "all three attackers score an outcome");
    }
    c.expect(min_precision >= 0.9, "precision >= 0.9 on every seed");
    c.expect(min_recall >= 0.8, "recall >= 0.8 on every seed");
}

TEST_CASE("10: determinism, independent refit, and overhead budget") {
    Criterion c(10, "byte-stable reports, oracle refit, overhead < 10%");

    const Scenario base = load("baseline-2cell");
    c.expect(run(base).report_bytes == run(base).report_bytes, "reruns are byte-identical");

    // deployed models must match an independent ridge solve of the exact
    // training snapshot, including under poisoned data. Live feature
    // matrices are numerically rank deficient (the neighbour pad column is
    // collinear with the bias), so the comparison is on fitted values,
    // where the solution is identified; weight-level agreement is pinned
    // separately on well-conditioned fixtures.
    for (const char* name : {"baseline-2cell", "data-poison", "mia-poison"}) {
        const RunResult& r = cached_run(name);
        REQUIRE(!r.model_history.empty());
        const linreg::LinearModel& deployed = r.model_history.back();
        const auto& rows = r.trainset_rows;
        const auto& labels = r.trainset_labels;
        REQUIRE(!rows.empty());

        const int n = static_cast<int>(rows.size());
        const int d = static_cast<int>(rows.front().size());
        Eigen::MatrixXd x(n, d + 1);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) x(i, j) = rows[i][j];
            x(i, d) = 1.0;
            y(i) = labels[i];
        }
        Eigen::MatrixXd a = x.transpose() * x;
        for (int j = 0; j < d; ++j) a(j, j) += deployed.lambda;
        Eigen::VectorXd w = a.fullPivLu().solve(x.transpose() * y);

        double max_diff = 0.0;
        for (int i = 0; i < n; ++i) {
            double refit = w(d);
            for (int j = 0; j < d; ++j) refit += x(i, j) * w(j);
            max_diff = std::max(max_diff, std::fabs(refit - deployed.predict_raw(rows[i])));
        }
        c.expect(max_diff <= 1e-5, std::string(name) + ": refit predictions agree within 1e-5");
    }

    const RunResult& defended = cached_run("baseline-2cell-defended");
    c.expect(defended.report.overhead.defence_fraction < 0.10,
             "full defence stack costs under 10% of platform work");
    c.expect(defended.report.overhead.tick_ms == 10.0, "near-RT tick is 10 ms");
    c.expect(defended.report.defence.alert_count == 0, "no false alerts on benign traffic");
}
