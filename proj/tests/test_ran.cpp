#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ricsim/ran.hpp"

using namespace ricsim;
using namespace ricsim::ran;

namespace {

Cell make_cell(const std::string& id, double x, double y, double tx = 46.0, double bw = 10.0,
               int max_ues = 32) {
    Cell c;
    c.cell_id = id;
    c.position = {x, y};
    c.tx_power_dbm = tx;
    c.bandwidth_mhz = bw;
    c.max_ues = max_ues;
    return c;
}

Ue make_ue(const std::string& id, double x, double y, const std::string& serving,
           double demand = 50.0, double speed = 0.0) {
    Ue u;
    u.ue_id = id;
    u.position = {x, y};
    u.waypoint = {x, y};
    u.serving_cell = serving;
    u.traffic_demand_mbps = demand;
    u.speed_m_per_tick = speed;
    return u;
}

}  // namespace

TEST_CASE("path loss and received power") {
    CHECK(path_loss_db(1000.0) == doctest::Approx(128.1).epsilon(1e-12));
    CHECK(path_loss_db(100.0) == doctest::Approx(128.1 - 37.6).epsilon(1e-12));

    const Cell c = make_cell("c", 0, 0);
    CHECK(received_power_dbm(c, {1000.0, 0.0}) == doctest::Approx(-82.1).epsilon(1e-12));
}

TEST_CASE("single-cell SINR is signal over noise") {
    const Cell c = make_cell("c", 0, 0);
    const Ue u = make_ue("u", 1000.0, 0.0, "c");
    // -82.1 dBm against the -104 dBm floor
    CHECK(compute_sinr(u, c, {c}) == doctest::Approx(21.9).epsilon(1e-12));
}

TEST_CASE("three-cell SINR, frozen oracle") {
    // serving A, interferers B and C; value computed independently from
    // the linear-domain sum of received powers plus the noise floor
    const Cell a = make_cell("a", 0, 0, 46.0);
    const Cell b = make_cell("b", 1000, 0, 46.0);
    const Cell c = make_cell("c", 500, 500, 43.0);
    const Ue u = make_ue("u", 300.0, 400.0, "a");

    CHECK(received_power_dbm(a, u.position) == doctest::Approx(-70.7812721630343).epsilon(1e-12));
    CHECK(compute_sinr(u, a, {a, b, c}) == doctest::Approx(-10.21003330558651).epsilon(1e-12));
}

TEST_CASE("SINR edge cases") {
    Cell a = make_cell("a", 0, 0);
    Cell b = make_cell("b", 1000, 0);
    const Ue at_site = make_ue("u", 0.0, 0.0, "a");
    CHECK_THROWS_AS(compute_sinr(at_site, a, {a, b}), std::invalid_argument);

    const Ue u = make_ue("u", 300.0, 0.0, "a");
    a.online = false;
    CHECK_THROWS_AS(compute_sinr(u, a, {a, b}), std::invalid_argument);
    a.online = true;

    // an offline interferer stops interfering
    const double with_b = compute_sinr(u, a, {a, b});
    b.online = false;
    CHECK(compute_sinr(u, a, {a, b}) > with_b);
}

TEST_CASE("Shannon throughput share") {
    const Cell c = make_cell("c", 0, 0, 46.0, 10.0);
    CHECK(compute_throughput(21.9, c, 1, 1000.0) == doctest::Approx(72.8430740738919).epsilon(1e-12));
    // four UEs share the 10 MHz: 2.5 * log2(1 + 10)
    CHECK(compute_throughput(10.0, c, 4, 1000.0) == doctest::Approx(8.648579046593243).epsilon(1e-12));
    CHECK(compute_throughput(21.9, c, 1, 5.0) == 5.0);  // demand clamp
    CHECK(compute_throughput(-200.0, c, 1, 1000.0) >= 0.0);
    CHECK_THROWS_AS(compute_throughput(10.0, c, 0, 1000.0), std::invalid_argument);
}

TEST_CASE("world step: metrics, neighbour list, loads") {
    std::vector<Cell> cells = {make_cell("a", 0, 0), make_cell("b", 1000, 0),
                               make_cell("c", 0, 1000), make_cell("d", 1000, 1000, 46.0, 10.0, 4)};
    std::vector<Ue> ues = {make_ue("u0", 200, 200, "a"), make_ue("u1", 250, 200, "a"),
                           make_ue("u2", 900, 900, "d")};
    World w(cells, ues, {0, 0}, {1000, 1000});
    Rng rng(1);
    TickOutput out = w.step(5, rng);

    REQUIRE(out.ue_metrics.size() == 3);
    const UeMetrics& m0 = out.ue_metrics[0];
    CHECK(m0.tick == 5);
    CHECK(m0.serving_cell == "a");
    // exactly three neighbours, rsrp descending
    REQUIRE(m0.neighbours.size() == 3);
    CHECK(m0.neighbours[0].rsrp_dbm >= m0.neighbours[1].rsrp_dbm);
    CHECK(m0.neighbours[1].rsrp_dbm >= m0.neighbours[2].rsrp_dbm);
    // two UEs share cell a
    CHECK(m0.prb_usage_pct == doctest::Approx(50.0));

    REQUIRE(out.cell_metrics.size() == 4);
    for (const CellMetrics& cm : out.cell_metrics) {
        if (cm.cell_id == "a") {
            CHECK(cm.connected_ue_count == 2);
            CHECK(cm.load_pct == doctest::Approx(100.0 * 2 / 32));
        }
        if (cm.cell_id == "d") {
            CHECK(cm.connected_ue_count == 1);
            CHECK(cm.load_pct == doctest::Approx(25.0));  // max_ues = 4
        }
    }
}

TEST_CASE("offline serving cell emits nothing") {
    std::vector<Cell> cells = {make_cell("a", 0, 0), make_cell("b", 1000, 0)};
    std::vector<Ue> ues = {make_ue("u0", 200, 200, "a"), make_ue("u1", 900, 100, "b")};
    World w(cells, ues, {0, 0}, {1000, 1000});
    w.set_cell_online("b", false);
    Rng rng(1);
    TickOutput out = w.step(0, rng);

    REQUIRE(out.ue_metrics.size() == 1);
    CHECK(out.ue_metrics[0].ue_id == "u0");
    REQUIRE(out.cell_metrics.size() == 1);
    CHECK(out.cell_metrics[0].cell_id == "a");
    // and the offline cell disappears from neighbour lists
    CHECK(out.ue_metrics[0].neighbours.empty());
}

TEST_CASE("handover outcomes") {
    std::vector<Cell> cells = {make_cell("a", 0, 0), make_cell("b", 1000, 0, 46.0, 10.0, 1),
                               make_cell("c", 0, 1000)};
    std::vector<Ue> ues = {make_ue("u0", 200, 200, "a"), make_ue("u1", 900, 100, "b")};
    World w(cells, ues, {0, 0}, {1000, 1000});

    CHECK(w.execute_handover("u0", "a", 1).status == HandoverStatus::NoOp);
    CHECK(w.execute_handover("u0", "b", 1).status == HandoverStatus::RejectedCapacity);
    CHECK(w.ue("u0").serving_cell == "a");

    HandoverResult r = w.execute_handover("u0", "c", 2);
    CHECK(r.status == HandoverStatus::Applied);
    CHECK(r.from_cell == "a");
    CHECK(w.ue("u0").serving_cell == "c");

    CHECK_THROWS_AS(w.execute_handover("nope", "a", 3), std::out_of_range);
    CHECK_THROWS_AS(w.execute_handover("u0", "nope", 3), std::out_of_range);
    w.set_cell_online("b", false);
    CHECK_THROWS_AS(w.execute_handover("u0", "b", 3), std::invalid_argument);
}

TEST_CASE("mobility is deterministic and stays in the area") {
    auto build = [] {
        std::vector<Cell> cells = {make_cell("a", 500, 500)};
        std::vector<Ue> ues = {make_ue("u0", 100, 100, "a", 50.0, 25.0),
                               make_ue("u1", 900, 900, "a", 50.0, 25.0)};
        return World(cells, ues, {0, 0}, {1000, 1000});
    };
    World w1 = build();
    World w2 = build();
    Rng r1(99), r2(99);
    for (Tick t = 0; t < 60; ++t) {
        w1.step(t, r1);
        w2.step(t, r2);
    }
    for (std::size_t i = 0; i < w1.ues().size(); ++i) {
        CHECK(w1.ues()[i].position.x == w2.ues()[i].position.x);
        CHECK(w1.ues()[i].position.y == w2.ues()[i].position.y);
        CHECK(w1.ues()[i].position.x >= 0.0);
        CHECK(w1.ues()[i].position.x <= 1000.0);
        CHECK(w1.ues()[i].position.y >= 0.0);
        CHECK(w1.ues()[i].position.y <= 1000.0);
    }
    // they did actually move
    CHECK(w1.ues()[0].position.x != 100.0);
}
