/*
 * test_simulator.cpp
 *
 * This source file is part of the succor project.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include "succor/simulator.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

using namespace succor;

namespace {
std::uint64_t count_kind(const sim::SimulationResult& r, std::string_view mode, std::string_view kind) {
    return static_cast<std::uint64_t>(std::count_if(r.trace.begin(), r.trace.end(), [&](const sim::TraceEvent& e) {
        return e.mode == mode && e.kind == kind;
    }));
}
} // namespace

TEST_SUITE("simulator") {

TEST_CASE("canonical day: 1440 position reports against 8 on-request messages") {
    auto s = testing::canonical_scenario();
    auto r = sim::run_scenario(s);
    const auto ticks = oracle::enumerate_ticks(s.duration_s, s.track_interval_s);
    CHECK(ticks == 1440);
    CHECK(r.report.continuous.inbound_msg_count == ticks);
    CHECK(r.report.continuous.outbound_msg_count == 0);
    CHECK(r.report.on_request.inbound_msg_count == 2);
    CHECK(r.report.on_request.outbound_msg_count == 2 * 3);
    CHECK(r.report.incidents_notified == 2);
    CHECK(r.report.on_request_cost == doctest::Approx(8 * 0.05));
    CHECK(r.report.continuous_cost == doctest::Approx(1440 * 0.05));
    REQUIRE(r.report.ratio.has_value());
    CHECK(*r.report.ratio == doctest::Approx(8.0 / 1440.0));

    // The trace tells the same story, counted independently of the report.
    CHECK(count_kind(r, "continuous", "position") == 1440);
    CHECK(count_kind(r, "on_request", "deliver") == 2);
    CHECK(count_kind(r, "on_request", "notify") == 6);
}

TEST_CASE("canonical day over GPRS bills octets") {
    auto s = testing::canonical_scenario();
    s.transport_mode = Transport::Gprs;
    auto r = sim::run_scenario(s);
    std::uint64_t on_octets = 0, cont_octets = 0;
    for (const auto& e : r.trace) {
        if (e.mode == "on_request" && (e.kind == "deliver" || e.kind == "notify")) on_octets += e.line.size() + 1;
        if (e.mode == "continuous" && e.kind == "position") cont_octets += e.line.size() + 1;
    }
    CHECK(r.report.on_request.total_bytes == on_octets);
    CHECK(r.report.continuous.total_bytes == cont_octets);
    CHECK(r.report.on_request_cost == doctest::Approx(on_octets * 0.001));
    CHECK(r.report.on_request_cost < r.report.continuous_cost);
}

TEST_CASE("each served emergency costs its request plus its fan-out") {
    // Nine emergencies against ten tracking periods: fewer emergencies than
    // periods, yet 9 x (1 + 3) = 36 messages against 10 position reports.
    auto s = testing::canonical_scenario();
    s.duration_s = 600;
    s.track_interval_s = 60;
    s.service_time_s = 1;
    s.emergencies.clear();
    for (int i = 0; i < 9; ++i) s.emergencies.push_back({"7501234567", 60 * i + 5});
    auto r = sim::run_scenario(s);
    CHECK(r.report.continuous.inbound_msg_count == oracle::enumerate_ticks(600, 60));
    CHECK(r.report.on_request.inbound_msg_count + r.report.on_request.outbound_msg_count == 36);
    CHECK(r.report.on_request_cost == doctest::Approx(36 * s.tariff.sms_cost_per_msg));
    CHECK(r.report.on_request_cost > r.report.continuous_cost);
}

TEST_CASE("no emergencies means no on-request cost") {
    auto s = testing::canonical_scenario();
    s.emergencies.clear();
    s.tariff = {1000.0, 1000.0};
    auto r = sim::run_scenario(s);
    CHECK(r.report.on_request_cost == 0.0);
    CHECK(r.report.on_request.inbound_msg_count == 0);
    CHECK(r.report.continuous_cost > 0.0);
}

TEST_CASE("an unregistered child costs one notification per emergency") {
    auto s = testing::canonical_scenario();
    s.children[0].registered = false;
    auto r = sim::run_scenario(s);
    CHECK(r.report.on_request.inbound_msg_count == 2);
    CHECK(r.report.on_request.outbound_msg_count == 2);
}

TEST_CASE("same scenario and seed give identical bytes") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        auto s = testing::random_economy_scenario(rng, rng());
        auto a = sim::run_scenario(s);
        auto b = sim::run_scenario(s);
        CHECK(a.trace_text() == b.trace_text());
        CHECK(sim::to_json(a.report).dump() == sim::to_json(b.report).dump());
    }
}

TEST_CASE("a different seed moves the jitter") {
    auto s = testing::canonical_scenario();
    auto a = sim::run_scenario(s);
    s.rng_seed = 2;
    auto b = sim::run_scenario(s);
    CHECK(a.trace_text() != b.trace_text());
}

TEST_CASE("emit_emergency") {
    sim::SimChild child{oracle::sample_child(), {36.19, 44.009}, 0.0, true};

    SUBCASE("zero noise reports home exactly") {
        sim::SimTerminal t(child, 9);
        auto msg = emit_emergency(t, 100, Transport::Sms);
        CHECK(msg.body == "SUCCOR/1 7501234567 36.190000 44.009000 100");
        CHECK(msg.from_no == "7501234567");
    }
    SUBCASE("the stream advances between fixes") {
        child.gps_noise_deg = 0.001;
        sim::SimTerminal t(child, 9);
        auto a = emit_emergency(t, 1, Transport::Sms).body;
        auto b = emit_emergency(t, 1, Transport::Sms).body;
        CHECK(a != b);
    }
    SUBCASE("fixes near the pole are clamped") {
        child.home = {90.0, 180.0};
        child.gps_noise_deg = 5.0;
        sim::SimTerminal t(child, 4);
        for (int i = 0; i < 200; ++i) {
            auto fix = t.gps_fix();
            CHECK(is_valid(fix));
            auto msg = emit_emergency(t, i, Transport::Gprs);
            CHECK_NOTHROW(wire::parse_request(msg.body, Transport::Gprs));
        }
    }
}

TEST_CASE("cost_of") {
    std::vector<std::string> five(5, "x");
    CHECK(sim::cost_of(five, {0.05, 0}, Transport::Sms) == doctest::Approx(0.25));
    CHECK(sim::cost_of({}, {0.05, 0.001}, Transport::Sms) == 0.0);
    CHECK(sim::cost_of({}, {0.05, 0.001}, Transport::Gprs) == 0.0);
    std::vector<std::string> one{std::string(47, 'a')};  // 48 octets with its terminator
    CHECK(sim::line_octets(one[0]) == 48);
    CHECK(sim::cost_of(one, {0, 0.001}, Transport::Gprs) == doctest::Approx(0.048));
}

TEST_CASE("GPRS cost grows with id length and coordinate signs") {
    sim::Tariff tariff{0, 0.001};
    auto cost = [&](std::string id, GeoPoint p) {
        std::vector<std::string> lines{wire::encode_request({std::move(id), p, 1, Transport::Gprs})};
        return sim::cost_of(lines, tariff, Transport::Gprs);
    };
    std::string id = "1";
    double prev = 0;
    for (int len = 1; len <= 10; ++len, id += "1") {
        double c = cost(id, {1, 1});
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(cost("5", {1, 1}) <= cost("5", {-1, 1}));
    CHECK(cost("5", {-1, 1}) <= cost("5", {-1, -1}));
}

TEST_CASE("loss removes messages from both sides but never invents any") {
    auto s = testing::canonical_scenario();
    s.network.loss_probability = 0.3;
    auto r = sim::run_scenario(s);
    CHECK(r.report.continuous.inbound_msg_count + count_kind(r, "continuous", "position_lost") == 1440);
    CHECK(r.report.on_request.inbound_msg_count + count_kind(r, "on_request", "lost") == 2);
}

TEST_CASE("invalid scenarios are refused with field names") {
    auto s = testing::canonical_scenario();
    s.track_interval_s = 0;
    s.emergencies.push_back({"999", 5});
    try {
        sim::run_scenario(s);
        FAIL("expected InvalidScenario");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidScenario);
        std::set<std::string> names;
        for (const auto& f : e.fields()) names.insert(f.field);
        CHECK(names.contains("track_interval_s"));
        CHECK(names.contains("emergencies[2].child_id"));
    }
}

TEST_CASE("scenario JSON round trip") {
    auto s = testing::canonical_scenario();
    auto back = sim::scenario_from_json(sim::to_json(s));
    CHECK(sim::to_json(back) == sim::to_json(s));
    CHECK_THROWS_AS(sim::scenario_from_json(json::parse(R"({"children": 3})")), Error);
}

TEST_CASE("terminal network follows SETADDR") {
    sim::TerminalNetwork net;
    wire::Endpoint a{"10.0.0.1", 7000}, b{"10.0.0.2", 7000}, c{"10.0.0.3", 7001};
    net.add_terminal("42", a);
    net.send("42", "x");
    auto ack = send_setaddr(net, "42", b);
    CHECK(ack.endpoint == b);
    CHECK(net.send("42", "y") == b);
    send_setaddr(net, "42", c);
    CHECK(net.send("42", "z") == c);
    CHECK(net.delivered_to(a) == 1);
    CHECK(net.delivered_to(b) == 1);
    CHECK(net.delivered_to(c) == 1);
    CHECK_THROWS_AS(send_setaddr(net, "43", b), Error);
    net.set_online("42", false);
    try {
        send_setaddr(net, "42", a);
        FAIL("expected Undeliverable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Undeliverable);
    }
    CHECK(net.endpoint_of("42") == c);
}

}
