/*
 * test_http.cpp
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
#include <httplib.h>

#include <atomic>
#include <thread>

#include "succor/service.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

using namespace succor;
using testing::TempDir;

namespace {

struct Server {
    TempDir dir;
    Service svc;
    httplib::Client client;

    explicit Server(ProcessingMode mode = ProcessingMode::Auto)
        : svc(make_config(dir, mode)), client(start(svc)) {
        client.set_read_timeout(5, 0);
    }
    ~Server() { svc.stop(); }

    static ServiceConfig make_config(const TempDir& d, ProcessingMode mode) {
        ServiceConfig c;
        c.data_dir = d.path();
        c.mode = mode;
        c.http_listen = {"127.0.0.1", 0};
        return c;
    }
    static std::string start(Service& s) {
        s.start();
        return "http://127.0.0.1:" + std::to_string(s.http_port());
    }

    httplib::Result post(const std::string& path, const json& body) {
        return client.Post(path, body.dump(), "application/json");
    }
    json get(const std::string& path) {
        auto res = client.Get(path);
        REQUIRE(res);
        REQUIRE(res->status == 200);
        return json::parse(res->body);
    }

    void seed_resources() {
        REQUIRE(post("/api/facilities", {{"kind", "Car"}, {"home", {{"lat_deg", 36.2}, {"lon_deg", 44.0}}}, {"available", true}})->status == 201);
        REQUIRE(post("/api/hospitals", {{"name", "Rizgary"}, {"location", {{"lat_deg", 36.2}, {"lon_deg", 44.02}}}, {"contact_no", "7505550000"}})->status == 201);
    }
};

json lana() { return oracle::sample_child(); }

/// Reads the event stream on a background thread until `want` envelopes
/// have arrived.
class StreamReader {
public:
    StreamReader(Service& svc, std::size_t want) : want_(want) {
        const auto before = svc.events().subscriber_count();
        thread_ = std::thread([this, port = svc.http_port()] {
            httplib::Client c("127.0.0.1", port);
            c.set_read_timeout(10, 0);
            std::string buf;
            c.Get("/api/events", [&](const char* data, std::size_t len) {
                buf.append(data, len);
                std::size_t nl;
                while ((nl = buf.find('\n')) != std::string::npos) {
                    lines_.push_back(json::parse(buf.substr(0, nl)));
                    buf.erase(0, nl + 1);
                }
                return lines_.size() < want_;
            });
        });
        for (int i = 0; i < 500 && svc.events().subscriber_count() == before; ++i)
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    std::vector<json> finish() {
        thread_.join();
        return lines_;
    }

private:
    std::size_t want_;
    std::vector<json> lines_;
    std::thread thread_;
};

} // namespace

TEST_SUITE("http") {

TEST_CASE("child registration status codes") {
    Server s;
    auto created = s.post("/api/children", lana());
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(json::parse(created->body) == lana());

    auto dup = s.post("/api/children", lana());
    CHECK(dup->status == 409);
    CHECK(json::parse(dup->body).at("error") == "Duplicate");

    auto bad = lana();
    bad["child_id"] = "42";
    bad["name"] = std::string(21, 'x');
    auto invalid = s.post("/api/children", bad);
    CHECK(invalid->status == 422);
    auto body = json::parse(invalid->body);
    CHECK(body.at("error") == "Invalid");
    CHECK(body.at("fields").at(0).at("field") == "name");

    CHECK(s.client.Post("/api/children", "{nope", "application/json")->status == 400);
    CHECK(s.get("/api/children").size() == 1);
    CHECK(s.get("/api/children/7501234567") == lana());
    CHECK(s.client.Get("/api/children/1")->status == 404);
}

TEST_CASE("SMS ingestion over HTTP, registered child, AUTO") {
    Server s;
    s.seed_resources();
    REQUIRE(s.post("/api/children", lana())->status == 201);
    auto res = s.post("/api/gateway/sms", {{"from_no", "7501234567"},
                                           {"body", "SUCCOR/1 7501234567 36.190000 44.009000 1700000000"}});
    REQUIRE(res->status == 202);
    auto ack = json::parse(res->body);
    CHECK(ack.at("incident_id") == 1);
    CHECK(ack.at("sender_mismatch") == false);

    auto inc = s.get("/api/incidents/1");
    CHECK(inc.at("state") == "NOTIFIED");
    CHECK(inc.at("child_info").at("name") == "Lana");
    CHECK(s.get("/api/outbox").size() == 3);
    CHECK(s.get("/api/incidents?state=NOTIFIED").size() == 1);
    CHECK(s.get("/api/incidents?state=RECEIVED").empty());

    auto dist = s.get("/api/incidents/1/distances");
    CHECK(dist.at("facilities").at(0).at("distance_km").get<double>() > 0.0);
}

TEST_CASE("malformed SMS is rejected with its parse code") {
    Server s;
    auto res = s.post("/api/gateway/sms", {{"from_no", "1"}, {"body", "HELP 1 2 3"}});
    CHECK(res->status == 400);
    CHECK(json::parse(res->body).at("error") == "BadMagic");
    CHECK(s.svc.sms_gateway().error_count() == 1);
    CHECK(s.post("/api/gateway/sms", {{"body", "x"}})->status == 400);
}

TEST_CASE("MANUAL operator steps over HTTP") {
    Server s(ProcessingMode::Manual);
    s.seed_resources();
    REQUIRE(s.post("/api/gateway/sms", {{"from_no", "99"}, {"body", "SUCCOR/1 99 36.190000 44.009000 5"}})->status == 202);
    CHECK(s.get("/api/incidents?state=RECEIVED").size() == 1);
    CHECK(s.post("/api/incidents/1/close", json::object())->status == 409);
    CHECK(s.post("/api/incidents/1/find", json::object())->status == 200);
    CHECK(s.post("/api/incidents/1/dispatch", {{"kinds", {"Lifeboat"}}})->status == 409);
    CHECK(s.post("/api/incidents/1/dispatch", {{"kinds", {"Bicycle"}}})->status == 400);
    CHECK(s.post("/api/incidents/1/dispatch", json::object())->status == 200);
    CHECK(s.post("/api/incidents/1/notify", json::object())->status == 200);
    auto out = s.get("/api/outbox");
    REQUIRE(out.size() == 1);
    CHECK(out[0].at("purpose") == "HOSPITAL");
    auto closed = s.post("/api/incidents/1/close", json::object());
    CHECK(json::parse(closed->body).at("state") == "CLOSED");
    CHECK(s.get("/api/facilities").at(0).at("available") == true);
    CHECK(s.post("/api/incidents/9/find", json::object())->status == 404);
    CHECK(s.client.Get("/api/incidents?state=bogus")->status == 400);
}

TEST_CASE("setaddr for a terminal that never connected") {
    Server s;
    auto res = s.post("/api/terminals/42/setaddr", {{"endpoint", "127.0.0.1:9"}});
    CHECK(res->status == 404);
    CHECK(json::parse(res->body).at("error") == "UnknownTerminal");
}

TEST_CASE("event stream delivers each change once, in order") {
    Server s;
    s.seed_resources();
    REQUIRE(s.post("/api/children", lana())->status == 201);

    // opened, identified, dispatched, 3 x sms, notified
    const std::size_t per_incident = 7;
    StreamReader one(s.svc, per_incident);
    StreamReader two(s.svc, per_incident);
    auto t0 = std::chrono::steady_clock::now();
    s.post("/api/gateway/sms", {{"from_no", "7501234567"}, {"body", "SUCCOR/1 7501234567 36.190000 44.009000 1"}});
    auto a = one.finish();
    auto b = two.finish();
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(2));
    REQUIRE(a.size() == per_incident);
    CHECK(a == b);
    CHECK(a.front().at("kind") == "INCIDENT_OPENED");
    CHECK(a.back().at("payload").at("state") == "NOTIFIED");
    for (std::size_t i = 1; i < a.size(); ++i)
        CHECK(a[i].at("seq").get<std::uint64_t>() == a[i - 1].at("seq").get<std::uint64_t>() + 1);
}

TEST_CASE("GPRS requests reach the engine through the live listener") {
    TempDir dir;
    ServiceConfig c;
    c.data_dir = dir.path();
    c.mode = ProcessingMode::Auto;
    c.http_listen = {"127.0.0.1", 0};
    c.gprs_listen = wire::Endpoint{"127.0.0.1", 0};
    Service svc(c);
    svc.start();
    svc.add_facility({0, FacilityKind::Car, {0, 0}, true});
    svc.add_hospital({0, "H", {0, 0}, "1"});
    GprsTerminal terminal("31", {"127.0.0.1", *svc.gprs_port()});
    CHECK(terminal.send_request({"31", {0.5, 0.5}, 9, Transport::Gprs}) == "ACK 1");
    CHECK(svc.engine().incident(1)->state == IncidentState::Notified);
    CHECK(svc.engine().incident(1)->request.transport == Transport::Gprs);
    svc.stop();
}

}
