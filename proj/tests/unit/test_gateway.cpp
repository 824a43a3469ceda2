/*
 * test_gateway.cpp
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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "succor/gateway.hpp"
#include "succor/wire.hpp"
#include "support/oracles.hpp"

using namespace succor;

namespace {

// Minimal blocking client for poking the listener with raw bytes.
class RawClient {
public:
    explicit RawClient(std::uint16_t port) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
        REQUIRE(::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
    }
    ~RawClient() { ::close(fd_); }

    void send(std::string_view bytes) {
        REQUIRE(::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL) == static_cast<ssize_t>(bytes.size()));
    }

    std::string read_line(int timeout_ms = 3000) {
        while (true) {
            auto nl = buf_.find('\n');
            if (nl != std::string::npos) {
                auto line = buf_.substr(0, nl);
                buf_.erase(0, nl + 1);
                return line;
            }
            pollfd pfd{fd_, POLLIN, 0};
            if (::poll(&pfd, 1, timeout_ms) <= 0) return "<timeout>";
            char tmp[256];
            auto n = ::recv(fd_, tmp, sizeof(tmp), 0);
            if (n <= 0) return "<closed>";
            buf_.append(tmp, static_cast<std::size_t>(n));
        }
    }

private:
    int fd_ = -1;
    std::string buf_;
};

struct Collector {
    std::mutex mu;
    std::vector<EmergencyRequest> seen;
    std::atomic<IncidentId> next{1};

    GprsListener::Handler handler() {
        return [this](const EmergencyRequest& r) {
            std::lock_guard lock(mu);
            seen.push_back(r);
            return next++;
        };
    }
    std::size_t size() {
        std::lock_guard lock(mu);
        return seen.size();
    }
};

const wire::Endpoint kLoopbackAnyPort{"127.0.0.1", 0};

} // namespace

TEST_SUITE("gateway") {

TEST_CASE("ingest_sms from matching sender") {
    auto in = ingest_sms({"7501234567", "SUCCOR/1 7501234567 36.190000 44.009000 1700000000", 5, Transport::Sms});
    CHECK(in.request.child_id == "7501234567");
    CHECK(in.request.transport == Transport::Sms);
    CHECK_FALSE(in.sender_mismatch);
}

TEST_CASE("ingest_sms from another phone keeps the embedded id and flags it") {
    auto in = ingest_sms({"7700000000", "SUCCOR/1 7501234567 36.190000 44.009000 1700000000", 5, Transport::Sms});
    CHECK(in.request.child_id == "7501234567");
    CHECK(in.from_no == "7700000000");
    CHECK(in.sender_mismatch);
}

TEST_CASE("SmsGateway drops malformed messages and counts them") {
    int delivered = 0;
    SmsGateway gw([&](const IngestedRequest&) { return IncidentId(++delivered); });

    auto bad = gw.deliver({"1", "HELP ME", 0, Transport::Sms});
    CHECK(bad.error == Errc::BadMagic);
    CHECK_FALSE(bad.request.has_value());
    CHECK(gw.error_count() == 1);
    CHECK(delivered == 0);

    auto bad_sender = gw.deliver({"+1", "SUCCOR/1 1 0.000000 0.000000 0", 0, Transport::Sms});
    CHECK(bad_sender.error == Errc::BadNumber);
    CHECK(gw.error_count() == 2);

    auto good = gw.deliver({"1", "SUCCOR/1 1 0.000000 0.000000 0", 0, Transport::Sms});
    CHECK_FALSE(good.error.has_value());
    CHECK(good.incident_id == IncidentId{1});
    CHECK(gw.accepted_count() == 1);
}

TEST_CASE("LineBuffer yields the same lines however the stream is split") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::string> lines;
        std::string stream;
        int n = std::uniform_int_distribution<int>(1, 20)(rng);
        for (int i = 0; i < n; ++i) {
            lines.push_back(wire::encode_request(oracle::random_request(rng)));
            stream += lines.back();
            stream += (i % 3 == 0) ? "\r\n" : "\n";
        }
        LineBuffer buf;
        std::vector<std::string> got;
        std::size_t pos = 0;
        while (pos < stream.size()) {
            auto len = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
            for (auto& l : buf.feed(std::string_view(stream).substr(pos, len))) {
                CHECK_FALSE(l.overlong);
                got.push_back(l.text);
            }
            pos += len;
        }
        CHECK(got == lines);
    }
}

TEST_CASE("LineBuffer reports an overlong line once and recovers") {
    LineBuffer buf;
    auto out = buf.feed(std::string(500, 'x'));
    REQUIRE(out.size() == 1);
    CHECK(out[0].overlong);
    out = buf.feed(std::string(100, 'y') + "\nok\n");
    REQUIRE(out.size() == 1);
    CHECK(out[0].text == "ok");
}

TEST_CASE("GPRS listener: one valid line gives one request and one ACK") {
    Collector c;
    GprsListener listener(kLoopbackAnyPort, c.handler());
    listener.start();
    RawClient client(listener.port());
    client.send("SUCCOR/1 42 36.190000 44.009000 1700000000\n");
    CHECK(client.read_line() == "ACK 1");
    REQUIRE(c.size() == 1);
    CHECK(c.seen[0].transport == Transport::Gprs);
    CHECK(c.seen[0].child_id == "42");
}

TEST_CASE("GPRS listener: a bad line does not close the connection") {
    Collector c;
    GprsListener listener(kLoopbackAnyPort, c.handler());
    listener.start();
    RawClient client(listener.port());
    client.send("HELLO\nSUCCOR/1 42 0.000000 0.000000 1\n");
    CHECK(client.read_line() == "ERR BadMagic");
    CHECK(client.read_line() == "ACK 1");
    CHECK(c.size() == 1);
    CHECK(listener.rejected_count() == 1);
}

TEST_CASE("GPRS listener: byte-at-a-time delivery and overlong lines") {
    Collector c;
    GprsListener listener(kLoopbackAnyPort, c.handler());
    listener.start();
    RawClient client(listener.port());
    std::string line = "SUCCOR/1 7 1.000000 2.000000 3\n";
    for (char ch : line) client.send(std::string_view(&ch, 1));
    CHECK(client.read_line() == "ACK 1");
    client.send(std::string(400, 'Z') + "\n");
    CHECK(client.read_line() == "ERR TooLong");
    client.send(line);
    CHECK(client.read_line() == "ACK 2");
    CHECK(c.size() == 2);
}

TEST_CASE("GPRS listener: concurrent connections") {
    Collector c;
    GprsListener listener(kLoopbackAnyPort, c.handler());
    listener.start();
    RawClient a(listener.port());
    RawClient b(listener.port());
    a.send("SUCCOR/1 1 0.000000 0.000000 0\n");
    b.send("SUCCOR/1 2 0.000000 0.000000 0\n");
    auto ra = a.read_line();
    auto rb = b.read_line();
    CHECK(ra.rfind("ACK ", 0) == 0);
    CHECK(rb.rfind("ACK ", 0) == 0);
    CHECK(ra != rb);
    CHECK(c.size() == 2);
}

TEST_CASE("SETADDR over live sockets moves a terminal between listeners") {
    Collector old_side, new_side;
    GprsListener old_listener(kLoopbackAnyPort, old_side.handler());
    GprsListener new_listener(kLoopbackAnyPort, new_side.handler());
    old_listener.start();
    new_listener.start();
    wire::Endpoint old_ep{"127.0.0.1", old_listener.port()};
    wire::Endpoint new_ep{"127.0.0.1", new_listener.port()};

    GprsTerminal terminal("7501234567", old_ep);
    EmergencyRequest req{"7501234567", {36.19, 44.009}, 1, Transport::Gprs};
    CHECK(terminal.send_request(req).rfind("ACK", 0) == 0);
    REQUIRE(old_side.size() == 1);

    SUBCASE("retarget, then all traffic lands at the new endpoint") {
        auto ack = send_setaddr(old_listener, "7501234567", new_ep);
        CHECK(ack.endpoint == new_ep);
        terminal.poll_control(1000);
        CHECK(terminal.endpoint() == new_ep);
        for (int i = 0; i < 10; ++i) CHECK(terminal.send_request(req).rfind("ACK", 0) == 0);
        CHECK(old_side.size() == 1);
        CHECK(new_side.size() == 10);
    }
    SUBCASE("unknown terminal") {
        try {
            send_setaddr(old_listener, "999", new_ep);
            FAIL("expected UnknownTerminal");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::UnknownTerminal);
        }
    }
}

}
