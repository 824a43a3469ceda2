/*
 * gateway.hpp
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

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "succor/domain.hpp"
#include "succor/wire.hpp"

namespace succor {

struct InboundMessage {
    std::string from_no;
    std::string body;
    UnixSeconds received_s = 0;
    Transport transport = Transport::Sms;
};

struct IngestedRequest {
    EmergencyRequest request;
    std::string from_no;
    // The embedded child id is authoritative; a different sender (a guardian's
    // phone, say) is tolerated and flagged.
    bool sender_mismatch = false;
};

/// Parses an SMS body into a request with transport SMS. Throws the parse
/// error; use SmsGateway for the log-and-drop behavior.
IngestedRequest ingest_sms(const InboundMessage& msg);

/// Entry point for the simulated SMSC. Malformed messages are counted and
/// dropped; well-formed ones go to the sink. Reentrant.
class SmsGateway {
public:
    using Sink = std::function<IncidentId(const IngestedRequest&)>;

    struct Outcome {
        std::optional<IngestedRequest> request;
        std::optional<IncidentId> incident_id;
        std::optional<Errc> error;
    };

    explicit SmsGateway(Sink sink) : sink_(std::move(sink)) {}

    Outcome deliver(const InboundMessage& msg);

    std::uint64_t error_count() const noexcept { return errors_.load(); }
    std::uint64_t accepted_count() const noexcept { return accepted_.load(); }

private:
    Sink sink_;
    std::atomic<std::uint64_t> errors_{0};
    std::atomic<std::uint64_t> accepted_{0};
};

/// Reassembles newline-terminated lines from arbitrary stream chunks. A line
/// that grows past the octet bound before its newline is reported once as
/// overlong and the rest of it is discarded.
class LineBuffer {
public:
    struct Line {
        std::string text;
        bool overlong = false;
    };

    explicit LineBuffer(std::size_t max_octets = kMaxSmsOctets) : max_(max_octets) {}

    std::vector<Line> feed(std::string_view chunk);

private:
    std::size_t max_;
    std::string pending_;
    bool discarding_ = false;
};

/// Anything that can carry a control line to a terminal by id.
class ControlChannel {
public:
    virtual ~ControlChannel() = default;
    /// Throws Error{UnknownTerminal} or Error{Undeliverable}.
    virtual void deliver_control(std::string_view terminal_id, std::string_view line) = 0;
};

struct SetaddrAck {
    std::string terminal_id;
    wire::Endpoint endpoint;
};

SetaddrAck send_setaddr(ControlChannel& channel, std::string_view terminal_id,
                        const wire::Endpoint& new_endpoint);

/// Stream listener for GPRS-mode terminals. One thread per connection; each
/// line is parsed and either handed to the handler (reply `ACK <id>`) or
/// rejected (reply `ERR <code>`). Bad lines never close the connection.
///
/// The listener remembers which connection last sent a request for each
/// child id, which makes it a ControlChannel for SETADDR.
class GprsListener : public ControlChannel {
public:
    using Handler = std::function<IncidentId(const EmergencyRequest&)>;

    GprsListener(wire::Endpoint bind_to, Handler handler);
    ~GprsListener() override;

    GprsListener(const GprsListener&) = delete;
    GprsListener& operator=(const GprsListener&) = delete;

    /// Binds and starts accepting. Throws Error{Io} if the endpoint is not bindable.
    void start();
    void stop();

    /// Port actually bound (useful when binding port 0).
    std::uint16_t port() const noexcept { return bound_port_; }

    void deliver_control(std::string_view terminal_id, std::string_view line) override;

    std::uint64_t accepted_count() const noexcept { return accepted_.load(); }
    std::uint64_t rejected_count() const noexcept { return rejected_.load(); }

private:
    struct Connection;

    void accept_loop();
    void serve_connection(std::shared_ptr<Connection> conn);
    static bool write_all(int fd, std::string_view data);

    wire::Endpoint bind_to_;
    Handler handler_;
    int listen_fd_ = -1;
    std::uint16_t bound_port_ = 0;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;

    std::mutex mu_;
    std::vector<std::shared_ptr<Connection>> connections_;
    std::vector<std::thread> workers_;
    std::map<std::string, std::weak_ptr<Connection>, std::less<>> terminals_;

    std::atomic<std::uint64_t> accepted_{0};
    std::atomic<std::uint64_t> rejected_{0};
};

/// Blocking client used by tools and tests to play a GPRS terminal: sends
/// request lines to its current endpoint and honors SETADDR lines found in
/// the reply stream by reconnecting elsewhere.
class GprsTerminal {
public:
    GprsTerminal(std::string child_id, wire::Endpoint endpoint);
    ~GprsTerminal();

    GprsTerminal(const GprsTerminal&) = delete;
    GprsTerminal& operator=(const GprsTerminal&) = delete;

    /// Sends one request line and returns the server's reply (ACK/ERR line,
    /// no terminator). Any SETADDR lines received first are applied after
    /// the reply arrives.
    std::string send_line(std::string_view line);
    std::string send_request(const EmergencyRequest& req);

    /// Reads pending control lines without sending, waiting up to timeout_ms.
    void poll_control(int timeout_ms);

    const wire::Endpoint& endpoint() const noexcept { return endpoint_; }
    const std::string& child_id() const noexcept { return child_id_; }

private:
    void ensure_connected();
    void close();
    std::optional<std::string> read_line(int timeout_ms);
    void apply_control(const std::string& line);

    std::string child_id_;
    wire::Endpoint endpoint_;
    std::optional<wire::Endpoint> pending_endpoint_;
    int fd_ = -1;
    std::string inbuf_;
};

} // namespace succor
