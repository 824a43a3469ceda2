/*
 * simulator.hpp
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

// Deterministic scenario engine comparing on-request serving with a
// continuous-tracking baseline over a charged message transport.
//
// The on-request side runs every emergency through the real request grammar,
// the SMS gateway (or the GPRS parse path) and an AUTO-mode dispatch engine.
// The baseline sends one position line per child per tracking period and
// does no dispatch work. A single logical clock drives both; nothing reads
// wall time, so a (scenario, seed) pair always yields the same trace bytes.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "succor/domain.hpp"
#include "succor/gateway.hpp"
#include "succor/json_codec.hpp"
#include "succor/wire.hpp"

namespace succor::sim {

struct Tariff {
    double sms_cost_per_msg = 0.0;
    double gprs_cost_per_byte = 0.0;
};

struct NetworkModel {
    double delivery_latency_s = 0.0;
    double latency_jitter_s = 0.0;  // uniform extra delay in [0, jitter]
    double loss_probability = 0.0;  // lost messages never arrive; no retry
};

struct SimChild {
    ChildRecord record;
    GeoPoint home;
    double gps_noise_deg = 0.0;
    bool registered = true;
};

struct ScheduledEmergency {
    std::string child_id;
    std::int64_t offset_s = 0;
};

struct Scenario {
    std::vector<SimChild> children;
    std::vector<Facility> facilities;
    std::vector<Hospital> hospitals;
    std::int64_t duration_s = 0;
    std::int64_t track_interval_s = 0;
    std::vector<ScheduledEmergency> emergencies;
    std::optional<double> rate_per_child_per_day;
    Tariff tariff;
    Transport transport_mode = Transport::Sms;
    std::uint64_t rng_seed = 0;
    NetworkModel network;
    // Incidents are closed this long after opening, releasing their facility.
    std::int64_t service_time_s = 3600;
};

/// Throws Error{InvalidScenario} listing every bad field.
void validate(const Scenario& s);

Scenario scenario_from_json(const json& j);
json to_json(const Scenario& s);

struct TraceEvent {
    double t_s = 0.0;
    std::string mode;  // "on_request" | "continuous"
    std::string kind;  // emit | lost | deliver | notify | position | position_lost
    std::string child_id;
    std::string line;
    std::optional<IncidentId> incident_id;
    std::optional<SmsPurpose> purpose;

    bool operator==(const TraceEvent&) const = default;
};

struct ModeReport {
    std::string mode;
    Transport transport = Transport::Sms;
    std::uint64_t inbound_msg_count = 0;
    std::uint64_t outbound_msg_count = 0;
    std::uint64_t total_bytes = 0;
    double monetary_cost = 0.0;
    double mean_request_latency_s = 0.0;
};

struct CostReport {
    ModeReport on_request;
    ModeReport continuous;
    double on_request_cost = 0.0;
    double continuous_cost = 0.0;
    std::optional<double> ratio;  // on_request / continuous; absent when continuous is free
    std::uint64_t emergencies_scheduled = 0;
    std::uint64_t incidents_opened = 0;
    std::uint64_t incidents_notified = 0;
};

json to_json(const CostReport& r);
std::string format_table(const CostReport& r);

struct SimulationResult {
    CostReport report;
    std::vector<TraceEvent> trace;

    /// One JSON object per line; the determinism contract is on these bytes.
    std::string trace_text() const;
};

/// Octets billed for one line on the stream transport (line plus terminator).
std::uint64_t line_octets(std::string_view line) noexcept;

/// SMS: message count times the per-message tariff. GPRS: billed octets
/// times the per-byte tariff.
double cost_of(std::span<const std::string> lines, const Tariff& tariff, Transport mode);

/// A simulated child handset: a home position, a GPS with Gaussian jitter
/// and its own seeded random stream.
class SimTerminal {
public:
    SimTerminal(SimChild child, std::uint64_t stream_seed);

    /// One GPS fix: home plus N(0, gps_noise_deg) on each axis, clamped into
    /// the valid coordinate range. Zero noise returns home untouched.
    GeoPoint gps_fix();

    const SimChild& child() const noexcept { return child_; }

private:
    SimChild child_;
    std::mt19937_64 rng_;
};

/// Builds the emergency SMS a terminal sends at offset t.
InboundMessage emit_emergency(SimTerminal& terminal, std::int64_t t, Transport transport);

/// Throws Error{InvalidScenario} on an invalid scenario.
SimulationResult run_scenario(const Scenario& s);

/// Simulated terminal fleet reachable over a control channel. Each terminal
/// sends to its currently configured endpoint; SETADDR moves it.
class TerminalNetwork : public ControlChannel {
public:
    void add_terminal(const std::string& terminal_id, wire::Endpoint endpoint);
    void set_online(const std::string& terminal_id, bool online);

    void deliver_control(std::string_view terminal_id, std::string_view line) override;

    /// Delivers `line` from the terminal to its current endpoint and returns
    /// that endpoint. Throws Error{UnknownTerminal}.
    wire::Endpoint send(const std::string& terminal_id, const std::string& line);

    std::uint64_t delivered_to(const wire::Endpoint& endpoint) const;
    const std::vector<std::string>& lines_at(const wire::Endpoint& endpoint) const;
    wire::Endpoint endpoint_of(const std::string& terminal_id) const;

private:
    struct Terminal {
        wire::Endpoint endpoint;
        bool online = true;
    };
    std::map<std::string, Terminal, std::less<>> terminals_;
    std::map<wire::Endpoint, std::vector<std::string>> inboxes_;
};

} // namespace succor::sim
