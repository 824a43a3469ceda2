/*
 * service.hpp
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

#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "succor/dispatch.hpp"
#include "succor/event_bus.hpp"
#include "succor/gateway.hpp"
#include "succor/persistence.hpp"
#include "succor/registry.hpp"
#include "succor/wire.hpp"

namespace succor {

class HttpFrontend;

struct ServiceConfig {
    std::filesystem::path data_dir;
    ProcessingMode mode = ProcessingMode::Manual;
    wire::Endpoint http_listen{"127.0.0.1", 8080};
    std::optional<wire::Endpoint> gprs_listen;
    DispatchEngine::Clock clock;  // wall clock when empty
};

/// The running server: registry, dispatch engine, SMS gateway and GPRS
/// listener bound together, with every state change written to the
/// persistent logs before the triggering call returns and then published on
/// the event bus.
class Service : private EngineObserver {
public:
    /// Replays the data directory. Throws Error{CorruptLog} or Error{Io}.
    explicit Service(ServiceConfig config);
    ~Service() override;

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    ChildRecord register_child(const ChildRecord& record);
    std::optional<ChildRecord> find_child(std::string_view child_id) const;
    std::vector<ChildRecord> list_children() const;

    /// SMSC entry point: parse, then open an incident.
    SmsGateway::Outcome receive_sms(const InboundMessage& msg);
    /// GPRS entry point for an already parsed request.
    IncidentId receive_request(const EmergencyRequest& req);

    Facility add_facility(const Facility& f);
    Hospital add_hospital(const Hospital& h);

    /// Sends SETADDR to a terminal connected through the GPRS listener.
    SetaddrAck setaddr(std::string_view terminal_id, const wire::Endpoint& endpoint);

    DispatchEngine& engine() noexcept { return *engine_; }
    const DispatchEngine& engine() const noexcept { return *engine_; }
    EventBus& events() noexcept { return bus_; }
    const SmsGateway& sms_gateway() const noexcept { return *gateway_; }

    /// Sorted, normalized JSON of all persistent state. Equal dumps mean
    /// equal state.
    std::string canonical_dump() const;

    /// Binds the HTTP API and (if configured) the GPRS listener and serves
    /// in background threads. Throws Error{Io} when a port cannot be bound.
    void start();
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();

    std::uint16_t http_port() const noexcept { return http_port_; }
    std::optional<std::uint16_t> gprs_port() const;

private:
    void on_incident_opened(const Incident& inc) override;
    void on_incident_updated(const Incident& inc) override;
    void on_sms_sent(const OutboundSms& sms) override;
    void on_facility_changed(const Facility& f) override;
    void on_hospital_added(const Hospital& h) override;

    ServiceConfig config_;
    PersistentLog log_;
    std::shared_ptr<Registry> registry_;
    std::unique_ptr<DispatchEngine> engine_;
    std::unique_ptr<SmsGateway> gateway_;
    EventBus bus_;
    std::mutex register_mu_;

    std::unique_ptr<HttpFrontend> http_;
    std::unique_ptr<GprsListener> gprs_;
    std::uint16_t http_port_ = 0;

    std::mutex run_mu_;
    std::condition_variable run_cv_;
    bool running_ = false;
};

} // namespace succor
