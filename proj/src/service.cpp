/*
 * service.cpp
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

#include "succor/service.hpp"

#include <chrono>

#include "http_api.hpp"

namespace succor {

namespace {
UnixSeconds wall_clock() {
    using namespace std::chrono;
    return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
}
} // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)), log_(config_.data_dir) {
    if (!config_.clock) config_.clock = wall_clock;
    registry_ = std::make_shared<Registry>();
    engine_ = std::make_unique<DispatchEngine>(registry_, config_.mode, config_.clock);

    auto state = log_.replay();
    for (const auto& child : state.children) {
        try {
            registry_->register_child(child);
        } catch (const Error& e) {
            throw Error(Errc::CorruptLog, "children.log: record for " + child.child_id +
                                              " does not replay: " + e.what());
        }
    }
    engine_->restore(state.engine);
    engine_->set_observer(this);

    gateway_ = std::make_unique<SmsGateway>(
        [this](const IngestedRequest& in) { return engine_->open_incident(in.request).incident_id; });
}

Service::~Service() {
    stop();
    engine_->set_observer(nullptr);
}

ChildRecord Service::register_child(const ChildRecord& record) {
    std::lock_guard lock(register_mu_);
    registry_->register_child(record);
    log_.append_child(record);
    return record;
}

std::optional<ChildRecord> Service::find_child(std::string_view child_id) const {
    return registry_->find_child(child_id);
}

std::vector<ChildRecord> Service::list_children() const { return registry_->list_children(); }

SmsGateway::Outcome Service::receive_sms(const InboundMessage& msg) { return gateway_->deliver(msg); }

IncidentId Service::receive_request(const EmergencyRequest& req) {
    return engine_->open_incident(req).incident_id;
}

Facility Service::add_facility(const Facility& f) { return engine_->add_facility(f); }

Hospital Service::add_hospital(const Hospital& h) { return engine_->add_hospital(h); }

SetaddrAck Service::setaddr(std::string_view terminal_id, const wire::Endpoint& endpoint) {
    if (!gprs_)
        throw Error(Errc::UnknownTerminal, "no GPRS channel; terminal " + std::string(terminal_id) +
                                               " cannot be reached");
    return send_setaddr(*gprs_, terminal_id, endpoint);
}

std::string Service::canonical_dump() const {
    auto state = engine_->snapshot();
    json dump{{"children", registry_->list_children()},
              {"facilities", state.facilities},
              {"hospitals", state.hospitals},
              {"incidents", state.incidents},
              {"outbox", state.outbox}};
    return dump.dump(2) + "\n";
}

void Service::start() {
    {
        std::lock_guard lock(run_mu_);
        if (running_) return;
        running_ = true;
    }
    try {
        if (config_.gprs_listen) {
            gprs_ = std::make_unique<GprsListener>(*config_.gprs_listen, [this](const EmergencyRequest& req) {
                return receive_request(req);
            });
            gprs_->start();
        }
        http_ = std::make_unique<HttpFrontend>(*this);
        http_port_ = http_->start(config_.http_listen);
    } catch (...) {
        stop();
        throw;
    }
}

void Service::stop() {
    {
        std::lock_guard lock(run_mu_);
        if (!running_) return;
        running_ = false;
    }
    bus_.close_all();
    if (http_) http_->stop();
    if (gprs_) gprs_->stop();
    http_.reset();
    gprs_.reset();
    run_cv_.notify_all();
}

void Service::wait() {
    std::unique_lock lock(run_mu_);
    run_cv_.wait(lock, [&] { return !running_; });
}

std::optional<std::uint16_t> Service::gprs_port() const {
    if (!gprs_) return std::nullopt;
    return gprs_->port();
}

void Service::on_incident_opened(const Incident& inc) {
    log_.append_incident(inc);
    bus_.publish(EventKind::IncidentOpened, inc);
}

void Service::on_incident_updated(const Incident& inc) {
    log_.append_incident(inc);
    bus_.publish(EventKind::IncidentUpdated, inc);
}

void Service::on_sms_sent(const OutboundSms& sms) {
    log_.append_sms(sms);
    bus_.publish(EventKind::SmsSent, sms);
}

void Service::on_facility_changed(const Facility& f) { log_.append_facility(f); }

void Service::on_hospital_added(const Hospital& h) { log_.append_hospital(h); }

} // namespace succor
