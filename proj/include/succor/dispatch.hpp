/*
 * dispatch.hpp
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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "succor/domain.hpp"
#include "succor/geo.hpp"
#include "succor/registry.hpp"

namespace succor {

enum class ProcessingMode { Auto, Manual };

/// Receives every state change the engine makes, in order, while the engine
/// lock is held. Persistence and the event stream hang off this.
class EngineObserver {
public:
    virtual ~EngineObserver() = default;
    virtual void on_incident_opened(const Incident&) {}
    virtual void on_incident_updated(const Incident&) {}
    virtual void on_sms_sent(const OutboundSms&) {}
    virtual void on_facility_changed(const Facility&) {}
    virtual void on_hospital_added(const Hospital&) {}
};

/// Everything the engine owns besides the registry; used to restore state
/// after a restart.
struct EngineState {
    std::vector<Facility> facilities;
    std::vector<Hospital> hospitals;
    std::vector<Incident> incidents;
    std::vector<OutboundSms> outbox;
};

using KindFilter = std::optional<std::set<FacilityKind>>;

/// Request handling behind the operator console: Search (pending
/// incidents), Find, Dispatch, Send SMS and Close, each a guarded step of
/// the incident lifecycle.
///
/// All mutations are serialized by one mutex; a failing step leaves the
/// incident, the roster and the outbox untouched.
class DispatchEngine {
public:
    using Clock = std::function<UnixSeconds()>;

    DispatchEngine(std::shared_ptr<const Registry> registry, ProcessingMode mode, Clock clock);

    void set_observer(EngineObserver* observer);
    ProcessingMode mode() const noexcept { return mode_; }

    /// Facility/hospital id 0 means "assign the next free id". Throws
    /// Error{Duplicate} for a taken id and Error{Invalid} for a bad location.
    Facility add_facility(Facility facility);
    Hospital add_hospital(Hospital hospital);

    /// Stores a new RECEIVED incident. In AUTO mode the full pipeline runs
    /// immediately; a pipeline error leaves the incident at its last good
    /// state and is not reported here.
    Incident open_incident(const EmergencyRequest& request);

    Incident find_step(IncidentId id);
    Incident dispatch_step(IncidentId id, const KindFilter& kinds = std::nullopt);
    Incident notify_step(IncidentId id);
    Incident close_incident(IncidentId id);

    /// find, dispatch (no filter), notify; stops at the first error and rethrows it.
    Incident process_incident(IncidentId id);

    std::vector<Incident> pending_incidents() const;
    std::vector<Incident> incidents(std::optional<IncidentState> state = std::nullopt) const;
    std::optional<Incident> incident(IncidentId id) const;
    std::vector<OutboundSms> outbox() const;
    std::vector<Facility> facilities() const;
    std::vector<Hospital> hospitals() const;

    EngineState snapshot() const;
    /// Replaces all engine-owned state. Id counters continue after the
    /// largest restored id. Observers are not notified.
    void restore(const EngineState& state);

private:
    Incident& incident_locked(IncidentId id);
    void find_locked(Incident& inc);
    void dispatch_locked(Incident& inc, const KindFilter& kinds);
    void notify_locked(Incident& inc);
    void transition(Incident& inc, IncidentEvent event);
    OutboundSms& push_sms(Incident& inc, std::string to, std::string body, SmsPurpose purpose);

    std::shared_ptr<const Registry> registry_;
    ProcessingMode mode_;
    Clock clock_;
    EngineObserver* observer_ = nullptr;

    mutable std::mutex mu_;
    std::map<FacilityId, Facility> facilities_;
    std::map<HospitalId, Hospital> hospitals_;
    std::map<IncidentId, Incident> incidents_;
    std::vector<OutboundSms> outbox_;
    IncidentId next_incident_ = 1;
    SmsId next_sms_ = 1;
};

/// Notification bodies. Every slot is bounded by the registration field
/// limits, which keeps each body within one SMS.
namespace templates {
std::string family_message(const Incident& inc, const ChildRecord& child, FacilityKind kind);
std::string hospital_message(const Incident& inc, const ChildRecord* child, FacilityKind kind);
} // namespace templates

} // namespace succor
