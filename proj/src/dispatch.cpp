/*
 * dispatch.cpp
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

#include "succor/dispatch.hpp"

#include <algorithm>

#include "succor/wire.hpp"

namespace succor {

namespace templates {

namespace {
std::string where(const Incident& inc) {
    return wire::format_coordinate(inc.request.location.lat_deg) + "," +
           wire::format_coordinate(inc.request.location.lon_deg);
}
} // namespace

std::string family_message(const Incident& inc, const ChildRecord& child, FacilityKind kind) {
    return "SUCCOR: " + child.name + " needs help at " + where(inc) + ". " +
           std::string(to_string(kind)) + " dispatched (incident " + std::to_string(inc.incident_id) +
           ").";
}

std::string hospital_message(const Incident& inc, const ChildRecord* child, FacilityKind kind) {
    std::string head = "SUCCOR #" + std::to_string(inc.incident_id) + ": ";
    std::string tail = " at " + where(inc) + "; " + std::string(to_string(kind)) + " en route";
    if (child == nullptr) return head + "unregistered patient" + tail;
    return head + "patient " + child->name + ", " + child->disease_name + ", age " + child->age + tail;
}

} // namespace templates

DispatchEngine::DispatchEngine(std::shared_ptr<const Registry> registry, ProcessingMode mode,
                               Clock clock)
    : registry_(std::move(registry)), mode_(mode), clock_(std::move(clock)) {}

void DispatchEngine::set_observer(EngineObserver* observer) {
    std::lock_guard lock(mu_);
    observer_ = observer;
}

Facility DispatchEngine::add_facility(Facility facility) {
    if (!is_valid(facility.home))
        throw Error(Errc::Invalid, "facility home is not a valid location", {{"home", "out of range"}});
    std::lock_guard lock(mu_);
    if (facility.facility_id == 0)
        facility.facility_id = facilities_.empty() ? 1 : facilities_.rbegin()->first + 1;
    auto [it, inserted] = facilities_.try_emplace(facility.facility_id, facility);
    if (!inserted)
        throw Error(Errc::Duplicate, "facility " + std::to_string(facility.facility_id) + " exists");
    if (observer_) observer_->on_facility_changed(facility);
    return facility;
}

Hospital DispatchEngine::add_hospital(Hospital hospital) {
    std::vector<FieldError> errs;
    if (!is_valid(hospital.location)) errs.push_back({"location", "out of range"});
    if (!is_digit_string(hospital.contact_no)) errs.push_back({"contact_no", "must be a digit string"});
    if (hospital.name.empty()) errs.push_back({"name", "must not be empty"});
    if (!errs.empty()) throw Error(Errc::Invalid, "invalid hospital", std::move(errs));

    std::lock_guard lock(mu_);
    if (hospital.hospital_id == 0)
        hospital.hospital_id = hospitals_.empty() ? 1 : hospitals_.rbegin()->first + 1;
    auto [it, inserted] = hospitals_.try_emplace(hospital.hospital_id, hospital);
    if (!inserted)
        throw Error(Errc::Duplicate, "hospital " + std::to_string(hospital.hospital_id) + " exists");
    if (observer_) observer_->on_hospital_added(hospital);
    return hospital;
}

Incident DispatchEngine::open_incident(const EmergencyRequest& request) {
    std::lock_guard lock(mu_);
    Incident inc;
    inc.incident_id = next_incident_++;
    inc.request = request;
    inc.state = IncidentState::Received;
    inc.created_s = inc.updated_s = clock_();
    auto& stored = incidents_.emplace(inc.incident_id, std::move(inc)).first->second;
    if (observer_) observer_->on_incident_opened(stored);

    if (mode_ == ProcessingMode::Auto) {
        try {
            find_locked(stored);
            dispatch_locked(stored, std::nullopt);
            notify_locked(stored);
        } catch (const Error&) {
            // Halted at the last good state; the operator takes it from there.
        }
    }
    return stored;
}

Incident& DispatchEngine::incident_locked(IncidentId id) {
    auto it = incidents_.find(id);
    if (it == incidents_.end())
        throw Error(Errc::UnknownIncident, "no incident " + std::to_string(id));
    return it->second;
}

void DispatchEngine::transition(Incident& inc, IncidentEvent event) {
    inc.state = next_state(inc.state, event);
    inc.updated_s = std::max(clock_(), inc.created_s);
}

void DispatchEngine::find_locked(Incident& inc) {
    auto child = registry_->find_child(inc.request.child_id);
    transition(inc, child ? IncidentEvent::LookupHit : IncidentEvent::LookupMiss);
    inc.child_info = std::move(child);
    if (observer_) observer_->on_incident_updated(inc);
}

void DispatchEngine::dispatch_locked(Incident& inc, const KindFilter& kinds) {
    next_state(inc.state, IncidentEvent::FacilityAssigned);

    std::vector<geo::Candidate> candidates;
    candidates.reserve(facilities_.size());
    for (const auto& [id, f] : facilities_)
        if (f.available && (!kinds || kinds->contains(f.kind))) candidates.push_back({id, f.home});
    auto pick = geo::nearest(inc.request.location, candidates);
    if (!pick)
        throw Error(Errc::NoFacilityAvailable,
                    "no available facility for incident " + std::to_string(inc.incident_id));

    auto& facility = facilities_.at(pick->id);
    facility.available = false;
    inc.facility_id = facility.facility_id;
    transition(inc, IncidentEvent::FacilityAssigned);
    if (observer_) {
        observer_->on_facility_changed(facility);
        observer_->on_incident_updated(inc);
    }
}

OutboundSms& DispatchEngine::push_sms(Incident& inc, std::string to, std::string body,
                                      SmsPurpose purpose) {
    OutboundSms sms;
    sms.sms_id = next_sms_++;
    sms.to_no = std::move(to);
    sms.body = std::move(body);
    sms.purpose = purpose;
    sms.incident_id = inc.incident_id;
    sms.sent_s = clock_();
    inc.notifications.push_back(sms.sms_id);
    return outbox_.emplace_back(std::move(sms));
}

void DispatchEngine::notify_locked(Incident& inc) {
    next_state(inc.state, IncidentEvent::NotificationsSent);

    std::vector<geo::Candidate> candidates;
    candidates.reserve(hospitals_.size());
    for (const auto& [id, h] : hospitals_) candidates.push_back({id, h.location});
    auto pick = geo::nearest(inc.request.location, candidates);
    if (!pick)
        throw Error(Errc::NoHospital, "no hospital registered for incident " +
                                          std::to_string(inc.incident_id));

    const auto& hospital = hospitals_.at(pick->id);
    const auto kind = facilities_.at(*inc.facility_id).kind;
    const auto first = outbox_.size();
    if (inc.child_info) {
        const auto& child = *inc.child_info;
        auto family = templates::family_message(inc, child, kind);
        push_sms(inc, child.father_no, family, SmsPurpose::Father);
        push_sms(inc, child.mother_no, family, SmsPurpose::Mother);
        push_sms(inc, hospital.contact_no, templates::hospital_message(inc, &child, kind),
                 SmsPurpose::Hospital);
    } else {
        push_sms(inc, hospital.contact_no, templates::hospital_message(inc, nullptr, kind),
                 SmsPurpose::Hospital);
    }
    transition(inc, IncidentEvent::NotificationsSent);
    if (observer_) {
        for (auto i = first; i < outbox_.size(); ++i) observer_->on_sms_sent(outbox_[i]);
        observer_->on_incident_updated(inc);
    }
}

Incident DispatchEngine::find_step(IncidentId id) {
    std::lock_guard lock(mu_);
    auto& inc = incident_locked(id);
    find_locked(inc);
    return inc;
}

Incident DispatchEngine::dispatch_step(IncidentId id, const KindFilter& kinds) {
    std::lock_guard lock(mu_);
    auto& inc = incident_locked(id);
    dispatch_locked(inc, kinds);
    return inc;
}

Incident DispatchEngine::notify_step(IncidentId id) {
    std::lock_guard lock(mu_);
    auto& inc = incident_locked(id);
    notify_locked(inc);
    return inc;
}

Incident DispatchEngine::close_incident(IncidentId id) {
    std::lock_guard lock(mu_);
    auto& inc = incident_locked(id);
    transition(inc, IncidentEvent::Close);
    Facility* released = nullptr;
    if (inc.facility_id) {
        released = &facilities_.at(*inc.facility_id);
        released->available = true;
    }
    if (observer_) {
        if (released) observer_->on_facility_changed(*released);
        observer_->on_incident_updated(inc);
    }
    return inc;
}

Incident DispatchEngine::process_incident(IncidentId id) {
    std::lock_guard lock(mu_);
    auto& inc = incident_locked(id);
    find_locked(inc);
    dispatch_locked(inc, std::nullopt);
    notify_locked(inc);
    return inc;
}

std::vector<Incident> DispatchEngine::pending_incidents() const {
    return incidents(IncidentState::Received);
}

std::vector<Incident> DispatchEngine::incidents(std::optional<IncidentState> state) const {
    std::lock_guard lock(mu_);
    std::vector<Incident> out;
    for (const auto& [id, inc] : incidents_)
        if (!state || inc.state == *state) out.push_back(inc);
    return out;
}

std::optional<Incident> DispatchEngine::incident(IncidentId id) const {
    std::lock_guard lock(mu_);
    auto it = incidents_.find(id);
    if (it == incidents_.end()) return std::nullopt;
    return it->second;
}

std::vector<OutboundSms> DispatchEngine::outbox() const {
    std::lock_guard lock(mu_);
    return outbox_;
}

std::vector<Facility> DispatchEngine::facilities() const {
    std::lock_guard lock(mu_);
    std::vector<Facility> out;
    for (const auto& [id, f] : facilities_) out.push_back(f);
    return out;
}

std::vector<Hospital> DispatchEngine::hospitals() const {
    std::lock_guard lock(mu_);
    std::vector<Hospital> out;
    for (const auto& [id, h] : hospitals_) out.push_back(h);
    return out;
}

EngineState DispatchEngine::snapshot() const {
    std::lock_guard lock(mu_);
    EngineState s;
    for (const auto& [id, f] : facilities_) s.facilities.push_back(f);
    for (const auto& [id, h] : hospitals_) s.hospitals.push_back(h);
    for (const auto& [id, inc] : incidents_) s.incidents.push_back(inc);
    s.outbox = outbox_;
    return s;
}

void DispatchEngine::restore(const EngineState& state) {
    std::lock_guard lock(mu_);
    facilities_.clear();
    hospitals_.clear();
    incidents_.clear();
    outbox_ = state.outbox;
    for (const auto& f : state.facilities) facilities_[f.facility_id] = f;
    for (const auto& h : state.hospitals) hospitals_[h.hospital_id] = h;
    for (const auto& inc : state.incidents) incidents_[inc.incident_id] = inc;
    std::sort(outbox_.begin(), outbox_.end(),
              [](const OutboundSms& a, const OutboundSms& b) { return a.sms_id < b.sms_id; });
    next_incident_ = incidents_.empty() ? 1 : incidents_.rbegin()->first + 1;
    next_sms_ = outbox_.empty() ? 1 : outbox_.back().sms_id + 1;
}

} // namespace succor
