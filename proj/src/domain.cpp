/*
 * domain.cpp
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

#include "succor/domain.hpp"

#include <algorithm>
#include <cmath>

namespace succor {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::Duplicate: return "Duplicate";
    case Errc::Invalid: return "Invalid";
    case Errc::InvalidTransition: return "InvalidTransition";
    case Errc::UnknownIncident: return "UnknownIncident";
    case Errc::NoFacilityAvailable: return "NoFacilityAvailable";
    case Errc::NoHospital: return "NoHospital";
    case Errc::BadMagic: return "BadMagic";
    case Errc::BadFieldCount: return "BadFieldCount";
    case Errc::BadNumber: return "BadNumber";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::TooLong: return "TooLong";
    case Errc::UnknownTerminal: return "UnknownTerminal";
    case Errc::Undeliverable: return "Undeliverable";
    case Errc::InvalidScenario: return "InvalidScenario";
    case Errc::CorruptLog: return "CorruptLog";
    case Errc::BadRequest: return "BadRequest";
    case Errc::Io: return "Io";
    }
    return "Unknown";
}

bool is_valid(const GeoPoint& p) noexcept {
    return std::isfinite(p.lat_deg) && std::isfinite(p.lon_deg) && p.lat_deg >= -90.0 &&
           p.lat_deg <= 90.0 && p.lon_deg >= -180.0 && p.lon_deg <= 180.0;
}

bool is_digit_string(std::string_view s) noexcept {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool ValidationResult::names(std::string_view field) const {
    return std::any_of(errors.begin(), errors.end(),
                       [&](const FieldError& e) { return e.field == field; });
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

// Free text travels inside 160-octet SMS bodies, so it is held to
// printable ASCII where one character is one octet.
bool is_printable_ascii(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= 0x20 && c <= 0x7e; });
}

void check_text(std::vector<FieldError>& out, const char* field, std::string_view value,
                std::size_t max_chars) {
    if (trim(value).empty())
        out.push_back({field, "must not be empty"});
    else if (value.size() > max_chars)
        out.push_back({field, "longer than " + std::to_string(max_chars) + " characters"});
    else if (!is_printable_ascii(value))
        out.push_back({field, "must be printable ASCII"});
}

void check_digits(std::vector<FieldError>& out, const char* field, std::string_view value,
                  std::size_t max_digits) {
    if (!is_digit_string(value))
        out.push_back({field, "must be a non-empty digit string"});
    else if (value.size() > max_digits)
        out.push_back({field, "longer than " + std::to_string(max_digits) + " digits"});
}

} // namespace

ValidationResult validate_child(const ChildRecord& r) {
    ValidationResult result;
    auto& errs = result.errors;
    check_digits(errs, "child_id", r.child_id, kMaxChildIdDigits);
    check_text(errs, "name", r.name, kMaxNameChars);

    if (!is_digit_string(r.age) || r.age.size() > kMaxAgeChars)
        errs.push_back({"age", "must be a non-negative integer"});
    else if (std::stoi(r.age) > kMaxAgeYears)
        errs.push_back({"age", "must be at most " + std::to_string(kMaxAgeYears)});

    check_digits(errs, "father_no", r.father_no, kMaxPhoneDigits);
    check_digits(errs, "mother_no", r.mother_no, kMaxPhoneDigits);
    check_text(errs, "disease_name", r.disease_name, kMaxDiseaseChars);
    return result;
}

IncidentState next_state(IncidentState current, IncidentEvent event) {
    using S = IncidentState;
    using E = IncidentEvent;
    switch (current) {
    case S::Received:
        if (event == E::LookupHit) return S::Identified;
        if (event == E::LookupMiss) return S::Unidentified;
        break;
    case S::Identified:
    case S::Unidentified:
        if (event == E::FacilityAssigned) return S::Dispatched;
        break;
    case S::Dispatched:
        if (event == E::NotificationsSent) return S::Notified;
        break;
    case S::Notified:
        if (event == E::Close) return S::Closed;
        break;
    case S::Closed:
        break;
    }
    throw Error(Errc::InvalidTransition, "no transition from " + std::string(to_string(current)) +
                                             " on " + std::string(to_string(event)));
}

std::string_view to_string(Transport t) { return t == Transport::Sms ? "SMS" : "GPRS"; }

std::string_view to_string(IncidentState s) {
    switch (s) {
    case IncidentState::Received: return "RECEIVED";
    case IncidentState::Identified: return "IDENTIFIED";
    case IncidentState::Unidentified: return "UNIDENTIFIED";
    case IncidentState::Dispatched: return "DISPATCHED";
    case IncidentState::Notified: return "NOTIFIED";
    case IncidentState::Closed: return "CLOSED";
    }
    return "?";
}

std::string_view to_string(IncidentEvent e) {
    switch (e) {
    case IncidentEvent::LookupHit: return "LOOKUP_HIT";
    case IncidentEvent::LookupMiss: return "LOOKUP_MISS";
    case IncidentEvent::FacilityAssigned: return "FACILITY_ASSIGNED";
    case IncidentEvent::NotificationsSent: return "NOTIFICATIONS_SENT";
    case IncidentEvent::Close: return "CLOSE";
    }
    return "?";
}

std::string_view to_string(FacilityKind k) {
    switch (k) {
    case FacilityKind::Car: return "Car";
    case FacilityKind::Helicopter: return "Helicopter";
    case FacilityKind::Lifeboat: return "Lifeboat";
    }
    return "?";
}

std::string_view to_string(SmsPurpose p) {
    switch (p) {
    case SmsPurpose::Father: return "FATHER";
    case SmsPurpose::Mother: return "MOTHER";
    case SmsPurpose::Hospital: return "HOSPITAL";
    case SmsPurpose::TerminalAck: return "TERMINAL_ACK";
    }
    return "?";
}

namespace {
template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::array<Enum, N>& all) {
    for (Enum v : all)
        if (to_string(v) == s) return v;
    return std::nullopt;
}
} // namespace

std::optional<Transport> transport_from_string(std::string_view s) {
    return lookup(s, std::array{Transport::Sms, Transport::Gprs});
}

std::optional<IncidentState> state_from_string(std::string_view s) { return lookup(s, kAllStates); }

std::optional<FacilityKind> facility_kind_from_string(std::string_view s) {
    return lookup(s, std::array{FacilityKind::Car, FacilityKind::Helicopter, FacilityKind::Lifeboat});
}

std::optional<SmsPurpose> purpose_from_string(std::string_view s) {
    return lookup(s, std::array{SmsPurpose::Father, SmsPurpose::Mother, SmsPurpose::Hospital,
                                SmsPurpose::TerminalAck});
}

} // namespace succor
