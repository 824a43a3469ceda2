/*
 * domain.hpp
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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "succor/error.hpp"

namespace succor {

using IncidentId = std::uint64_t;
using FacilityId = std::uint64_t;
using HospitalId = std::uint64_t;
using SmsId = std::uint64_t;
using UnixSeconds = std::int64_t;

// Field bounds of the registration table.
inline constexpr std::size_t kMaxChildIdDigits = 10;
inline constexpr std::size_t kMaxNameChars = 20;
inline constexpr std::size_t kMaxAgeChars = 7;
inline constexpr std::size_t kMaxPhoneDigits = 15;
inline constexpr std::size_t kMaxDiseaseChars = 20;
inline constexpr int kMaxAgeYears = 150;
inline constexpr std::size_t kMaxSmsOctets = 160;

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    bool operator==(const GeoPoint&) const = default;
};

bool is_valid(const GeoPoint& p) noexcept;

enum class Transport { Sms, Gprs };

/// One row of the registration table, keyed by child_id (the terminal's
/// phone number). Phone-like fields are digit-strings so leading zeros and
/// numbers wider than 32 bits survive storage.
struct ChildRecord {
    std::string child_id;
    std::string name;
    std::string age;
    std::string father_no;
    std::string mother_no;
    std::string disease_name;

    bool operator==(const ChildRecord&) const = default;
};

struct ValidationResult {
    std::vector<FieldError> errors;

    bool ok() const noexcept { return errors.empty(); }
    bool names(std::string_view field) const;
};

/// Checks every ChildRecord invariant. Each violated field appears exactly
/// once in the result, in declaration order.
ValidationResult validate_child(const ChildRecord& record);

bool is_digit_string(std::string_view s) noexcept;

struct EmergencyRequest {
    std::string child_id;
    GeoPoint location;
    UnixSeconds timestamp_s = 0;
    Transport transport = Transport::Sms;

    bool operator==(const EmergencyRequest&) const = default;
};

enum class IncidentState { Received, Identified, Unidentified, Dispatched, Notified, Closed };
enum class IncidentEvent { LookupHit, LookupMiss, FacilityAssigned, NotificationsSent, Close };

inline constexpr std::array<IncidentState, 6> kAllStates{
    IncidentState::Received,   IncidentState::Identified, IncidentState::Unidentified,
    IncidentState::Dispatched, IncidentState::Notified,   IncidentState::Closed};
inline constexpr std::array<IncidentEvent, 5> kAllEvents{
    IncidentEvent::LookupHit, IncidentEvent::LookupMiss, IncidentEvent::FacilityAssigned,
    IncidentEvent::NotificationsSent, IncidentEvent::Close};

/// Successor of `current` under `event`. Throws Error{InvalidTransition} for
/// any pair outside the six lifecycle edges.
IncidentState next_state(IncidentState current, IncidentEvent event);

enum class FacilityKind { Car, Helicopter, Lifeboat };

struct Facility {
    FacilityId facility_id = 0;
    FacilityKind kind = FacilityKind::Car;
    GeoPoint home;
    bool available = true;

    bool operator==(const Facility&) const = default;
};

struct Hospital {
    HospitalId hospital_id = 0;
    std::string name;
    GeoPoint location;
    std::string contact_no;

    bool operator==(const Hospital&) const = default;
};

enum class SmsPurpose { Father, Mother, Hospital, TerminalAck };

struct OutboundSms {
    SmsId sms_id = 0;
    std::string to_no;
    std::string body;
    SmsPurpose purpose = SmsPurpose::Hospital;
    IncidentId incident_id = 0;
    UnixSeconds sent_s = 0;

    bool operator==(const OutboundSms&) const = default;
};

struct Incident {
    IncidentId incident_id = 0;
    EmergencyRequest request;
    IncidentState state = IncidentState::Received;
    std::optional<ChildRecord> child_info;
    std::optional<FacilityId> facility_id;
    std::vector<SmsId> notifications;
    UnixSeconds created_s = 0;
    UnixSeconds updated_s = 0;

    bool operator==(const Incident&) const = default;
};

std::string_view to_string(Transport t);
std::string_view to_string(IncidentState s);
std::string_view to_string(IncidentEvent e);
std::string_view to_string(FacilityKind k);
std::string_view to_string(SmsPurpose p);

// Inverse of to_string; nullopt on unknown names.
std::optional<Transport> transport_from_string(std::string_view s);
std::optional<IncidentState> state_from_string(std::string_view s);
std::optional<FacilityKind> facility_kind_from_string(std::string_view s);
std::optional<SmsPurpose> purpose_from_string(std::string_view s);

} // namespace succor
