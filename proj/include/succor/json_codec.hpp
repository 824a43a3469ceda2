/*
 * json_codec.hpp
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

// JSON forms of the domain types, shared by the HTTP API, the persistent
// logs, the event stream and scenario/report files.

#include <json.hpp>

#include "succor/dispatch.hpp"
#include "succor/domain.hpp"

namespace succor {

using json = nlohmann::json;

void to_json(json& j, const GeoPoint& p);
void from_json(const json& j, GeoPoint& p);
void to_json(json& j, const ChildRecord& r);
void from_json(const json& j, ChildRecord& r);
void to_json(json& j, const EmergencyRequest& r);
void from_json(const json& j, EmergencyRequest& r);
void to_json(json& j, const Incident& inc);
void from_json(const json& j, Incident& inc);
void to_json(json& j, const Facility& f);
void from_json(const json& j, Facility& f);
void to_json(json& j, const Hospital& h);
void from_json(const json& j, Hospital& h);
void to_json(json& j, const OutboundSms& s);
void from_json(const json& j, OutboundSms& s);
void to_json(json& j, const FieldError& e);

/// Lenient decode for request bodies: missing fields become empty strings
/// and are reported by validation; a non-string field throws Error{Invalid}
/// naming it.
ChildRecord child_from_request(const json& j);

/// Facility/hospital bodies where the id may be omitted (assigned later).
Facility facility_from_request(const json& j);
Hospital hospital_from_request(const json& j);

} // namespace succor
