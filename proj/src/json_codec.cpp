/*
 * json_codec.cpp
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

#include "succor/json_codec.hpp"

namespace succor {

namespace {

template <typename Enum>
Enum enum_from(const json& j, std::optional<Enum> (*parse)(std::string_view), const char* what) {
    auto parsed = parse(j.get<std::string>());
    if (!parsed) throw Error(Errc::BadRequest, std::string("unknown ") + what + " '" + j.get<std::string>() + "'");
    return *parsed;
}

} // namespace

void to_json(json& j, const GeoPoint& p) { j = json{{"lat_deg", p.lat_deg}, {"lon_deg", p.lon_deg}}; }

void from_json(const json& j, GeoPoint& p) {
    p.lat_deg = j.at("lat_deg").get<double>();
    p.lon_deg = j.at("lon_deg").get<double>();
}

void to_json(json& j, const ChildRecord& r) {
    j = json{{"child_id", r.child_id},   {"name", r.name},           {"age", r.age},
             {"father_no", r.father_no}, {"mother_no", r.mother_no}, {"disease_name", r.disease_name}};
}

void from_json(const json& j, ChildRecord& r) {
    r.child_id = j.at("child_id").get<std::string>();
    r.name = j.at("name").get<std::string>();
    r.age = j.at("age").get<std::string>();
    r.father_no = j.at("father_no").get<std::string>();
    r.mother_no = j.at("mother_no").get<std::string>();
    r.disease_name = j.at("disease_name").get<std::string>();
}

ChildRecord child_from_request(const json& j) {
    if (!j.is_object()) throw Error(Errc::BadRequest, "child record must be a JSON object");
    std::vector<FieldError> errs;
    auto field = [&](const char* name) -> std::string {
        auto it = j.find(name);
        if (it == j.end() || it->is_null()) return {};
        if (!it->is_string()) {
            errs.push_back({name, "must be a string"});
            return {};
        }
        return it->get<std::string>();
    };
    ChildRecord r{field("child_id"), field("name"),      field("age"),
                  field("father_no"), field("mother_no"), field("disease_name")};
    if (!errs.empty()) throw Error(Errc::Invalid, "invalid child record", std::move(errs));
    return r;
}

void to_json(json& j, const EmergencyRequest& r) {
    j = json{{"child_id", r.child_id},
             {"location", r.location},
             {"timestamp_s", r.timestamp_s},
             {"transport", to_string(r.transport)}};
}

void from_json(const json& j, EmergencyRequest& r) {
    r.child_id = j.at("child_id").get<std::string>();
    r.location = j.at("location").get<GeoPoint>();
    r.timestamp_s = j.at("timestamp_s").get<UnixSeconds>();
    r.transport = enum_from<Transport>(j.at("transport"), &transport_from_string, "transport");
}

void to_json(json& j, const Incident& inc) {
    j = json{{"incident_id", inc.incident_id},
             {"request", inc.request},
             {"state", to_string(inc.state)},
             {"child_info", inc.child_info ? json(*inc.child_info) : json(nullptr)},
             {"facility_id", inc.facility_id ? json(*inc.facility_id) : json(nullptr)},
             {"notifications", inc.notifications},
             {"created_s", inc.created_s},
             {"updated_s", inc.updated_s}};
}

void from_json(const json& j, Incident& inc) {
    inc.incident_id = j.at("incident_id").get<IncidentId>();
    inc.request = j.at("request").get<EmergencyRequest>();
    inc.state = enum_from<IncidentState>(j.at("state"), &state_from_string, "state");
    const auto& child = j.at("child_info");
    inc.child_info = child.is_null() ? std::nullopt : std::optional(child.get<ChildRecord>());
    const auto& fac = j.at("facility_id");
    inc.facility_id = fac.is_null() ? std::nullopt : std::optional(fac.get<FacilityId>());
    inc.notifications = j.at("notifications").get<std::vector<SmsId>>();
    inc.created_s = j.at("created_s").get<UnixSeconds>();
    inc.updated_s = j.at("updated_s").get<UnixSeconds>();
}

void to_json(json& j, const Facility& f) {
    j = json{{"facility_id", f.facility_id},
             {"kind", to_string(f.kind)},
             {"home", f.home},
             {"available", f.available}};
}

void from_json(const json& j, Facility& f) {
    f.facility_id = j.at("facility_id").get<FacilityId>();
    f.kind = enum_from<FacilityKind>(j.at("kind"), &facility_kind_from_string, "facility kind");
    f.home = j.at("home").get<GeoPoint>();
    f.available = j.at("available").get<bool>();
}

Facility facility_from_request(const json& j) {
    Facility f;
    f.facility_id = j.value("facility_id", FacilityId{0});
    f.kind = enum_from<FacilityKind>(j.at("kind"), &facility_kind_from_string, "facility kind");
    f.home = j.at("home").get<GeoPoint>();
    f.available = j.value("available", true);
    return f;
}

void to_json(json& j, const Hospital& h) {
    j = json{{"hospital_id", h.hospital_id},
             {"name", h.name},
             {"location", h.location},
             {"contact_no", h.contact_no}};
}

void from_json(const json& j, Hospital& h) {
    h.hospital_id = j.at("hospital_id").get<HospitalId>();
    h.name = j.at("name").get<std::string>();
    h.location = j.at("location").get<GeoPoint>();
    h.contact_no = j.at("contact_no").get<std::string>();
}

Hospital hospital_from_request(const json& j) {
    Hospital h;
    h.hospital_id = j.value("hospital_id", HospitalId{0});
    h.name = j.at("name").get<std::string>();
    h.location = j.at("location").get<GeoPoint>();
    h.contact_no = j.at("contact_no").get<std::string>();
    return h;
}

void to_json(json& j, const OutboundSms& s) {
    j = json{{"sms_id", s.sms_id},
             {"to_no", s.to_no},
             {"body", s.body},
             {"purpose", to_string(s.purpose)},
             {"incident_id", s.incident_id},
             {"sent_s", s.sent_s}};
}

void from_json(const json& j, OutboundSms& s) {
    s.sms_id = j.at("sms_id").get<SmsId>();
    s.to_no = j.at("to_no").get<std::string>();
    s.body = j.at("body").get<std::string>();
    s.purpose = enum_from<SmsPurpose>(j.at("purpose"), &purpose_from_string, "purpose");
    s.incident_id = j.at("incident_id").get<IncidentId>();
    s.sent_s = j.at("sent_s").get<UnixSeconds>();
}

void to_json(json& j, const FieldError& e) { j = json{{"field", e.field}, {"message", e.message}}; }

} // namespace succor
