/*
 * persistence.cpp
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

#include "succor/persistence.hpp"

#include <functional>
#include <map>

namespace succor {

namespace fs = std::filesystem;

namespace {

using RecordHandler = std::function<void(std::string_view type, const json& data)>;

// Returns the last sequence number seen.
std::uint64_t read_log(const fs::path& path, const RecordHandler& handle) {
    std::ifstream in(path);
    if (!in) return 0;
    std::uint64_t last = 0;
    std::string line;
    std::size_t lineno = 0;
    auto corrupt = [&](const std::string& why) {
        return Error(Errc::CorruptLog,
                     path.filename().string() + ":" + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception&) {
            throw corrupt("not valid JSON");
        }
        std::uint64_t seq = 0;
        try {
            seq = rec.at("seq").get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw corrupt(e.what());
        }
        if (seq <= last) throw corrupt("sequence number " + std::to_string(seq) + " does not increase");
        last = seq;
        try {
            handle(rec.at("type").get<std::string>(), rec.at("data"));
        } catch (const json::exception& e) {
            throw corrupt(e.what());
        } catch (const Error& e) {
            throw corrupt(e.what());
        }
    }
    if (!in.eof()) throw corrupt("read error");
    return last;
}

[[noreturn]] void unexpected_type(std::string_view type) {
    throw Error(Errc::CorruptLog, "unexpected record type '" + std::string(type) + "'");
}

} // namespace

PersistentLog::PersistentLog(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(Errc::Io, "cannot create data dir " + dir_.string() + ": " + ec.message());
    children_.path = dir_ / "children.log";
    incidents_.path = dir_ / "incidents.log";
    outbox_.path = dir_ / "outbox.log";
    resources_.path = dir_ / "resources.log";
}

ReplayedState PersistentLog::replay() {
    std::lock_guard lock(mu_);
    ReplayedState state;

    children_.last_seq = read_log(children_.path, [&](std::string_view type, const json& data) {
        if (type != "child") unexpected_type(type);
        state.children.push_back(data.get<ChildRecord>());
    });

    std::map<IncidentId, Incident> incidents;
    incidents_.last_seq = read_log(incidents_.path, [&](std::string_view type, const json& data) {
        if (type != "incident") unexpected_type(type);
        auto inc = data.get<Incident>();
        incidents[inc.incident_id] = std::move(inc);
    });

    std::map<SmsId, OutboundSms> outbox;
    outbox_.last_seq = read_log(outbox_.path, [&](std::string_view type, const json& data) {
        if (type != "sms") unexpected_type(type);
        auto sms = data.get<OutboundSms>();
        if (outbox.contains(sms.sms_id))
            throw Error(Errc::CorruptLog, "duplicate sms id " + std::to_string(sms.sms_id));
        outbox[sms.sms_id] = std::move(sms);
    });

    std::map<FacilityId, Facility> facilities;
    std::map<HospitalId, Hospital> hospitals;
    resources_.last_seq = read_log(resources_.path, [&](std::string_view type, const json& data) {
        if (type == "facility") {
            auto f = data.get<Facility>();
            facilities[f.facility_id] = f;
        } else if (type == "hospital") {
            auto h = data.get<Hospital>();
            hospitals[h.hospital_id] = h;
        } else {
            unexpected_type(type);
        }
    });

    for (auto& [id, inc] : incidents) state.engine.incidents.push_back(std::move(inc));
    for (auto& [id, sms] : outbox) state.engine.outbox.push_back(std::move(sms));
    for (auto& [id, f] : facilities) state.engine.facilities.push_back(f);
    for (auto& [id, h] : hospitals) state.engine.hospitals.push_back(h);
    return state;
}

void PersistentLog::open_for_append(File& file) {
    if (file.out.is_open()) return;
    file.out.open(file.path, std::ios::app | std::ios::binary);
    if (!file.out) throw Error(Errc::Io, "cannot open " + file.path.string() + " for append");
}

void PersistentLog::append(File& file, std::string_view type, json data) {
    std::lock_guard lock(mu_);
    open_for_append(file);
    json rec{{"seq", file.last_seq + 1}, {"type", type}, {"data", std::move(data)}};
    file.out << rec.dump() << '\n';
    file.out.flush();
    if (!file.out) throw Error(Errc::Io, "write to " + file.path.string() + " failed");
    ++file.last_seq;
}

void PersistentLog::append_child(const ChildRecord& r) { append(children_, "child", r); }
void PersistentLog::append_incident(const Incident& inc) { append(incidents_, "incident", inc); }
void PersistentLog::append_sms(const OutboundSms& sms) { append(outbox_, "sms", sms); }
void PersistentLog::append_facility(const Facility& f) { append(resources_, "facility", f); }
void PersistentLog::append_hospital(const Hospital& h) { append(resources_, "hospital", h); }

} // namespace succor
