/*
 * persistence.hpp
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

// Append-only record logs in a data directory:
//
//   children.log   one "child" record per registration
//   incidents.log  an "incident" snapshot after every lifecycle change
//   outbox.log     one "sms" record per outbound message
//   resources.log  "facility" / "hospital" snapshots
//
// Each line is a canonical JSON object {"data":..,"seq":N,"type":".."} with
// seq strictly increasing per file. Replay keeps the last snapshot per id.
// Any malformed line aborts replay with the file name and line number.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "succor/dispatch.hpp"
#include "succor/domain.hpp"
#include "succor/json_codec.hpp"

namespace succor {

struct ReplayedState {
    std::vector<ChildRecord> children;
    EngineState engine;
};

class PersistentLog {
public:
    /// Creates the directory if needed. Throws Error{Io}.
    explicit PersistentLog(std::filesystem::path dir);

    PersistentLog(const PersistentLog&) = delete;
    PersistentLog& operator=(const PersistentLog&) = delete;

    /// Reads every log from the start. Throws Error{CorruptLog} naming
    /// file:line for the first bad record. Must run before any append so
    /// sequence numbers continue where the files left off.
    ReplayedState replay();

    void append_child(const ChildRecord& r);
    void append_incident(const Incident& inc);
    void append_sms(const OutboundSms& sms);
    void append_facility(const Facility& f);
    void append_hospital(const Hospital& h);

    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    struct File {
        std::filesystem::path path;
        std::ofstream out;
        std::uint64_t last_seq = 0;
    };

    void append(File& file, std::string_view type, json data);
    void open_for_append(File& file);

    std::filesystem::path dir_;
    std::mutex mu_;
    File children_, incidents_, outbox_, resources_;
};

} // namespace succor
