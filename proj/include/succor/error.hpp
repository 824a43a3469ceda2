/*
 * error.hpp
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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace succor {

enum class Errc {
    // registry
    Duplicate,
    Invalid,
    // incident lifecycle / dispatch
    InvalidTransition,
    UnknownIncident,
    NoFacilityAvailable,
    NoHospital,
    // wire grammar
    BadMagic,
    BadFieldCount,
    BadNumber,
    OutOfRange,
    TooLong,
    // terminal control
    UnknownTerminal,
    Undeliverable,
    // simulator / service
    InvalidScenario,
    CorruptLog,
    BadRequest,
    Io,
};

std::string_view to_string(Errc code);

struct FieldError {
    std::string field;
    std::string message;

    bool operator==(const FieldError&) const = default;
};

// Every failure the library reports is an Error carrying a stable code. The
// code's string form is what goes on the wire (HTTP bodies, GPRS ERR lines).
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, std::vector<FieldError> fields = {})
        : std::runtime_error(std::move(message)), code_(code), fields_(std::move(fields)) {}

    Errc code() const noexcept { return code_; }
    const std::vector<FieldError>& fields() const noexcept { return fields_; }

private:
    Errc code_;
    std::vector<FieldError> fields_;
};

} // namespace succor
