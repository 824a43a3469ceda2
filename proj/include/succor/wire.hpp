/*
 * wire.hpp
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

// Request line grammar shared by the SMS and GPRS transports:
//
//   SUCCOR/1 <child_id> <lat> <lon> <ts>
//
// Single spaces, child_id 1-10 digits, coordinates with exactly six
// fractional digits and an optional leading minus, ts a non-negative decimal
// integer without leading zeros. Lines longer than 160 octets are refused.
// Only the canonical rendering is accepted, so parse(line) succeeding
// implies encode(parse(line)) == line.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "succor/domain.hpp"

namespace succor::wire {

inline constexpr std::string_view kMagic = "SUCCOR/1";

std::string encode_request(const EmergencyRequest& req);

/// Throws Error with one of BadMagic, BadFieldCount, BadNumber, OutOfRange,
/// TooLong. Checks run in that order of precedence except TooLong, which is
/// checked first.
EmergencyRequest parse_request(std::string_view line, Transport transport);

/// Six fractional digits, as used in request lines and notification bodies.
std::string format_coordinate(double degrees);

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    std::string to_string() const;
    bool operator==(const Endpoint&) const = default;
    auto operator<=>(const Endpoint&) const = default;
};

/// Parses "host:port". Throws Error{BadRequest} on malformed input.
Endpoint parse_endpoint(std::string_view text);

/// Control line retargeting a terminal, without terminator.
std::string encode_setaddr(const Endpoint& ep);
std::optional<Endpoint> parse_setaddr(std::string_view line);

std::string encode_ack(std::uint64_t incident_id);
std::string encode_err(Errc code);

} // namespace succor::wire
