/*
 * wire.cpp
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

#include "succor/wire.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <vector>

namespace succor::wire {

namespace {

constexpr std::size_t kFieldCount = 5;
constexpr std::string_view kSetaddr = "SETADDR ";

bool all_digits(std::string_view s) {
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return !s.empty();
}

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(' ', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

[[noreturn]] void fail(Errc code, std::string message) { throw Error(code, std::move(message)); }

struct Coordinate {
    double value;
    bool in_range;
};

// Accepts only -?(0|[1-9][0-9]*)\.[0-9]{6}. The value is rebuilt from the
// integer count of micro-degrees so it matches what encode_request printed.
Coordinate parse_coordinate(std::string_view tok, double limit, const char* what) {
    bool negative = !tok.empty() && tok.front() == '-';
    if (negative) tok.remove_prefix(1);
    auto dot = tok.find('.');
    if (dot == std::string_view::npos) fail(Errc::BadNumber, std::string(what) + " lacks a decimal point");
    auto whole = tok.substr(0, dot);
    auto frac = tok.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac) || frac.size() != 6 ||
        (whole.size() > 1 && whole.front() == '0'))
        fail(Errc::BadNumber, std::string(what) + " is not a canonical 6-decimal number");
    if (whole.size() > 3) return {0.0, false};

    std::int64_t micro = 0;
    for (char c : whole) micro = micro * 10 + (c - '0');
    for (char c : frac) micro = micro * 10 + (c - '0');
    double value = static_cast<double>(micro) / 1e6;
    if (negative) value = -value;
    return {value, value >= -limit && value <= limit};
}

} // namespace

std::string format_coordinate(double degrees) {
    std::array<char, 48> buf{};
    int n = std::snprintf(buf.data(), buf.size(), "%.6f", degrees);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::string encode_request(const EmergencyRequest& req) {
    std::string out;
    out.reserve(64);
    out.append(kMagic);
    out.push_back(' ');
    out.append(req.child_id);
    out.push_back(' ');
    out.append(format_coordinate(req.location.lat_deg));
    out.push_back(' ');
    out.append(format_coordinate(req.location.lon_deg));
    out.push_back(' ');
    out.append(std::to_string(req.timestamp_s));
    return out;
}

EmergencyRequest parse_request(std::string_view line, Transport transport) {
    if (line.size() > kMaxSmsOctets)
        fail(Errc::TooLong, "line is " + std::to_string(line.size()) + " octets");

    auto tokens = split_spaces(line);
    if (tokens.front() != kMagic) fail(Errc::BadMagic, "first token is not SUCCOR/1");
    if (tokens.size() != kFieldCount)
        fail(Errc::BadFieldCount, "expected 5 fields, got " + std::to_string(tokens.size()));

    auto id = tokens[1];
    if (!all_digits(id) || id.size() > kMaxChildIdDigits)
        fail(Errc::BadNumber, "child id must be 1-10 digits");

    auto lat = parse_coordinate(tokens[2], 90.0, "latitude");
    auto lon = parse_coordinate(tokens[3], 180.0, "longitude");

    auto ts_tok = tokens[4];
    if (!all_digits(ts_tok) || (ts_tok.size() > 1 && ts_tok.front() == '0'))
        fail(Errc::BadNumber, "timestamp is not a canonical non-negative integer");
    UnixSeconds ts = 0;
    auto [ptr, ec] = std::from_chars(ts_tok.data(), ts_tok.data() + ts_tok.size(), ts);
    if (ec != std::errc{} || ptr != ts_tok.data() + ts_tok.size())
        fail(Errc::BadNumber, "timestamp does not fit 64 bits");

    if (!lat.in_range) fail(Errc::OutOfRange, "latitude outside [-90, 90]");
    if (!lon.in_range) fail(Errc::OutOfRange, "longitude outside [-180, 180]");

    return EmergencyRequest{std::string(id), GeoPoint{lat.value, lon.value}, ts, transport};
}

std::string Endpoint::to_string() const { return host + ":" + std::to_string(port); }

Endpoint parse_endpoint(std::string_view text) {
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
        throw Error(Errc::BadRequest, "endpoint must be HOST:PORT");
    auto host = text.substr(0, colon);
    auto port_tok = text.substr(colon + 1);
    unsigned port = 0;
    auto [ptr, ec] = std::from_chars(port_tok.data(), port_tok.data() + port_tok.size(), port);
    if (port_tok.empty() || ec != std::errc{} || ptr != port_tok.data() + port_tok.size() || port > 65535)
        throw Error(Errc::BadRequest, "bad port in endpoint '" + std::string(text) + "'");
    for (char c : host)
        if (c <= ' ' || c > '~') throw Error(Errc::BadRequest, "bad host in endpoint");
    return Endpoint{std::string(host), static_cast<std::uint16_t>(port)};
}

std::string encode_setaddr(const Endpoint& ep) { return std::string(kSetaddr) + ep.to_string(); }

std::optional<Endpoint> parse_setaddr(std::string_view line) {
    if (line.substr(0, kSetaddr.size()) != kSetaddr) return std::nullopt;
    try {
        return parse_endpoint(line.substr(kSetaddr.size()));
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::string encode_ack(std::uint64_t incident_id) { return "ACK " + std::to_string(incident_id); }

std::string encode_err(Errc code) { return "ERR " + std::string(succor::to_string(code)); }

} // namespace succor::wire
