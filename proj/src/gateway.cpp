/*
 * gateway.cpp
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

#include "succor/gateway.hpp"

#include <iostream>

namespace succor {

IngestedRequest ingest_sms(const InboundMessage& msg) {
    if (!is_digit_string(msg.from_no))
        throw Error(Errc::BadNumber, "sender number must be a digit string");
    IngestedRequest out;
    out.request = wire::parse_request(msg.body, Transport::Sms);
    out.from_no = msg.from_no;
    out.sender_mismatch = out.request.child_id != msg.from_no;
    return out;
}

SmsGateway::Outcome SmsGateway::deliver(const InboundMessage& msg) {
    Outcome outcome;
    try {
        outcome.request = ingest_sms(msg);
    } catch (const Error& e) {
        ++errors_;
        outcome.error = e.code();
        std::clog << "sms from " << msg.from_no << " dropped: " << to_string(e.code()) << ": "
                  << e.what() << "\n";
        return outcome;
    }
    ++accepted_;
    if (sink_) outcome.incident_id = sink_(*outcome.request);
    return outcome;
}

std::vector<LineBuffer::Line> LineBuffer::feed(std::string_view chunk) {
    std::vector<Line> out;
    for (char c : chunk) {
        if (c == '\n') {
            if (discarding_) {
                discarding_ = false;
            } else {
                if (!pending_.empty() && pending_.back() == '\r') pending_.pop_back();
                bool overlong = pending_.size() > max_;
                out.push_back({overlong ? std::string{} : std::move(pending_), overlong});
            }
            pending_.clear();
            continue;
        }
        if (discarding_) continue;
        pending_.push_back(c);
        // One octet of slack for a CR before the newline.
        if (pending_.size() > max_ + 1) {
            out.push_back({std::string{}, true});
            pending_.clear();
            discarding_ = true;
        }
    }
    return out;
}

SetaddrAck send_setaddr(ControlChannel& channel, std::string_view terminal_id,
                        const wire::Endpoint& new_endpoint) {
    channel.deliver_control(terminal_id, wire::encode_setaddr(new_endpoint));
    return SetaddrAck{std::string(terminal_id), new_endpoint};
}

} // namespace succor
