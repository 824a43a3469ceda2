/*
 * event_bus.hpp
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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "succor/json_codec.hpp"

namespace succor {

enum class EventKind { IncidentOpened, IncidentUpdated, SmsSent };

std::string_view to_string(EventKind k);

struct EventEnvelope {
    std::uint64_t seq = 0;
    EventKind kind = EventKind::IncidentOpened;
    json payload;

    json to_json() const;
};

/// A subscriber's bounded mailbox. Once closed (by the subscriber, by the
/// bus on overflow, or at shutdown) it stays closed; queued envelopes can
/// still be drained.
class Subscription {
public:
    explicit Subscription(std::size_t capacity) : capacity_(capacity) {}

    /// Next envelope, or nullopt on timeout or when closed and drained.
    std::optional<EventEnvelope> pop(std::chrono::milliseconds timeout);
    bool closed() const;
    void close();

private:
    friend class EventBus;
    bool offer(const EventEnvelope& env);  // false when full: caller drops us

    std::size_t capacity_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<EventEnvelope> queue_;
    bool closed_ = false;
};

/// Fan-out of engine events to live subscribers in seq order. A subscriber
/// that falls `capacity` envelopes behind is disconnected; publish never blocks.
class EventBus {
public:
    std::shared_ptr<Subscription> subscribe(std::size_t capacity = 4096);
    void unsubscribe(const std::shared_ptr<Subscription>& sub);

    /// Assigns the next seq (starting at 1) and delivers to all subscribers.
    EventEnvelope publish(EventKind kind, json payload);

    void close_all();
    std::size_t subscriber_count() const;

private:
    mutable std::mutex mu_;
    std::uint64_t next_seq_ = 1;
    std::vector<std::shared_ptr<Subscription>> subs_;
};

} // namespace succor
