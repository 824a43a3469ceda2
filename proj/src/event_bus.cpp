/*
 * event_bus.cpp
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

#include "succor/event_bus.hpp"

#include <algorithm>

namespace succor {

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::IncidentOpened: return "INCIDENT_OPENED";
    case EventKind::IncidentUpdated: return "INCIDENT_UPDATED";
    case EventKind::SmsSent: return "SMS_SENT";
    }
    return "?";
}

json EventEnvelope::to_json() const {
    return json{{"seq", seq}, {"kind", succor::to_string(kind)}, {"payload", payload}};
}

std::optional<EventEnvelope> Subscription::pop(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return std::nullopt;
    auto env = std::move(queue_.front());
    queue_.pop_front();
    return env;
}

bool Subscription::closed() const {
    std::lock_guard lock(mu_);
    return closed_;
}

void Subscription::close() {
    {
        std::lock_guard lock(mu_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool Subscription::offer(const EventEnvelope& env) {
    {
        std::lock_guard lock(mu_);
        if (closed_) return false;
        if (queue_.size() >= capacity_) {
            closed_ = true;
        } else {
            queue_.push_back(env);
        }
    }
    cv_.notify_all();
    return !closed();
}

std::shared_ptr<Subscription> EventBus::subscribe(std::size_t capacity) {
    auto sub = std::make_shared<Subscription>(capacity);
    std::lock_guard lock(mu_);
    subs_.push_back(sub);
    return sub;
}

void EventBus::unsubscribe(const std::shared_ptr<Subscription>& sub) {
    sub->close();
    std::lock_guard lock(mu_);
    std::erase(subs_, sub);
}

EventEnvelope EventBus::publish(EventKind kind, json payload) {
    std::lock_guard lock(mu_);
    EventEnvelope env{next_seq_++, kind, std::move(payload)};
    std::erase_if(subs_, [&](const auto& sub) { return !sub->offer(env); });
    return env;
}

void EventBus::close_all() {
    std::lock_guard lock(mu_);
    for (auto& sub : subs_) sub->close();
    subs_.clear();
}

std::size_t EventBus::subscriber_count() const {
    std::lock_guard lock(mu_);
    return subs_.size();
}

} // namespace succor
