/*
 * registry.cpp
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

#include "succor/registry.hpp"

#include <mutex>

namespace succor {

bool NumericDigitLess::operator()(std::string_view a, std::string_view b) const noexcept {
    auto strip = [](std::string_view s) {
        auto pos = s.find_first_not_of('0');
        return pos == std::string_view::npos ? std::string_view{} : s.substr(pos);
    };
    auto sa = strip(a);
    auto sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    return a < b;
}

void Registry::register_child(const ChildRecord& record) {
    auto check = validate_child(record);
    if (!check.ok())
        throw Error(Errc::Invalid, "invalid child record", std::move(check.errors));

    std::unique_lock lock(mu_);
    auto [it, inserted] = records_.try_emplace(record.child_id, record);
    if (!inserted)
        throw Error(Errc::Duplicate, "child " + record.child_id + " is already registered");
}

std::optional<ChildRecord> Registry::find_child(std::string_view child_id) const {
    std::shared_lock lock(mu_);
    auto it = records_.find(child_id);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

std::vector<ChildRecord> Registry::list_children() const {
    std::shared_lock lock(mu_);
    std::vector<ChildRecord> out;
    out.reserve(records_.size());
    for (const auto& [id, rec] : records_) out.push_back(rec);
    return out;
}

std::size_t Registry::size() const {
    std::shared_lock lock(mu_);
    return records_.size();
}

} // namespace succor
