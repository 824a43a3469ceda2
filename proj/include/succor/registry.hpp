/*
 * registry.hpp
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

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "succor/domain.hpp"

namespace succor {

/// Orders digit-strings by numeric value without converting them, so ids of
/// any length compare correctly. Equal values with different zero padding
/// fall back to lexicographic order.
struct NumericDigitLess {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const noexcept;
};

/// Registered children keyed by child_id. Registration is one-time: a second
/// record with the same id is refused, never merged.
///
/// Writers are serialized; readers share the lock. The duplicate check and the
/// insert happen under one exclusive lock.
class Registry {
public:
    Registry() = default;
    Registry(const Registry&) = delete;
    Registry& operator=(const Registry&) = delete;

    /// Throws Error{Invalid} with the field list, or Error{Duplicate}.
    void register_child(const ChildRecord& record);

    std::optional<ChildRecord> find_child(std::string_view child_id) const;

    /// All records, ascending by numeric child_id.
    std::vector<ChildRecord> list_children() const;

    std::size_t size() const;

private:
    mutable std::shared_mutex mu_;
    std::map<std::string, ChildRecord, NumericDigitLess> records_;
};

} // namespace succor
