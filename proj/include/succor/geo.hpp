/*
 * geo.hpp
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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "succor/domain.hpp"

namespace succor::geo {

inline constexpr double kEarthRadiusKm = 6371.0;

struct DistanceKm {
    double value = 0.0;

    auto operator<=>(const DistanceKm&) const = default;
};

/// Great-circle distance on a sphere of radius kEarthRadiusKm. The
/// arguments are put in a fixed order before evaluation, so the result is
/// bit-identical for (a, b) and (b, a).
DistanceKm haversine_km(const GeoPoint& a, const GeoPoint& b) noexcept;

struct Candidate {
    std::uint64_t id = 0;
    GeoPoint location;
};

struct Nearest {
    std::uint64_t id = 0;
    DistanceKm distance;

    bool operator==(const Nearest&) const = default;
};

using CandidateFilter = std::function<bool(std::uint64_t id)>;

/// Candidate closest to `origin` among those passing `allowed` (all, when
/// empty). Equal distances go to the smaller id.
std::optional<Nearest> nearest(const GeoPoint& origin, std::span<const Candidate> candidates,
                               const CandidateFilter& allowed = {});

} // namespace succor::geo
