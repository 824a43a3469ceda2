/*
 * geo.cpp
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

#include "succor/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace succor::geo {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

DistanceKm haversine_km(const GeoPoint& a, const GeoPoint& b) noexcept {
    const GeoPoint& p = std::tie(a.lat_deg, a.lon_deg) <= std::tie(b.lat_deg, b.lon_deg) ? a : b;
    const GeoPoint& q = &p == &a ? b : a;

    const double lat1 = p.lat_deg * kDegToRad;
    const double lat2 = q.lat_deg * kDegToRad;
    const double dlon = (q.lon_deg - p.lon_deg) * kDegToRad;
    const double cos_product = std::cos(lat1) * std::cos(lat2);
    const double sin_dlat = std::sin((lat2 - lat1) / 2.0);
    const double sin_dlon = std::sin(dlon / 2.0);
    // 1 - h is the haversine to the antipode of q. Computing it directly
    // instead of by subtraction keeps full precision near antipodal pairs.
    const double sin_slat = std::sin((lat1 + lat2) / 2.0);
    const double cos_dlon = std::cos(dlon / 2.0);
    const double h = sin_dlat * sin_dlat + cos_product * sin_dlon * sin_dlon;
    const double h_complement = sin_slat * sin_slat + cos_product * cos_dlon * cos_dlon;
    return DistanceKm{2.0 * kEarthRadiusKm *
                      std::atan2(std::sqrt(std::max(h, 0.0)), std::sqrt(std::max(h_complement, 0.0)))};
}

std::optional<Nearest> nearest(const GeoPoint& origin, std::span<const Candidate> candidates,
                               const CandidateFilter& allowed) {
    std::optional<Nearest> best;
    for (const auto& c : candidates) {
        if (allowed && !allowed(c.id)) continue;
        auto d = haversine_km(origin, c.location);
        if (!best || d < best->distance || (d == best->distance && c.id < best->id))
            best = Nearest{c.id, d};
    }
    return best;
}

} // namespace succor::geo
