/*
 * test_domain.cpp
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

#include <doctest.h>

#include <map>
#include <set>

#include "succor/domain.hpp"
#include "support/oracles.hpp"

using namespace succor;

TEST_SUITE("domain") {

TEST_CASE("validate_child accepts the reference record") {
    auto r = oracle::sample_child();
    CHECK(validate_child(r).ok());
}

TEST_CASE("validate_child names each bad field") {
    auto r = oracle::sample_child();

    SUBCASE("empty child id") {
        r.child_id = "";
        auto v = validate_child(r);
        REQUIRE(v.errors.size() == 1);
        CHECK(v.errors[0].field == "child_id");
    }
    SUBCASE("non-numeric age") {
        r.age = "abc";
        auto v = validate_child(r);
        REQUIRE(v.errors.size() == 1);
        CHECK(v.errors[0].field == "age");
    }
    SUBCASE("age above 150") {
        r.age = "151";
        CHECK(validate_child(r).names("age"));
    }
    SUBCASE("age 0 and 150 are fine") {
        r.age = "0";
        CHECK(validate_child(r).ok());
        r.age = "150";
        CHECK(validate_child(r).ok());
    }
    SUBCASE("21-character name") {
        r.name = std::string(21, 'a');
        CHECK(validate_child(r).names("name"));
        r.name = std::string(20, 'a');
        CHECK(validate_child(r).ok());
    }
    SUBCASE("blank name after trimming") {
        r.name = "   ";
        CHECK(validate_child(r).names("name"));
    }
    SUBCASE("11-digit child id") {
        r.child_id = "12345678901";
        CHECK(validate_child(r).names("child_id"));
    }
    SUBCASE("leading zeros are kept and legal") {
        r.father_no = "0075012345";
        CHECK(validate_child(r).ok());
    }
    SUBCASE("phone with a plus sign") {
        r.mother_no = "+9647501112223";
        CHECK(validate_child(r).names("mother_no"));
    }
    SUBCASE("16-digit phone") {
        r.father_no = std::string(16, '7');
        CHECK(validate_child(r).names("father_no"));
    }
    SUBCASE("non-ASCII disease name") {
        r.disease_name = "Ast\xc3\xa4hma";
        CHECK(validate_child(r).names("disease_name"));
    }
}

TEST_CASE("validate_child reports exactly the broken subset of fields") {
    // For every subset of fields, break those and only those; the result
    // must name each broken field once and nothing else, and be stable when
    // re-run.
    const std::vector<std::string> fields{"child_id", "name", "age", "father_no", "mother_no", "disease_name"};
    for (unsigned mask = 0; mask < (1u << fields.size()); ++mask) {
        auto r = oracle::sample_child();
        std::set<std::string> broken;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!(mask & (1u << i))) continue;
            broken.insert(fields[i]);
            switch (i) {
            case 0: r.child_id = "x1"; break;
            case 1: r.name = ""; break;
            case 2: r.age = "-3"; break;
            case 3: r.father_no = "12a"; break;
            case 4: r.mother_no = ""; break;
            case 5: r.disease_name = std::string(25, 'd'); break;
            }
        }
        auto first = validate_child(r);
        auto second = validate_child(r);
        CHECK(first.errors == second.errors);

        std::multiset<std::string> named;
        for (const auto& e : first.errors) named.insert(e.field);
        CHECK(named.size() == broken.size());
        CHECK(std::set<std::string>(named.begin(), named.end()) == broken);
    }
}

TEST_CASE("next_state examples") {
    CHECK(next_state(IncidentState::Received, IncidentEvent::LookupHit) == IncidentState::Identified);
    CHECK(next_state(IncidentState::Received, IncidentEvent::LookupMiss) == IncidentState::Unidentified);
    try {
        next_state(IncidentState::Closed, IncidentEvent::Close);
        FAIL("expected InvalidTransition");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidTransition);
    }
}

TEST_CASE("next_state over all 30 pairs") {
    using S = IncidentState;
    using E = IncidentEvent;
    const std::map<std::pair<S, E>, S> legal{
        {{S::Received, E::LookupHit}, S::Identified},
        {{S::Received, E::LookupMiss}, S::Unidentified},
        {{S::Identified, E::FacilityAssigned}, S::Dispatched},
        {{S::Unidentified, E::FacilityAssigned}, S::Dispatched},
        {{S::Dispatched, E::NotificationsSent}, S::Notified},
        {{S::Notified, E::Close}, S::Closed},
    };
    int ok = 0, rejected = 0;
    for (auto s : kAllStates) {
        for (auto e : kAllEvents) {
            auto it = legal.find({s, e});
            if (it != legal.end()) {
                CHECK(next_state(s, e) == it->second);
                ++ok;
            } else {
                CHECK_THROWS_AS(next_state(s, e), Error);
                ++rejected;
            }
        }
    }
    CHECK(ok == 6);
    CHECK(rejected == 24);
}

TEST_CASE("random event walks only trace legal lifecycle paths") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, kAllEvents.size() - 1);
    for (int walk = 0; walk < 2000; ++walk) {
        std::vector<IncidentState> path{IncidentState::Received};
        for (int step = 0; step < 12; ++step) {
            try {
                path.push_back(next_state(path.back(), kAllEvents[pick(rng)]));
            } catch (const Error& e) {
                CHECK(e.code() == Errc::InvalidTransition);
            }
        }
        std::set<IncidentState> seen(path.begin(), path.end());
        CHECK(seen.size() == path.size());
        if (path.size() > 1) {
            CHECK((path[1] == IncidentState::Identified || path[1] == IncidentState::Unidentified));
        }
        const IncidentState tail[] = {IncidentState::Dispatched, IncidentState::Notified, IncidentState::Closed};
        for (std::size_t i = 2; i < path.size(); ++i) CHECK(path[i] == tail[i - 2]);
    }
}

TEST_CASE("geo point validity") {
    CHECK(is_valid(GeoPoint{90.0, 180.0}));
    CHECK(is_valid(GeoPoint{-90.0, -180.0}));
    CHECK_FALSE(is_valid(GeoPoint{90.000001, 0.0}));
    CHECK_FALSE(is_valid(GeoPoint{0.0, std::nan("")}));
    CHECK_FALSE(is_valid(GeoPoint{0.0, INFINITY}));
}

TEST_CASE("enum names round-trip") {
    for (auto s : kAllStates) CHECK(state_from_string(to_string(s)) == s);
    CHECK(facility_kind_from_string("Helicopter") == FacilityKind::Helicopter);
    CHECK(purpose_from_string("MOTHER") == SmsPurpose::Mother);
    CHECK(transport_from_string("GPRS") == Transport::Gprs);
    CHECK_FALSE(state_from_string("received").has_value());
}

}
