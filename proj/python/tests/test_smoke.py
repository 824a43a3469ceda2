# This file is part of the succor project.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import pathlib

import pytest

import succor

LANA = {
    "child_id": "7501234567",
    "name": "Lana",
    "age": "9",
    "father_no": "7509876543",
    "mother_no": "7501112223",
    "disease_name": "Asthma",
}
REQUEST = {
    "child_id": "7501234567",
    "location": {"lat_deg": 36.19, "lon_deg": 44.009},
    "timestamp_s": 1700000000,
    "transport": "SMS",
}


def test_validate_child():
    assert succor.validate_child(LANA) == []
    fields = [f for f, _ in succor.validate_child({**LANA, "age": "abc", "child_id": ""})]
    assert sorted(fields) == ["age", "child_id"]


def test_state_machine():
    assert succor.next_state("RECEIVED", "LOOKUP_HIT") == "IDENTIFIED"
    with pytest.raises(succor.SuccorError) as err:
        succor.next_state("CLOSED", "CLOSE")
    assert err.value.code == "InvalidTransition"


def test_wire_round_trip():
    line = succor.encode_request(REQUEST)
    assert line == "SUCCOR/1 7501234567 36.190000 44.009000 1700000000"
    assert succor.parse_request(line) == REQUEST
    with pytest.raises(succor.SuccorError) as err:
        succor.parse_request("HELP 1 2 3")
    assert err.value.code == "BadMagic"


def test_geo():
    assert succor.haversine_km(0, 0, 0, 180) == pytest.approx(math.pi * 6371.0, rel=1e-12)
    assert succor.haversine_km(36.19, 44.009, 36.2, 44.02) == pytest.approx(1.4868697, rel=1e-6)
    assert succor.nearest((0, 0), []) is None
    assert succor.nearest((0, 0), [(9, 0, 1), (4, 0, -1)])[0] == 4


def test_registry_duplicate():
    reg = succor.Registry()
    reg.register_child(LANA)
    with pytest.raises(succor.SuccorError) as err:
        reg.register_child(LANA)
    assert err.value.code == "Duplicate"
    assert len(reg) == 1
    assert reg.find_child("7501234567") == LANA
    assert reg.find_child("1") is None


def test_engine_auto_fan_out():
    reg = succor.Registry()
    reg.register_child(LANA)
    engine = succor.DispatchEngine(reg, auto=True, now=1700000000)
    engine.add_facility({"kind": "Car", "home": {"lat_deg": 36.2, "lon_deg": 44.0}, "available": True})
    engine.add_hospital({"name": "Rizgary", "location": {"lat_deg": 36.2, "lon_deg": 44.02}, "contact_no": "7505550000"})
    inc = engine.open_incident(REQUEST)
    assert inc["state"] == "NOTIFIED"
    assert sorted(m["purpose"] for m in engine.outbox()) == ["FATHER", "HOSPITAL", "MOTHER"]
    closed = engine.close_incident(inc["incident_id"])
    assert closed["state"] == "CLOSED"
    assert engine.facilities()[0]["available"] is True


def test_engine_manual_unregistered():
    engine = succor.DispatchEngine(succor.Registry())
    engine.add_facility({"kind": "Lifeboat", "home": {"lat_deg": 0, "lon_deg": 0}, "available": True})
    engine.add_hospital({"name": "H", "location": {"lat_deg": 0, "lon_deg": 0}, "contact_no": "1"})
    inc = engine.open_incident({**REQUEST, "child_id": "42"})
    assert [i["incident_id"] for i in engine.pending_incidents()] == [inc["incident_id"]]
    with pytest.raises(succor.SuccorError):
        engine.dispatch_step(inc["incident_id"], kinds=["Car"])
    done = engine.process_incident(inc["incident_id"])
    assert done["state"] == "NOTIFIED"
    assert [m["purpose"] for m in engine.outbox()] == ["HOSPITAL"]


def test_run_canonical_scenario():
    path = pathlib.Path(__file__).resolve().parents[2] / "samples" / "canonical_scenario.json"
    scenario = json.loads(path.read_text())
    a = succor.run_scenario(scenario)
    b = succor.run_scenario(scenario)
    assert a["trace"] == b["trace"]
    modes = {m["mode"]: m for m in a["report"]["modes"]}
    assert modes["continuous"]["inbound_msg_count"] == 1440
    assert modes["on_request"]["inbound_msg_count"] + modes["on_request"]["outbound_msg_count"] == 8
    assert a["report"]["comparison"]["on_request_cost"] < a["report"]["comparison"]["continuous_cost"]
