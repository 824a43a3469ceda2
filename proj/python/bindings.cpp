/*
 * bindings.cpp
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

// Python bindings. Compound values cross the boundary as plain dicts and
// lists in the same JSON shape the HTTP API uses.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "succor/dispatch.hpp"
#include "succor/geo.hpp"
#include "succor/json_codec.hpp"
#include "succor/registry.hpp"
#include "succor/simulator.hpp"
#include "succor/wire.hpp"

namespace py = pybind11;
using namespace succor;

namespace {

py::object* g_error_type = nullptr;

py::object to_py(const json& j) {
    static auto* loads = new py::object(py::module_::import("json").attr("loads"));
    return (*loads)(j.dump());
}

json from_py(const py::handle& obj) {
    static auto* dumps = new py::object(py::module_::import("json").attr("dumps"));
    return json::parse((*dumps)(obj).cast<std::string>());
}

template <typename T>
T parse_as(const py::handle& obj) {
    try {
        return from_py(obj).get<T>();
    } catch (const json::exception& e) {
        throw Error(Errc::BadRequest, e.what());
    }
}

IncidentEvent event_from_string(std::string_view s) {
    for (auto e : kAllEvents)
        if (to_string(e) == s) return e;
    throw Error(Errc::BadRequest, "unknown event " + std::string(s));
}

template <typename T, typename Parse>
T enum_arg(const std::string& s, Parse parse, const char* what) {
    auto v = parse(s);
    if (!v) throw Error(Errc::BadRequest, std::string("unknown ") + what + " " + s);
    return *v;
}

/// Engine plus the registry it reads and a settable clock.
class PyEngine {
public:
    PyEngine(std::shared_ptr<Registry> registry, bool auto_mode, UnixSeconds now)
        : registry_(std::move(registry)),
          now_(now),
          engine_(registry_, auto_mode ? ProcessingMode::Auto : ProcessingMode::Manual, [this] { return now_; }) {}

    UnixSeconds get_now() const { return now_; }
    void set_now(UnixSeconds t) { now_ = t; }
    DispatchEngine& engine() { return engine_; }

private:
    std::shared_ptr<Registry> registry_;
    UnixSeconds now_;
    DispatchEngine engine_;
};

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "succor emergency dispatch core";

    // Deliberately leaked: the type must outlive interpreter teardown.
    g_error_type = new py::object(py::exception<Error>(m, "SuccorError"));
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = (*g_error_type)(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            py::list fields;
            for (const auto& f : e.fields()) fields.append(py::make_tuple(f.field, f.message));
            exc.attr("fields") = fields;
            PyErr_SetObject(g_error_type->ptr(), exc.ptr());
        }
    });

    m.def("validate_child", [](const py::dict& record) {
        py::list out;
        for (const auto& e : validate_child(child_from_request(from_py(record))).errors)
            out.append(py::make_tuple(e.field, e.message));
        return out;
    }, "List of (field, message) for every invalid field; empty when the record is valid.");

    m.def("next_state", [](const std::string& state, const std::string& event) {
        auto s = enum_arg<IncidentState>(state, state_from_string, "state");
        return std::string(to_string(next_state(s, event_from_string(event))));
    });

    m.def("encode_request", [](const py::dict& req) { return wire::encode_request(parse_as<EmergencyRequest>(req)); });
    m.def("parse_request", [](const std::string& line, const std::string& transport) {
        return to_py(wire::parse_request(line, enum_arg<Transport>(transport, transport_from_string, "transport")));
    }, py::arg("line"), py::arg("transport") = "SMS");

    m.def("haversine_km", [](double lat1, double lon1, double lat2, double lon2) {
        return geo::haversine_km({lat1, lon1}, {lat2, lon2}).value;
    });
    m.def("nearest", [](std::pair<double, double> origin, const std::vector<std::tuple<std::uint64_t, double, double>>& cands)
              -> std::optional<std::pair<std::uint64_t, double>> {
        std::vector<geo::Candidate> c;
        for (const auto& [id, lat, lon] : cands) c.push_back({id, {lat, lon}});
        auto n = geo::nearest({origin.first, origin.second}, c);
        if (!n) return std::nullopt;
        return std::make_pair(n->id, n->distance.value);
    }, "Closest (id, km) among (id, lat, lon) candidates; ties go to the smaller id.");

    py::class_<Registry, std::shared_ptr<Registry>>(m, "Registry")
        .def(py::init<>())
        .def("register_child", [](Registry& r, const py::dict& rec) { r.register_child(child_from_request(from_py(rec))); })
        .def("find_child", [](const Registry& r, const std::string& id) -> py::object {
            auto c = r.find_child(id);
            return c ? to_py(*c) : py::none();
        })
        .def("list_children", [](const Registry& r) { return to_py(r.list_children()); })
        .def("__len__", &Registry::size);

    py::class_<PyEngine>(m, "DispatchEngine")
        .def(py::init<std::shared_ptr<Registry>, bool, UnixSeconds>(), py::arg("registry"), py::arg("auto") = false,
             py::arg("now") = 0, py::keep_alive<1, 2>())
        .def_property("now", &PyEngine::get_now, &PyEngine::set_now)
        .def("add_facility", [](PyEngine& e, const py::dict& f) { return to_py(e.engine().add_facility(facility_from_request(from_py(f)))); })
        .def("add_hospital", [](PyEngine& e, const py::dict& h) { return to_py(e.engine().add_hospital(hospital_from_request(from_py(h)))); })
        .def("open_incident", [](PyEngine& e, const py::dict& req) { return to_py(e.engine().open_incident(parse_as<EmergencyRequest>(req))); })
        .def("find_step", [](PyEngine& e, IncidentId id) { return to_py(e.engine().find_step(id)); })
        .def("dispatch_step", [](PyEngine& e, IncidentId id, std::optional<std::vector<std::string>> kinds) {
            KindFilter filter;
            if (kinds) {
                filter.emplace();
                for (const auto& k : *kinds) filter->insert(enum_arg<FacilityKind>(k, facility_kind_from_string, "kind"));
            }
            return to_py(e.engine().dispatch_step(id, filter));
        }, py::arg("incident_id"), py::arg("kinds") = std::nullopt)
        .def("notify_step", [](PyEngine& e, IncidentId id) { return to_py(e.engine().notify_step(id)); })
        .def("close_incident", [](PyEngine& e, IncidentId id) { return to_py(e.engine().close_incident(id)); })
        .def("process_incident", [](PyEngine& e, IncidentId id) { return to_py(e.engine().process_incident(id)); })
        .def("pending_incidents", [](PyEngine& e) { return to_py(e.engine().pending_incidents()); })
        .def("incidents", [](PyEngine& e, std::optional<std::string> state) {
            std::optional<IncidentState> s;
            if (state) s = enum_arg<IncidentState>(*state, state_from_string, "state");
            return to_py(e.engine().incidents(s));
        }, py::arg("state") = std::nullopt)
        .def("outbox", [](PyEngine& e) { return to_py(e.engine().outbox()); })
        .def("facilities", [](PyEngine& e) { return to_py(e.engine().facilities()); })
        .def("hospitals", [](PyEngine& e) { return to_py(e.engine().hospitals()); });

    m.def("run_scenario", [](const py::dict& scenario) {
        auto result = sim::run_scenario(sim::scenario_from_json(from_py(scenario)));
        py::dict out;
        out["report"] = to_py(sim::to_json(result.report));
        out["trace"] = result.trace_text();
        return out;
    }, "Runs a scenario dict; returns {'report': dict, 'trace': ndjson str}.");
}
