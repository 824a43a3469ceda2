/*
 * http_api.cpp
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

#include "http_api.hpp"

#define CPPHTTPLIB_THREAD_POOL_COUNT 16
#include <httplib.h>

#include <thread>

#include "succor/service.hpp"

namespace succor {

int http_status_for(Errc code) noexcept {
    switch (code) {
    case Errc::Duplicate: return 409;
    case Errc::Invalid: return 422;
    case Errc::UnknownIncident: return 404;
    case Errc::UnknownTerminal: return 404;
    case Errc::InvalidTransition:
    case Errc::NoFacilityAvailable:
    case Errc::NoHospital:
    case Errc::Undeliverable: return 409;
    case Errc::BadMagic:
    case Errc::BadFieldCount:
    case Errc::BadNumber:
    case Errc::OutOfRange:
    case Errc::TooLong:
    case Errc::BadRequest:
    case Errc::InvalidScenario: return 400;
    case Errc::CorruptLog:
    case Errc::Io: return 500;
    }
    return 500;
}

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void reply_error(httplib::Response& res, const Error& e) {
    json body{{"error", to_string(e.code())}, {"message", e.what()}};
    if (!e.fields().empty()) body["fields"] = e.fields();
    reply(res, http_status_for(e.code()), body);
}

json parse_body(const httplib::Request& req, bool allow_empty = false) {
    if (allow_empty && req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw Error(Errc::BadRequest, std::string("request body is not JSON: ") + e.what());
    }
}

IncidentId path_id(const httplib::Request& req) {
    try {
        return std::stoull(req.matches[1].str());
    } catch (const std::exception&) {
        throw Error(Errc::UnknownIncident, "no incident " + req.matches[1].str());
    }
}

// Wraps a handler so library errors become JSON error replies.
template <typename F>
httplib::Server::Handler guarded(F&& f) {
    return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            reply_error(res, e);
        } catch (const json::exception& e) {
            reply_error(res, Error(Errc::BadRequest, e.what()));
        }
    };
}

KindFilter kinds_from(const json& body) {
    if (!body.contains("kinds") || body.at("kinds").is_null()) return std::nullopt;
    std::set<FacilityKind> kinds;
    for (const auto& k : body.at("kinds")) {
        auto kind = facility_kind_from_string(k.get<std::string>());
        if (!kind) throw Error(Errc::BadRequest, "unknown facility kind " + k.dump());
        kinds.insert(*kind);
    }
    return kinds;
}

void install_routes(httplib::Server& http, Service& svc) {
    http.Post("/api/children", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        auto stored = svc.register_child(child_from_request(parse_body(req)));
        reply(res, 201, stored);
    }));
    http.Get("/api/children", guarded([&svc](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, svc.list_children());
    }));
    http.Get(R"(/api/children/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        auto child = svc.find_child(req.matches[1].str());
        if (!child) {
            reply(res, 404, json{{"error", "NotFound"}, {"message", "no child " + req.matches[1].str()}});
            return;
        }
        reply(res, 200, *child);
    }));

    http.Post("/api/gateway/sms", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req);
        if (!body.contains("from_no") || !body.contains("body"))
            throw Error(Errc::BadRequest, "from_no and body are required");
        InboundMessage msg{body.at("from_no").get<std::string>(), body.at("body").get<std::string>(), 0,
                           Transport::Sms};
        auto out = svc.receive_sms(msg);
        if (out.error) {
            reply(res, 400, json{{"error", to_string(*out.error)}});
            return;
        }
        reply(res, 202, json{{"incident_id", *out.incident_id},
                             {"sender_mismatch", out.request->sender_mismatch}});
    }));

    http.Get("/api/incidents", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        std::optional<IncidentState> state;
        if (req.has_param("state")) {
            state = state_from_string(req.get_param_value("state"));
            if (!state) throw Error(Errc::BadRequest, "unknown state " + req.get_param_value("state"));
        }
        reply(res, 200, svc.engine().incidents(state));
    }));
    http.Get(R"(/api/incidents/(\d+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        auto inc = svc.engine().incident(path_id(req));
        if (!inc) throw Error(Errc::UnknownIncident, "no incident " + req.matches[1].str());
        reply(res, 200, *inc);
    }));
    http.Get(R"(/api/incidents/(\d+)/distances)",
             guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                 auto inc = svc.engine().incident(path_id(req));
                 if (!inc) throw Error(Errc::UnknownIncident, "no incident " + req.matches[1].str());
                 const auto& at = inc->request.location;
                 json facilities = json::array();
                 for (const auto& f : svc.engine().facilities()) {
                     json jf = f;
                     jf["distance_km"] = geo::haversine_km(at, f.home).value;
                     facilities.push_back(std::move(jf));
                 }
                 json hospitals = json::array();
                 for (const auto& h : svc.engine().hospitals()) {
                     json jh = h;
                     jh["distance_km"] = geo::haversine_km(at, h.location).value;
                     hospitals.push_back(std::move(jh));
                 }
                 reply(res, 200, json{{"incident_id", inc->incident_id},
                                      {"location", at},
                                      {"facilities", facilities},
                                      {"hospitals", hospitals}});
             }));
    http.Post(R"(/api/incidents/(\d+)/find)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        reply(res, 200, svc.engine().find_step(path_id(req)));
    }));
    http.Post(R"(/api/incidents/(\d+)/dispatch)",
              guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                  auto kinds = kinds_from(parse_body(req, true));
                  reply(res, 200, svc.engine().dispatch_step(path_id(req), kinds));
              }));
    http.Post(R"(/api/incidents/(\d+)/notify)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        reply(res, 200, svc.engine().notify_step(path_id(req)));
    }));
    http.Post(R"(/api/incidents/(\d+)/close)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        reply(res, 200, svc.engine().close_incident(path_id(req)));
    }));

    http.Get("/api/outbox", guarded([&svc](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, svc.engine().outbox());
    }));
    http.Get("/api/facilities", guarded([&svc](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, svc.engine().facilities());
    }));
    http.Post("/api/facilities", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        reply(res, 201, svc.add_facility(facility_from_request(parse_body(req))));
    }));
    http.Get("/api/hospitals", guarded([&svc](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, svc.engine().hospitals());
    }));
    http.Post("/api/hospitals", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        reply(res, 201, svc.add_hospital(hospital_from_request(parse_body(req))));
    }));

    http.Post(R"(/api/terminals/(\d+)/setaddr)",
              guarded([&svc](const httplib::Request& req, httplib::Response& res) {
                  auto body = parse_body(req);
                  auto ep = wire::parse_endpoint(body.at("endpoint").get<std::string>());
                  auto ack = svc.setaddr(req.matches[1].str(), ep);
                  reply(res, 200, json{{"terminal_id", ack.terminal_id}, {"endpoint", ack.endpoint.to_string()}});
              }));

    http.Get("/api/events", [&svc](const httplib::Request&, httplib::Response& res) {
        auto sub = svc.events().subscribe();
        res.set_chunked_content_provider(
            "application/x-ndjson",
            [sub](std::size_t, httplib::DataSink& sink) {
                auto env = sub->pop(std::chrono::milliseconds(200));
                if (!env) {
                    if (sub->closed()) {
                        sink.done();
                        return false;
                    }
                    return sink.is_writable();
                }
                auto line = env->to_json().dump() + "\n";
                return sink.write(line.data(), line.size());
            },
            [&svc, sub](bool) { svc.events().unsubscribe(sub); });
    });
}

} // namespace

struct HttpFrontend::Impl {
    httplib::Server server;
    std::thread thread;
};

HttpFrontend::HttpFrontend(Service& service) : impl_(std::make_unique<Impl>()) {
    install_routes(impl_->server, service);
}

HttpFrontend::~HttpFrontend() { stop(); }

std::uint16_t HttpFrontend::start(const wire::Endpoint& listen) {
    auto& server = impl_->server;
    int port = listen.port;
    if (port == 0) {
        port = server.bind_to_any_port(listen.host);
        if (port < 0) throw Error(Errc::Io, "cannot bind HTTP on " + listen.host);
    } else if (!server.bind_to_port(listen.host, port)) {
        throw Error(Errc::Io, "cannot bind HTTP on " + listen.to_string());
    }
    impl_->thread = std::thread([&server] { server.listen_after_bind(); });
    server.wait_until_ready();
    return static_cast<std::uint16_t>(port);
}

void HttpFrontend::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

} // namespace succor
