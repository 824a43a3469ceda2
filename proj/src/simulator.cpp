/*
 * simulator.cpp
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

#include "succor/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <set>
#include <sstream>

#include "succor/dispatch.hpp"
#include "succor/registry.hpp"

namespace succor::sim {

namespace {

enum class Stream : std::uint32_t { Terminal = 1, Schedule = 2, Network = 3, Baseline = 4, BaselineNetwork = 5 };

std::mt19937_64 make_stream(std::uint64_t seed, Stream tag, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

struct Delivery {
    bool lost = false;
    double latency_s = 0.0;
};

Delivery draw_delivery(std::mt19937_64& rng, const NetworkModel& net) {
    Delivery d;
    if (net.loss_probability > 0.0) d.lost = std::bernoulli_distribution(net.loss_probability)(rng);
    d.latency_s = net.delivery_latency_s;
    if (net.latency_jitter_s > 0.0)
        d.latency_s += std::uniform_real_distribution<double>(0.0, net.latency_jitter_s)(rng);
    return d;
}

std::string mode_name(bool on_request) { return on_request ? "on_request" : "continuous"; }

void finish_mode(ModeReport& m, const std::vector<std::string>& billed, const Tariff& tariff,
                 double latency_sum, std::uint64_t latency_count) {
    m.total_bytes = 0;
    for (const auto& line : billed) m.total_bytes += line_octets(line);
    m.monetary_cost = cost_of(billed, tariff, m.transport);
    m.mean_request_latency_s = latency_count ? latency_sum / static_cast<double>(latency_count) : 0.0;
}

} // namespace

void validate(const Scenario& s) {
    std::vector<FieldError> errs;
    if (s.duration_s <= 0) errs.push_back({"duration_s", "must be > 0"});
    if (s.track_interval_s <= 0) errs.push_back({"track_interval_s", "must be > 0"});
    if (!(s.tariff.sms_cost_per_msg >= 0.0)) errs.push_back({"tariff.sms_cost_per_msg", "must be >= 0"});
    if (!(s.tariff.gprs_cost_per_byte >= 0.0))
        errs.push_back({"tariff.gprs_cost_per_byte", "must be >= 0"});
    if (!(s.network.delivery_latency_s >= 0.0) || !(s.network.latency_jitter_s >= 0.0))
        errs.push_back({"network", "latency must be >= 0"});
    if (!(s.network.loss_probability >= 0.0 && s.network.loss_probability < 1.0))
        errs.push_back({"network.loss_probability", "must be in [0, 1)"});
    if (s.service_time_s < 0) errs.push_back({"service_time_s", "must be >= 0"});

    std::set<std::string, std::less<>> ids;
    for (std::size_t i = 0; i < s.children.size(); ++i) {
        const auto& c = s.children[i];
        auto prefix = "children[" + std::to_string(i) + "]";
        for (const auto& e : validate_child(c.record).errors)
            errs.push_back({prefix + "." + e.field, e.message});
        if (!is_valid(c.home)) errs.push_back({prefix + ".home", "not a valid location"});
        if (!(c.gps_noise_deg >= 0.0) || !std::isfinite(c.gps_noise_deg))
            errs.push_back({prefix + ".gps_noise_deg", "must be a finite value >= 0"});
        if (!ids.insert(c.record.child_id).second)
            errs.push_back({prefix + ".child_id", "duplicate child id"});
    }
    for (std::size_t i = 0; i < s.emergencies.size(); ++i) {
        const auto& e = s.emergencies[i];
        auto prefix = "emergencies[" + std::to_string(i) + "]";
        if (!ids.contains(e.child_id)) errs.push_back({prefix + ".child_id", "unknown child"});
        if (e.offset_s < 0 || e.offset_s >= s.duration_s)
            errs.push_back({prefix + ".offset_s", "must be in [0, duration_s)"});
    }
    if (s.rate_per_child_per_day) {
        if (!s.emergencies.empty())
            errs.push_back({"rate_per_child_per_day", "give either emergencies or a rate, not both"});
        if (!(*s.rate_per_child_per_day >= 0.0) || !std::isfinite(*s.rate_per_child_per_day))
            errs.push_back({"rate_per_child_per_day", "must be a finite value >= 0"});
    }
    for (std::size_t i = 0; i < s.facilities.size(); ++i)
        if (!is_valid(s.facilities[i].home))
            errs.push_back({"facilities[" + std::to_string(i) + "].home", "not a valid location"});
    for (std::size_t i = 0; i < s.hospitals.size(); ++i) {
        const auto& h = s.hospitals[i];
        if (!is_valid(h.location))
            errs.push_back({"hospitals[" + std::to_string(i) + "].location", "not a valid location"});
        if (!is_digit_string(h.contact_no))
            errs.push_back({"hospitals[" + std::to_string(i) + "].contact_no", "must be a digit string"});
    }

    if (!errs.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& e : errs) msg += " " + e.field + " (" + e.message + ");";
        throw Error(Errc::InvalidScenario, msg, std::move(errs));
    }
}

std::uint64_t line_octets(std::string_view line) noexcept { return line.size() + 1; }

double cost_of(std::span<const std::string> lines, const Tariff& tariff, Transport mode) {
    if (mode == Transport::Sms) return static_cast<double>(lines.size()) * tariff.sms_cost_per_msg;
    std::uint64_t octets = 0;
    for (const auto& l : lines) octets += line_octets(l);
    return static_cast<double>(octets) * tariff.gprs_cost_per_byte;
}

SimTerminal::SimTerminal(SimChild child, std::uint64_t stream_seed)
    : child_(std::move(child)), rng_(stream_seed) {}

GeoPoint SimTerminal::gps_fix() {
    if (child_.gps_noise_deg <= 0.0) return child_.home;
    std::normal_distribution<double> jitter(0.0, child_.gps_noise_deg);
    GeoPoint fix{child_.home.lat_deg + jitter(rng_), child_.home.lon_deg + jitter(rng_)};
    fix.lat_deg = std::clamp(fix.lat_deg, -90.0, 90.0);
    fix.lon_deg = std::clamp(fix.lon_deg, -180.0, 180.0);
    return fix;
}

InboundMessage emit_emergency(SimTerminal& terminal, std::int64_t t, Transport transport) {
    EmergencyRequest req{terminal.child().record.child_id, terminal.gps_fix(), t, transport};
    return InboundMessage{req.child_id, wire::encode_request(req), t, transport};
}

SimulationResult run_scenario(const Scenario& s) {
    validate(s);
    SimulationResult result;
    auto& report = result.report;
    auto& trace = result.trace;
    report.on_request.mode = mode_name(true);
    report.continuous.mode = mode_name(false);
    report.on_request.transport = report.continuous.transport = s.transport_mode;

    // ---- on-request serving -------------------------------------------------
    auto registry = std::make_shared<Registry>();
    for (const auto& c : s.children)
        if (c.registered) registry->register_child(c.record);

    double now = 0.0;
    DispatchEngine engine(registry, ProcessingMode::Auto,
                          [&now] { return static_cast<UnixSeconds>(std::floor(now)); });
    for (const auto& f : s.facilities) engine.add_facility(f);
    for (const auto& h : s.hospitals) engine.add_hospital(h);

    std::vector<SimTerminal> terminals;
    std::map<std::string, std::size_t, std::less<>> index_of;
    for (std::size_t i = 0; i < s.children.size(); ++i) {
        auto rng = make_stream(s.rng_seed, Stream::Terminal, i);
        terminals.emplace_back(s.children[i], rng());
        index_of[s.children[i].record.child_id] = i;
    }

    struct Event {
        double t;
        std::uint64_t seq;
        enum Kind { Emit, Deliver, Close } kind;
        std::size_t child = 0;
        std::string line;
        double emitted_at = 0.0;
        IncidentId incident = 0;
    };
    auto later = [](const Event& a, const Event& b) {
        return std::tie(a.t, a.seq) > std::tie(b.t, b.seq);
    };
    std::priority_queue<Event, std::vector<Event>, decltype(later)> queue(later);
    std::uint64_t seq = 0;

    if (s.rate_per_child_per_day) {
        const double rate_per_s = *s.rate_per_child_per_day / 86400.0;
        for (std::size_t i = 0; i < s.children.size() && rate_per_s > 0.0; ++i) {
            auto rng = make_stream(s.rng_seed, Stream::Schedule, i);
            std::exponential_distribution<double> gap(rate_per_s);
            for (double t = gap(rng); t < static_cast<double>(s.duration_s); t += gap(rng))
                queue.push(Event{std::floor(t), seq++, Event::Emit, i, {}, 0.0, 0});
        }
    } else {
        for (const auto& e : s.emergencies)
            queue.push(Event{static_cast<double>(e.offset_s), seq++, Event::Emit, index_of.at(e.child_id), {}, 0.0, 0});
    }
    report.emergencies_scheduled = queue.size();

    auto network = make_stream(s.rng_seed, Stream::Network, 0);
    SmsGateway gateway([&engine](const IngestedRequest& in) {
        return engine.open_incident(in.request).incident_id;
    });
    std::vector<std::string> billed;
    double latency_sum = 0.0;
    std::uint64_t latency_count = 0;

    while (!queue.empty()) {
        Event ev = queue.top();
        queue.pop();
        now = ev.t;
        switch (ev.kind) {
        case Event::Emit: {
            auto& term = terminals[ev.child];
            auto msg = emit_emergency(term, static_cast<std::int64_t>(ev.t), s.transport_mode);
            auto delivery = draw_delivery(network, s.network);
            const auto& id = term.child().record.child_id;
            trace.push_back({ev.t, "on_request", "emit", id, msg.body, std::nullopt, std::nullopt});
            if (delivery.lost) {
                trace.push_back({ev.t, "on_request", "lost", id, msg.body, std::nullopt, std::nullopt});
                break;
            }
            queue.push(Event{ev.t + delivery.latency_s, seq++, Event::Deliver, ev.child, msg.body, ev.t, 0});
            break;
        }
        case Event::Deliver: {
            const auto& id = terminals[ev.child].child().record.child_id;
            const auto outbox_before = engine.outbox().size();
            std::optional<IncidentId> incident;
            if (s.transport_mode == Transport::Sms) {
                auto out = gateway.deliver(
                    InboundMessage{id, ev.line, static_cast<UnixSeconds>(std::floor(ev.t)), Transport::Sms});
                incident = out.incident_id;
            } else {
                incident = engine.open_incident(wire::parse_request(ev.line, Transport::Gprs)).incident_id;
            }
            ++report.on_request.inbound_msg_count;
            billed.push_back(ev.line);
            latency_sum += ev.t - ev.emitted_at;
            ++latency_count;
            trace.push_back({ev.t, "on_request", "deliver", id, ev.line, incident, std::nullopt});
            if (!incident) break;
            ++report.incidents_opened;

            auto outbox = engine.outbox();
            for (auto i = outbox_before; i < outbox.size(); ++i) {
                const auto& sms = outbox[i];
                ++report.on_request.outbound_msg_count;
                billed.push_back(sms.body);
                trace.push_back({ev.t, "on_request", "notify", sms.to_no, sms.body, sms.incident_id, sms.purpose});
            }
            if (engine.incident(*incident)->state == IncidentState::Notified) {
                ++report.incidents_notified;
                queue.push(Event{ev.t + static_cast<double>(s.service_time_s), seq++, Event::Close,
                                 ev.child, {}, 0.0, *incident});
            }
            break;
        }
        case Event::Close:
            engine.close_incident(ev.incident);
            break;
        }
    }
    finish_mode(report.on_request, billed, s.tariff, latency_sum, latency_count);

    // ---- continuous-tracking baseline ---------------------------------------
    billed.clear();
    latency_sum = 0.0;
    latency_count = 0;
    std::vector<SimTerminal> trackers;
    for (std::size_t i = 0; i < s.children.size(); ++i) {
        auto rng = make_stream(s.rng_seed, Stream::Baseline, i);
        trackers.emplace_back(s.children[i], rng());
    }
    auto baseline_net = make_stream(s.rng_seed, Stream::BaselineNetwork, 0);
    const std::int64_t ticks = (s.duration_s + s.track_interval_s - 1) / s.track_interval_s;
    for (std::int64_t k = 0; k < ticks; ++k) {
        const std::int64_t t = k * s.track_interval_s;
        for (auto& term : trackers) {
            const auto& id = term.child().record.child_id;
            auto line = wire::encode_request(EmergencyRequest{id, term.gps_fix(), t, s.transport_mode});
            auto delivery = draw_delivery(baseline_net, s.network);
            if (delivery.lost) {
                trace.push_back({static_cast<double>(t), "continuous", "position_lost", id, line,
                                 std::nullopt, std::nullopt});
                continue;
            }
            ++report.continuous.inbound_msg_count;
            latency_sum += delivery.latency_s;
            ++latency_count;
            trace.push_back({static_cast<double>(t) + delivery.latency_s, "continuous", "position", id,
                             line, std::nullopt, std::nullopt});
            billed.push_back(std::move(line));
        }
    }
    finish_mode(report.continuous, billed, s.tariff, latency_sum, latency_count);

    report.on_request_cost = report.on_request.monetary_cost;
    report.continuous_cost = report.continuous.monetary_cost;
    if (report.continuous_cost > 0.0) report.ratio = report.on_request_cost / report.continuous_cost;
    return result;
}

std::string SimulationResult::trace_text() const {
    std::string out;
    for (const auto& e : trace) {
        json j{{"t_s", e.t_s}, {"mode", e.mode}, {"kind", e.kind}, {"child_id", e.child_id}, {"line", e.line}};
        if (e.incident_id) j["incident_id"] = *e.incident_id;
        if (e.purpose) j["purpose"] = to_string(*e.purpose);
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

// ---- JSON -------------------------------------------------------------------

Scenario scenario_from_json(const json& j) {
    Scenario s;
    try {
        for (const auto& c : j.at("children")) {
            SimChild child;
            child.record = child_from_request(c);
            child.home = c.at("home").get<GeoPoint>();
            child.gps_noise_deg = c.value("gps_noise_deg", 0.0);
            child.registered = c.value("registered", true);
            s.children.push_back(std::move(child));
        }
        for (const auto& f : j.value("facilities", json::array())) s.facilities.push_back(facility_from_request(f));
        for (const auto& h : j.value("hospitals", json::array())) s.hospitals.push_back(hospital_from_request(h));
        s.duration_s = j.at("duration_s").get<std::int64_t>();
        s.track_interval_s = j.at("track_interval_s").get<std::int64_t>();
        if (j.contains("emergencies"))
            for (const auto& e : j.at("emergencies"))
                s.emergencies.push_back({e.at("child_id").get<std::string>(), e.at("offset_s").get<std::int64_t>()});
        if (j.contains("rate_per_child_per_day"))
            s.rate_per_child_per_day = j.at("rate_per_child_per_day").get<double>();
        const auto& tariff = j.at("tariff");
        s.tariff.sms_cost_per_msg = tariff.value("sms_cost_per_msg", 0.0);
        s.tariff.gprs_cost_per_byte = tariff.value("gprs_cost_per_byte", 0.0);
        auto mode = transport_from_string(j.value("transport_mode", std::string("SMS")));
        if (!mode) throw Error(Errc::InvalidScenario, "transport_mode must be SMS or GPRS");
        s.transport_mode = *mode;
        s.rng_seed = j.value("rng_seed", std::uint64_t{0});
        if (j.contains("network")) {
            const auto& n = j.at("network");
            s.network.delivery_latency_s = n.value("delivery_latency_s", 0.0);
            s.network.latency_jitter_s = n.value("latency_jitter_s", 0.0);
            s.network.loss_probability = n.value("loss_probability", 0.0);
        }
        s.service_time_s = j.value("service_time_s", std::int64_t{3600});
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidScenario, std::string("malformed scenario: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::InvalidScenario) throw;
        throw Error(Errc::InvalidScenario, std::string("malformed scenario: ") + e.what(), e.fields());
    }
    return s;
}

json to_json(const Scenario& s) {
    json children = json::array();
    for (const auto& c : s.children) {
        json jc = c.record;
        jc["home"] = c.home;
        jc["gps_noise_deg"] = c.gps_noise_deg;
        jc["registered"] = c.registered;
        children.push_back(std::move(jc));
    }
    json j{{"children", children},
           {"facilities", s.facilities},
           {"hospitals", s.hospitals},
           {"duration_s", s.duration_s},
           {"track_interval_s", s.track_interval_s},
           {"tariff", {{"sms_cost_per_msg", s.tariff.sms_cost_per_msg},
                       {"gprs_cost_per_byte", s.tariff.gprs_cost_per_byte}}},
           {"transport_mode", to_string(s.transport_mode)},
           {"rng_seed", s.rng_seed},
           {"network", {{"delivery_latency_s", s.network.delivery_latency_s},
                        {"latency_jitter_s", s.network.latency_jitter_s},
                        {"loss_probability", s.network.loss_probability}}},
           {"service_time_s", s.service_time_s}};
    if (s.rate_per_child_per_day) {
        j["rate_per_child_per_day"] = *s.rate_per_child_per_day;
    } else {
        json em = json::array();
        for (const auto& e : s.emergencies) em.push_back({{"child_id", e.child_id}, {"offset_s", e.offset_s}});
        j["emergencies"] = em;
    }
    return j;
}

namespace {
json mode_json(const ModeReport& m) {
    return json{{"mode", m.mode},
                {"transport", to_string(m.transport)},
                {"inbound_msg_count", m.inbound_msg_count},
                {"outbound_msg_count", m.outbound_msg_count},
                {"total_bytes", m.total_bytes},
                {"monetary_cost", m.monetary_cost},
                {"mean_request_latency_s", m.mean_request_latency_s}};
}
} // namespace

json to_json(const CostReport& r) {
    return json{{"modes", json::array({mode_json(r.on_request), mode_json(r.continuous)})},
                {"comparison", {{"on_request_cost", r.on_request_cost},
                                {"continuous_cost", r.continuous_cost},
                                {"ratio", r.ratio ? json(*r.ratio) : json(nullptr)}}},
                {"emergencies_scheduled", r.emergencies_scheduled},
                {"incidents_opened", r.incidents_opened},
                {"incidents_notified", r.incidents_notified}};
}

std::string format_table(const CostReport& r) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%-12s %-9s %10s %10s %12s %14s %16s\n", "mode", "transport",
                  "inbound", "outbound", "bytes", "cost", "mean_latency_s");
    out += buf;
    for (const auto* m : {&r.on_request, &r.continuous}) {
        std::snprintf(buf, sizeof(buf), "%-12s %-9s %10llu %10llu %12llu %14.6f %16.6f\n", m->mode.c_str(),
                      std::string(to_string(m->transport)).c_str(),
                      static_cast<unsigned long long>(m->inbound_msg_count),
                      static_cast<unsigned long long>(m->outbound_msg_count),
                      static_cast<unsigned long long>(m->total_bytes), m->monetary_cost,
                      m->mean_request_latency_s);
        out += buf;
    }
    if (r.ratio)
        std::snprintf(buf, sizeof(buf), "on_request/continuous cost ratio: %.6f\n", *r.ratio);
    else
        std::snprintf(buf, sizeof(buf), "on_request/continuous cost ratio: n/a\n");
    out += buf;
    return out;
}

// ---- terminal fleet -----------------------------------------------------------

void TerminalNetwork::add_terminal(const std::string& terminal_id, wire::Endpoint endpoint) {
    terminals_[terminal_id] = Terminal{std::move(endpoint), true};
}

void TerminalNetwork::set_online(const std::string& terminal_id, bool online) {
    auto it = terminals_.find(terminal_id);
    if (it == terminals_.end()) throw Error(Errc::UnknownTerminal, "unknown terminal " + terminal_id);
    it->second.online = online;
}

void TerminalNetwork::deliver_control(std::string_view terminal_id, std::string_view line) {
    auto it = terminals_.find(terminal_id);
    if (it == terminals_.end())
        throw Error(Errc::UnknownTerminal, "unknown terminal " + std::string(terminal_id));
    if (!it->second.online)
        throw Error(Errc::Undeliverable, "terminal " + std::string(terminal_id) + " is offline");
    auto ep = wire::parse_setaddr(line);
    if (!ep) throw Error(Errc::BadRequest, "not a control line: " + std::string(line));
    it->second.endpoint = *ep;
}

wire::Endpoint TerminalNetwork::send(const std::string& terminal_id, const std::string& line) {
    auto it = terminals_.find(terminal_id);
    if (it == terminals_.end()) throw Error(Errc::UnknownTerminal, "unknown terminal " + terminal_id);
    inboxes_[it->second.endpoint].push_back(line);
    return it->second.endpoint;
}

std::uint64_t TerminalNetwork::delivered_to(const wire::Endpoint& endpoint) const {
    auto it = inboxes_.find(endpoint);
    return it == inboxes_.end() ? 0 : it->second.size();
}

const std::vector<std::string>& TerminalNetwork::lines_at(const wire::Endpoint& endpoint) const {
    static const std::vector<std::string> empty;
    auto it = inboxes_.find(endpoint);
    return it == inboxes_.end() ? empty : it->second;
}

wire::Endpoint TerminalNetwork::endpoint_of(const std::string& terminal_id) const {
    auto it = terminals_.find(terminal_id);
    if (it == terminals_.end()) throw Error(Errc::UnknownTerminal, "unknown terminal " + terminal_id);
    return it->second.endpoint;
}

} // namespace succor::sim
