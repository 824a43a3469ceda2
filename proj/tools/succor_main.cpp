/*
 * succor_main.cpp
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

// succor command line: run the server, run a cost simulation, or bulk-load
// registrations and resources into a data directory.

#include <CLI11.hpp>
#include <signal.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "succor/service.hpp"
#include "succor/simulator.hpp"

using namespace succor;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::BadRequest, path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(Errc::Io, "cannot write " + path);
}

int serve(const std::string& listen, const std::string& gprs_listen, const std::string& data_dir, bool auto_mode) {
    ServiceConfig config;
    config.data_dir = data_dir;
    config.mode = auto_mode ? ProcessingMode::Auto : ProcessingMode::Manual;
    config.http_listen = wire::parse_endpoint(listen);
    if (!gprs_listen.empty()) config.gprs_listen = wire::parse_endpoint(gprs_listen);

    // Block the shutdown signals before any server thread exists so only
    // sigwait below sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    Service svc(config);
    svc.start();
    std::cerr << "succor: http on " << config.http_listen.host << ":" << svc.http_port();
    if (auto port = svc.gprs_port()) std::cerr << ", gprs on " << config.gprs_listen->host << ":" << *port;
    std::cerr << ", " << (auto_mode ? "AUTO" : "MANUAL") << " mode, " << svc.list_children().size()
              << " children, " << svc.engine().incidents().size() << " incidents" << std::endl;

    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "succor: shutting down" << std::endl;
    svc.stop();
    return 0;
}

int simulate(const std::string& scenario_path, std::optional<std::uint64_t> seed, const std::string& report_path,
             const std::string& trace_path) {
    auto scenario = sim::scenario_from_json(read_json_file(scenario_path));
    if (seed) scenario.rng_seed = *seed;
    auto result = sim::run_scenario(scenario);
    write_file(report_path, sim::to_json(result.report).dump(2) + "\n");
    if (!trace_path.empty()) write_file(trace_path, result.trace_text());
    std::cout << sim::format_table(result.report);
    return 0;
}

int seed(const std::string& children, const std::string& facilities, const std::string& hospitals,
         const std::string& data_dir) {
    ServiceConfig config;
    config.data_dir = data_dir;
    Service svc(config);
    std::size_t added = 0, skipped = 0;

    auto each = [](const std::string& path, auto&& fn) {
        if (path.empty()) return;
        auto items = read_json_file(path);
        if (!items.is_array()) throw Error(Errc::BadRequest, path + ": expected a JSON array");
        for (const auto& item : items) fn(item);
    };
    auto guarded = [&](const char* what, auto&& fn) {
        try {
            fn();
            ++added;
        } catch (const Error& e) {
            if (e.code() != Errc::Duplicate) throw;
            std::cerr << "succor: skipping existing " << what << ": " << e.what() << "\n";
            ++skipped;
        }
    };
    each(children, [&](const json& j) { guarded("child", [&] { svc.register_child(child_from_request(j)); }); });
    each(facilities, [&](const json& j) { guarded("facility", [&] { svc.add_facility(facility_from_request(j)); }); });
    each(hospitals, [&](const json& j) { guarded("hospital", [&] { svc.add_hospital(hospital_from_request(j)); }); });
    std::cout << "seeded " << added << " records into " << data_dir;
    if (skipped) std::cout << " (" << skipped << " already present)";
    std::cout << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"succor: on-request emergency dispatch server and cost simulator"};
    app.require_subcommand(1);

    std::string data_dir;
    auto add_data_dir = [&](CLI::App* cmd) {
        cmd->add_option("--data-dir", data_dir, "Directory holding the append-only logs")
            ->envname("SUCCOR_DATA_DIR")
            ->required();
    };

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API and GPRS listener");
    std::string listen = "127.0.0.1:8080", gprs_listen;
    bool auto_mode = false;
    serve_cmd->add_option("--listen", listen, "HTTP API endpoint HOST:PORT")->capture_default_str();
    serve_cmd->add_option("--gprs-listen", gprs_listen, "GPRS terminal endpoint HOST:PORT");
    add_data_dir(serve_cmd);
    serve_cmd->add_flag("--auto", auto_mode, "Run find, dispatch and notify as soon as a request arrives");

    auto* sim_cmd = app.add_subcommand("simulate", "Compare on-request serving with continuous tracking");
    std::string scenario_path, report_path, trace_path;
    std::optional<std::uint64_t> seed_value;
    sim_cmd->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sim_cmd->add_option("--seed", seed_value, "Overrides the scenario's rng_seed");
    sim_cmd->add_option("--report", report_path, "Where to write the JSON cost report")->required();
    sim_cmd->add_option("--trace", trace_path, "Optional path for the ndjson event trace");

    auto* seed_cmd = app.add_subcommand("seed", "Load children, facilities and hospitals from JSON arrays");
    std::string children, facilities, hospitals;
    seed_cmd->add_option("--children", children)->check(CLI::ExistingFile);
    seed_cmd->add_option("--facilities", facilities)->check(CLI::ExistingFile);
    seed_cmd->add_option("--hospitals", hospitals)->check(CLI::ExistingFile);
    add_data_dir(seed_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serve_cmd) return serve(listen, gprs_listen, data_dir, auto_mode);
        if (*sim_cmd) return simulate(scenario_path, seed_value, report_path, trace_path);
        if (*seed_cmd) return seed(children, facilities, hospitals, data_dir);
    } catch (const Error& e) {
        std::cerr << "succor: " << to_string(e.code()) << ": " << e.what() << "\n";
        for (const auto& f : e.fields()) std::cerr << "  " << f.field << ": " << f.message << "\n";
        return 1;
    }
    return 0;
}
