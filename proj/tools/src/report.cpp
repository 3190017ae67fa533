#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace subdiv::cli {

bool SummaryReport::all_pass() const {
    for (const auto& c : claims)
        if (!c.pass) return false;
    return true;
}

void SummaryReport::add(std::string name, double expected, double observed, double tolerance,
                        bool pass) {
    claims.push_back({std::move(name), expected, observed, tolerance, pass});
}

void SummaryReport::add_abs(std::string name, double expected, double observed, double tolerance) {
    const bool pass = std::abs(observed - expected) <= tolerance;
    add(std::move(name), expected, observed, tolerance, pass);
}

void SummaryReport::add_upper(std::string name, double bound, double observed) {
    add(std::move(name), bound, observed, 0.0, observed <= bound);
}

void SummaryReport::add_lower(std::string name, double bound, double observed) {
    add(std::move(name), bound, observed, 0.0, observed > bound);
}

nlohmann::json config_to_json(const RunConfig& config) {
    return {
        {"command", command_name(config.command)},
        {"seed", config.seed},
        {"steps", config.steps},
        {"replicas", config.replicas},
        {"bins", config.bins},
        {"x_grid", config.x_grid},
        {"out", config.out_dir},
        {"format", format_name(config.format)},
        {"threads", config.threads},
    };
}

nlohmann::json data_config_to_json(const RunConfig& config) {
    nlohmann::json j = config_to_json(config);
    j.erase("out");
    j.erase("threads");
    return j;
}

nlohmann::json report_to_json(const SummaryReport& report) {
    nlohmann::json claims = nlohmann::json::array();
    for (const auto& c : report.claims) {
        claims.push_back({{"name", c.name},
                          {"expected", c.expected},
                          {"observed", c.observed},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    return {{"config", config_to_json(report.config)},
            {"claims", claims},
            {"wall_seconds", report.wall_seconds},
            {"artifacts", report.artifacts}};
}

std::string report_to_csv(const SummaryReport& report) {
    std::string out = "name,expected,observed,tolerance,pass\n";
    char buf[160];
    for (const auto& c : report.claims) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%s\n", c.name.c_str(), c.expected,
                      c.observed, c.tolerance, c.pass ? "true" : "false");
        out += buf;
    }
    return out;
}

bool validate_report_json(const nlohmann::json& j, std::string* why) {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (!j.is_object()) return fail("report must be an object");
    for (const char* key : {"config", "claims", "wall_seconds", "artifacts"})
        if (!j.contains(key)) return fail("missing required key");
    if (!j["config"].is_object()) return fail("config must be an object");
    for (const char* key : {"command", "seed", "steps", "replicas", "bins", "x_grid", "out",
                            "format", "threads"})
        if (!j["config"].contains(key)) return fail("config missing a field");
    if (!j["wall_seconds"].is_number()) return fail("wall_seconds must be a number");
    if (!j["artifacts"].is_array()) return fail("artifacts must be an array");
    if (!j["claims"].is_array()) return fail("claims must be an array");
    for (const auto& c : j["claims"]) {
        if (!c.is_object()) return fail("claim must be an object");
        if (!c.contains("name") || !c["name"].is_string()) return fail("claim needs a name");
        for (const char* key : {"expected", "observed", "tolerance"})
            if (!c.contains(key) || !c[key].is_number()) return fail("claim numeric field missing");
        if (!c.contains("pass") || !c["pass"].is_boolean()) return fail("claim needs pass");
    }
    return true;
}

void emit(const SummaryReport& report) {
    for (const auto& c : report.claims) {
        std::printf("[%s] %-42s observed=%- .10g expected=%- .10g tol=%g\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.observed, c.expected, c.tolerance);
    }
    std::printf("%s: %zu/%zu claims passed (%.2f s)\n", report.all_pass() ? "OK" : "FAILED",
                static_cast<std::size_t>(
                    std::count_if(report.claims.begin(), report.claims.end(),
                                  [](const ClaimRow& c) { return c.pass; })),
                report.claims.size(), report.wall_seconds);

    if (report.config.out_dir.empty()) return;
    const nlohmann::json j = report_to_json(report);
    std::string why;
    if (!validate_report_json(j, &why)) throw std::logic_error("report schema violation: " + why);

    namespace fs = std::filesystem;
    fs::create_directories(report.config.out_dir);
    const fs::path dir(report.config.out_dir);
    if (report.config.format == ReportFormat::json) {
        std::ofstream f(dir / "report.json", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write report.json");
        f << j.dump(2) << '\n';
    } else {
        std::ofstream f(dir / "report.csv", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write report.csv");
        f << report_to_csv(report);
    }
}

}  // namespace subdiv::cli
