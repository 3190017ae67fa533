#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "run_config.hpp"

namespace subdiv::cli {

/// One quantitative claim: pass is decided by the command that produced the
/// row (the comparison direction depends on the claim), expected/observed/
/// tolerance record the numbers behind the verdict.
struct ClaimRow {
    std::string name;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SummaryReport {
    RunConfig config;
    std::vector<ClaimRow> claims;
    double wall_seconds = 0.0;
    std::vector<std::string> artifacts;

    bool all_pass() const;
    void add(std::string name, double expected, double observed, double tolerance, bool pass);
    /// pass iff |observed - expected| <= tolerance.
    void add_abs(std::string name, double expected, double observed, double tolerance);
    /// pass iff observed <= bound.
    void add_upper(std::string name, double bound, double observed);
    /// pass iff observed > bound.
    void add_lower(std::string name, double bound, double observed);
};

nlohmann::json config_to_json(const RunConfig& config);
/// Config echo for data artifacts: omits the output path and thread count,
/// which must not influence data bytes.
nlohmann::json data_config_to_json(const RunConfig& config);
nlohmann::json report_to_json(const SummaryReport& report);
std::string report_to_csv(const SummaryReport& report);

/// Structural validation against the published schema
/// (docs/report.schema.json): required keys, types, claim fields.
bool validate_report_json(const nlohmann::json& j, std::string* why = nullptr);

/// Writes report.json or report.csv into config.out_dir (when set) and
/// prints one line per claim to stdout.
void emit(const SummaryReport& report);

}  // namespace subdiv::cli
