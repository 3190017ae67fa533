#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace subdiv::cli {

enum class Command { quad, bisector, subtriangle, verify };
enum class ReportFormat { json, csv };

const char* command_name(Command c);
const char* format_name(ReportFormat f);

/// One experiment description. Defaults regenerate every number quoted in
/// the project documentation.
struct RunConfig {
    Command command = Command::verify;
    std::uint64_t seed = 1;
    int steps = 0;            // 0 -> per-command default
    std::int64_t replicas = 0;  // 0 -> per-command default
    int bins = 64;              // 1-D histogram bins and ternary resolution
    std::vector<double> x_grid;  // empty -> default grid
    std::string out_dir;         // empty -> no data files written
    ReportFormat format = ReportFormat::json;
    int threads = 0;  // 0 -> SUBDIV_THREADS env var, else 1

    /// Fills defaulted fields in place.
    void resolve();
};

std::vector<double> default_x_grid();

}  // namespace subdiv::cli
