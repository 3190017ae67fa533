#include "commands.hpp"

#include <chrono>

namespace subdiv::cli {

int run(RunConfig config) {
    config.resolve();
    const auto start = std::chrono::steady_clock::now();
    SummaryReport report;
    switch (config.command) {
        case Command::quad: report = run_quad(config); break;
        case Command::bisector: report = run_bisector(config); break;
        case Command::subtriangle: report = run_subtriangle(config); break;
        case Command::verify: report = run_verify(config); break;
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(report);
    return report.all_pass() ? 0 : 1;
}

}  // namespace subdiv::cli
