#include "run_config.hpp"

#include <cstdlib>
#include <stdexcept>

namespace subdiv::cli {

const char* command_name(Command c) {
    switch (c) {
        case Command::quad: return "quad";
        case Command::bisector: return "bisector";
        case Command::subtriangle: return "subtriangle";
        case Command::verify: return "verify";
    }
    return "?";
}

const char* format_name(ReportFormat f) {
    return f == ReportFormat::json ? "json" : "csv";
}

std::vector<double> default_x_grid() {
    return {0.51, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.99};
}

void RunConfig::resolve() {
    if (steps <= 0) {
        switch (command) {
            case Command::quad: steps = 40; break;
            case Command::bisector: steps = 60; break;
            case Command::subtriangle: steps = 200; break;
            case Command::verify: steps = 1; break;
        }
    }
    if (replicas <= 0) {
        switch (command) {
            case Command::quad: replicas = 100000; break;
            case Command::bisector: replicas = 1000000; break;
            case Command::subtriangle: replicas = 10000; break;
            case Command::verify: replicas = 1; break;
        }
    }
    if (bins <= 0) throw std::invalid_argument("bins must be positive");
    if (x_grid.empty()) x_grid = default_x_grid();
    for (double x : x_grid)
        if (!(x > 0.5 && x < 1.0)) throw std::invalid_argument("x-grid values must lie in (0.5, 1)");
    if (threads <= 0) {
        if (const char* env = std::getenv("SUBDIV_THREADS")) {
            threads = std::atoi(env);
        }
        if (threads <= 0) threads = 1;
    }
}

}  // namespace subdiv::cli
