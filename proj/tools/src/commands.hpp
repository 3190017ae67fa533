#pragma once

#include "report.hpp"
#include "run_config.hpp"

namespace subdiv::cli {

SummaryReport run_quad(const RunConfig& config);
SummaryReport run_bisector(const RunConfig& config);
SummaryReport run_subtriangle(const RunConfig& config);
SummaryReport run_verify(const RunConfig& config);

/// Dispatches on config.command, stamps wall time, and emits the report.
/// Returns the process exit code: 0 all claims pass, 1 otherwise.
int run(RunConfig config);

}  // namespace subdiv::cli
