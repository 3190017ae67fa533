#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "src/commands.hpp"
#include "src/run_config.hpp"

namespace {

void add_common_options(CLI::App* cmd, subdiv::cli::RunConfig& config, std::string& format) {
    cmd->add_option("--seed", config.seed, "Random seed (default 1)");
    cmd->add_option("--steps", config.steps, "Chain length")->check(CLI::PositiveNumber);
    cmd->add_option("--replicas", config.replicas, "Number of independent replicas")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--bins", config.bins, "Histogram bins / ternary resolution")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--x-grid", config.x_grid, "x values for closed-form checks")->delimiter(',');
    cmd->add_option("--out", config.out_dir, "Directory for data files and the report");
    cmd->add_option("--format", format, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--threads", config.threads,
                    "Worker threads (default: SUBDIV_THREADS env var, else 1)")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification suite for three random geometric subdivision chains"};
    app.require_subcommand(1);

    subdiv::cli::RunConfig config;
    std::string format = "json";

    CLI::App* quad = app.add_subcommand("quad", "Quadrilateral midpoint subdivision chain");
    CLI::App* bisector = app.add_subcommand("bisector", "Triangle angle-bisector subdivision chain");
    CLI::App* subtriangle = app.add_subcommand("subtriangle", "Random inscribed-triangle chain");
    CLI::App* verify = app.add_subcommand("verify", "Closed-form verification battery");
    for (CLI::App* cmd : {quad, bisector, subtriangle, verify})
        add_common_options(cmd, config, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (quad->parsed()) config.command = subdiv::cli::Command::quad;
    if (bisector->parsed()) config.command = subdiv::cli::Command::bisector;
    if (subtriangle->parsed()) config.command = subdiv::cli::Command::subtriangle;
    if (verify->parsed()) config.command = subdiv::cli::Command::verify;
    config.format = format == "csv" ? subdiv::cli::ReportFormat::csv
                                    : subdiv::cli::ReportFormat::json;

    try {
        return subdiv::cli::run(config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
