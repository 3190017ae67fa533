#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include <subdiv/bisector_chain.hpp>
#include <subdiv/stats.hpp>

#include "commands.hpp"
#include "csv.hpp"

namespace subdiv::cli {

SummaryReport run_bisector(const RunConfig& config) {
    SummaryReport report;
    report.config = config;

    const auto samples = bisector::simulate_final_triples(config.steps, config.replicas,
                                                          config.seed, bisector::Dynamics::permutation,
                                                          config.threads);
    const auto moments = bisector::estimate_moments(samples);
    report.add_abs("mean_a", 1.0 / 3.0, moments.mean_a, 1e-3);
    report.add_abs("second_a", 1.0 / 7.0, moments.second_a, 1e-3);
    report.add_abs("cross_ab", 2.0 / 21.0, moments.cross_ab, 1e-3);
    report.add_abs("cov_ab", -1.0 / 63.0, moments.cov_ab, 1e-3);
    report.add_abs("var_a", 2.0 / 63.0, moments.var_a, 1e-3);

    // Weak-convergence diagnostic: the pooled angle law at n and 2n. The
    // threshold uses the replica count because the three pooled components
    // of a triple are dependent.
    {
        const std::int64_t n2 = std::min<std::int64_t>(config.replicas, 100000);
        const auto a = bisector::simulate_final_triples(config.steps, n2, config.seed + 1,
                                                        bisector::Dynamics::permutation, config.threads);
        const auto b = bisector::simulate_final_triples(2 * config.steps, n2, config.seed + 2,
                                                        bisector::Dynamics::permutation, config.threads);
        std::vector<double> pa, pb;
        pa.reserve(3 * a.size());
        pb.reserve(3 * b.size());
        for (const auto& t : a) {
            pa.push_back(t.a);
            pa.push_back(t.b);
            pa.push_back(t.c);
        }
        for (const auto& t : b) {
            pb.push_back(t.a);
            pb.push_back(t.b);
            pb.push_back(t.c);
        }
        const double d = stats::ks_two_sample_statistic(std::move(pa), std::move(pb));
        const double crit = stats::ks_two_sample_critical_value(static_cast<std::size_t>(n2),
                                                                static_cast<std::size_t>(n2), 0.01);
        report.add("stationarity_two_sample_ks_d", crit, d, 0.0, d <= crit);
    }

    // Heuristic atom scan; a continuous law keeps collisions rare.
    report.add_upper("atom_scan_max_multiplicity", 8.0,
                     static_cast<double>(bisector::atom_scan_max_multiplicity(samples)));

    if (!config.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(config.out_dir);
        {
            CsvWriter w((fs::path(config.out_dir) / "bisector_samples.csv").string(),
                        "replica,a,b,c");
            for (std::size_t r = 0; r < samples.size(); ++r) {
                w.field(static_cast<std::int64_t>(r)).field(samples[r].a).field(samples[r].b)
                    .field(samples[r].c);
                w.end_row();
            }
            report.artifacts.push_back("bisector_samples.csv");
        }
        {
            const auto h = bisector::build_angle_histogram(samples, config.bins);
            CsvWriter w((fs::path(config.out_dir) / "bisector_angle_hist.csv").string(),
                        "bin_left,bin_right,count");
            for (int i = 0; i < h.bins(); ++i) {
                w.field(h.bin_left(i)).field(h.bin_right(i)).field(h.count(i));
                w.end_row();
            }
            report.artifacts.push_back("bisector_angle_hist.csv");
        }
        {
            const auto th = bisector::build_ternary_histogram(samples, config.bins);
            CsvWriter w((fs::path(config.out_dir) / "bisector_ternary.csv").string(), "i,j,count");
            for (int i = 0; i <= th.resolution; ++i) {
                for (int j = 0; i + j <= th.resolution; ++j) {
                    w.field(i).field(j).field(th.count(i, j));
                    w.end_row();
                }
            }
            report.artifacts.push_back("bisector_ternary.csv");
        }
        {
            nlohmann::json j{{"mean_a", moments.mean_a},
                             {"second_a", moments.second_a},
                             {"cross_ab", moments.cross_ab},
                             {"var_a", moments.var_a},
                             {"cov_ab", moments.cov_ab},
                             {"n_samples", moments.n_samples},
                             {"stderr_mean", moments.stderr_mean},
                             {"stderr_second", moments.stderr_second},
                             {"stderr_cross", moments.stderr_cross},
                             {"config", data_config_to_json(config)}};
            std::ofstream f(fs::path(config.out_dir) / "bisector_moments.json", std::ios::binary);
            f << j.dump(2) << '\n';
            report.artifacts.push_back("bisector_moments.json");
        }
    }
    return report;
}

}  // namespace subdiv::cli
