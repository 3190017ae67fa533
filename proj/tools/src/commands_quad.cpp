#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <vector>

#include <subdiv/quad_chain.hpp>
#include <subdiv/stats.hpp>

#include "commands.hpp"
#include "csv.hpp"

namespace subdiv::cli {

namespace {

// Dedicated stream ids far away from the replica range.
constexpr std::uint64_t kTrajectoryStream = 1ULL << 63;
constexpr std::uint64_t kQuadGenStream = (1ULL << 63) + 1;
constexpr std::uint64_t kCoinStreamBase = (1ULL << 63) + 2;

const Quadrilateral kDefaultQuad{{0, 0}, {4, 0}, {5, 3}, {1, 4}};

}  // namespace

SummaryReport run_quad(const RunConfig& config) {
    SummaryReport report;
    report.config = config;
    const int steps = config.steps;

    // Halving, segment and defect checks over the default quadrilateral plus
    // dyadic-grid random convex ones, where midpoint arithmetic is exact.
    std::vector<Quadrilateral> quads{kDefaultQuad};
    {
        RandomSource gen(config.seed, kQuadGenStream);
        for (int i = 0; i < 100; ++i) quads.push_back(quadchain::random_convex_quadrilateral(gen, true));
    }
    double halving_dev = 0.0;
    double envelope_ratio = 0.0;
    double segment_dev = 0.0;
    for (std::size_t qi = 0; qi < quads.size(); ++qi) {
        const Quadrilateral& q = quads[qi];
        RandomSource coins(config.seed, kCoinStreamBase + qi);
        const auto rows = quadchain::simulate_vertex_trajectory(q, coins, steps);
        const double d0 = rows[0].defect;
        const quadchain::PairState s0{q.b - q.a, q.c - q.d, 0};
        const double pair0 = norm(s0.u - s0.v);

        quadchain::PairState s = s0;
        RandomSource pair_coins(config.seed, kCoinStreamBase + 4096 + qi);
        for (int n = 1; n <= steps; ++n) {
            s = quadchain::pair_step(s, pair_coins.next_bit());
            if (pair0 > 0.0) {
                const double expected = std::ldexp(pair0, -n);
                halving_dev = std::max(halving_dev, std::abs(norm(s.u - s.v) - expected) / expected);
            }
            segment_dev = std::max(segment_dev,
                                   quadchain::distance_to_segment(s.v, s0.u, s0.v) / pair0);
        }
        if (d0 > 1e-15) {
            const double scale = quadchain::defect_envelope_scale(q);
            for (const auto& row : rows) {
                if (row.step == 0) continue;
                envelope_ratio = std::max(envelope_ratio, row.defect / std::ldexp(scale, -(row.step - 1)));
            }
        } else {
            for (const auto& row : rows)
                if (row.defect > 1e-14) envelope_ratio = std::max(envelope_ratio, 2.0);
        }
    }
    report.add_upper("pair_halving_max_rel_err", 1e-12, halving_dev);
    report.add_upper("x_on_segment_max_rel_dist", 1e-10, segment_dev);
    report.add_upper("defect_envelope_max_ratio", 1.0, envelope_ratio);

    // Limit law of the newly created endpoint.
    const quadchain::PairState s0{kDefaultQuad.b - kDefaultQuad.a,
                                  kDefaultQuad.c - kDefaultQuad.d, 0};
    const auto ts = quadchain::sample_limit_parameters(s0, steps, config.replicas, config.seed,
                                                       config.threads);
    const auto ks = stats::ks_test(std::vector<double>(ts.begin(), ts.end()),
                                   [](double t) { return std::clamp(t, 0.0, 1.0); });
    report.add_lower("limit_ks_pvalue", 0.001, ks.p_value);
    report.add("limit_ks_d", stats::ks_critical_value(ts.size(), 0.01), ks.d_statistic, 0.0,
               ks.d_statistic <= stats::ks_critical_value(ts.size(), 0.01));

    if (!config.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(config.out_dir);
        {
            RandomSource coins(config.seed, kTrajectoryStream);
            const auto rows = quadchain::simulate_vertex_trajectory(kDefaultQuad, coins, steps);
            CsvWriter w((fs::path(config.out_dir) / "quad_trajectory.csv").string(),
                        "step,ux,uy,vx,vy,defect");
            for (const auto& row : rows) {
                w.field(row.step).field(row.u.x).field(row.u.y).field(row.v.x).field(row.v.y)
                    .field(row.defect);
                w.end_row();
            }
            report.artifacts.push_back("quad_trajectory.csv");
        }
        {
            CsvWriter w((fs::path(config.out_dir) / "quad_limit.csv").string(), "replica,t");
            for (std::size_t r = 0; r < ts.size(); ++r) {
                w.field(static_cast<std::int64_t>(r)).field(ts[r]);
                w.end_row();
            }
            report.artifacts.push_back("quad_limit.csv");
        }
    }
    return report;
}

}  // namespace subdiv::cli
