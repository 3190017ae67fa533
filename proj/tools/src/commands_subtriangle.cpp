#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include <subdiv/quadrature.hpp>
#include <subdiv/stats.hpp>
#include <subdiv/subtriangle_chain.hpp>

#include "commands.hpp"
#include "csv.hpp"

namespace subdiv::cli {

namespace {

constexpr double kDecaySlopeBound = -0.3654;
constexpr std::int64_t kTailSamples = 1000000;
constexpr std::int64_t kEventDraws = 1000000;
constexpr std::int64_t kPerShapeSamples = 20000;
constexpr std::int64_t kGapRatioMcSamples = 10000000;
constexpr int kMaxTrajectoryExports = 64;

double uniform_half_one_cdf(double v) { return std::clamp(2.0 * (v - 0.5), 0.0, 1.0); }

}  // namespace

SummaryReport run_subtriangle(const RunConfig& config) {
    SummaryReport report;
    report.config = config;
    namespace st = subdiv::subtriangle;

    // Limit law of the x coordinate.
    const auto xs = st::simulate_x_limit(config.steps, config.replicas, config.seed, config.threads);
    {
        const auto ks = stats::ks_test(std::vector<double>(xs.begin(), xs.end()), uniform_half_one_cdf);
        report.add_lower("x_limit_ks_pvalue", 0.001, ks.p_value);
        stats::MomentAccumulator acc;
        for (double v : xs) acc.add(v);
        report.add_abs("x_limit_mean", 0.75, acc.mean(), 3.0 * acc.stderr_mean());
    }

    // Height decay rate; needs a long enough horizon for the fit window.
    if (config.steps >= 100) {
        const auto est = st::lyapunov_estimate(config.steps, config.replicas, config.seed,
                                               equilateral_shape(), config.threads);
        report.add("lyapunov_slope_bound", kDecaySlopeBound, est.slope + 3.0 * est.stderr_slope, 0.0,
                   est.slope + 3.0 * est.stderr_slope < kDecaySlopeBound);
        const double predicted = st::stationary_slope_prediction();
        report.add_abs("lyapunov_slope_vs_prediction", predicted, est.slope,
                       3.0 * est.stderr_slope);
    }

    // Tail of -log S at collinear states.
    {
        const std::vector<double> zs{1, 2, 3, 4, 5, 6};
        const auto pts = st::sigma_tail_check(zs, kTailSamples, config.seed + 11);
        for (const auto& p : pts) {
            char name[32];
            std::snprintf(name, sizeof(name), "sigma_tail_z%d", static_cast<int>(p.z));
            report.add(name, p.bound, p.empirical, 3.0 * p.sigma,
                       p.empirical <= p.bound + 3.0 * p.sigma);
        }
    }

    // Drift and event checks of the height ratio.
    {
        const auto rep = st::supermartingale_and_event_checks(kEventDraws, kPerShapeSamples,
                                                              config.seed + 12);
        report.add_abs("event_frequency", 0.01, rep.event_frequency, 3.0 * rep.event_sigma);
        report.add("event_max_height_ratio", 1.0 / 3.0, rep.max_ratio_on_event, 0.0,
                   rep.event_ratio_pass);
        double worst = 0.0;
        bool grid_ok = true;
        for (const auto& g : rep.grid) {
            worst = std::max(worst, g.mean_ratio - 3.0 * g.stderr_ratio);
            grid_ok = grid_ok && g.pass;
        }
        report.add("supermartingale_grid_drift", 1.0, worst, 0.0, grid_ok);
    }

    // Gap-ratio distribution: exact identity plus Monte Carlo validation of
    // the two outer closed forms at one point per branch.
    {
        double max_dev = 0.0;
        for (int i = 1; i < 50; ++i) {
            for (int j = 1; j < 50; ++j) {
                const auto t = st::gap_ratio_cdf_terms(i / 50.0, j / 50.0);
                max_dev = std::max(max_dev, std::abs(t.below + t.inside + t.above - j / 50.0));
            }
        }
        report.add_upper("gap_cdf_identity_max_dev", 1e-10, max_dev);

        int point = 0;
        for (auto [x, z] : {std::pair{0.7, 0.4}, std::pair{0.3, 0.6}}) {
            const auto closed = st::gap_ratio_cdf_terms(x, z);
            const auto below = quadrature::mc_integrate(
                [x = x, z = z](std::span<const double> p) {
                    const double mu = 1.0 - (1.0 - x) * p[0];
                    const double nu = x * (1.0 - p[1]);
                    return (p[2] < nu && st::gap_ratio(mu, nu, p[2]) <= z) ? 1.0 : 0.0;
                },
                3, kGapRatioMcSamples, RandomSource(config.seed + 13, static_cast<std::uint64_t>(point)));
            const auto above = quadrature::mc_integrate(
                [x = x, z = z](std::span<const double> p) {
                    const double mu = 1.0 - (1.0 - x) * p[0];
                    const double nu = x * (1.0 - p[1]);
                    return (p[2] > mu && st::gap_ratio(mu, nu, p[2]) <= z) ? 1.0 : 0.0;
                },
                3, kGapRatioMcSamples, RandomSource(config.seed + 14, static_cast<std::uint64_t>(point)));
            char name[64];
            std::snprintf(name, sizeof(name), "gap_mc_below_x%02d_z%02d", static_cast<int>(x * 100),
                          static_cast<int>(z * 100));
            report.add_abs(name, closed.below, below.value, below.error_estimate + 1e-9);
            std::snprintf(name, sizeof(name), "gap_mc_above_x%02d_z%02d", static_cast<int>(x * 100),
                          static_cast<int>(z * 100));
            report.add_abs(name, closed.above, above.value, above.error_estimate + 1e-9);
            ++point;
        }
    }

    if (!config.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(config.out_dir);
        // Re-runs the leading replicas with the same streams as the main
        // simulation, recording every step. Capped so default configs do not
        // produce gigabyte files.
        const std::int64_t n_export = std::min<std::int64_t>(config.replicas, kMaxTrajectoryExports);
        CsvWriter w((fs::path(config.out_dir) / "subtriangle_trajectory.csv").string(),
                    "replica,step,x,y,log_y,r,R,S");
        for (std::int64_t r = 0; r < n_export; ++r) {
            RandomSource src(config.seed, static_cast<std::uint64_t>(r));
            ShapeCoord s = equilateral_shape();
            double log_y = std::log(s.y);
            for (int k = 1; k <= config.steps; ++k) {
                const auto res = st::step(s, src.next_triple());
                s = res.shape;
                log_y += std::log(res.diag.height_ratio);
                w.field(static_cast<std::int64_t>(r)).field(k).field(s.x).field(s.y).field(log_y)
                    .field(res.diag.height_ratio).field(res.diag.area_factor).field(res.diag.max_side);
                w.end_row();
            }
        }
        report.artifacts.push_back("subtriangle_trajectory.csv");
    }
    return report;
}

}  // namespace subdiv::cli
