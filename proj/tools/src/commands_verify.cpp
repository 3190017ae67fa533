#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include <subdiv/bisector_chain.hpp>
#include <subdiv/quadrature.hpp>
#include <subdiv/stats.hpp>
#include <subdiv/subtriangle_chain.hpp>

#include "commands.hpp"

namespace subdiv::cli {

namespace {

namespace st = subdiv::subtriangle;

constexpr double kLogSqrt3Over2 = -0.14384103622589045;
constexpr double kLogThreeQuarters = -0.2876820724517809;
constexpr double kLogMaxSideAtHalf = -0.6022842731466849;  // (log 4 - 5)/6

struct FormCheck {
    std::string name;
    std::string grid;
    double max_abs_dev = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

AngleTriple random_simplex_point(RandomSource& src) {
    const double e1 = -std::log(1.0 - src.next_uniform());
    const double e2 = -std::log(1.0 - src.next_uniform());
    const double e3 = -std::log(1.0 - src.next_uniform());
    return AngleTriple::renormalized(e1, e2, e3);
}

ShapeCoord random_shape(RandomSource& src, double min_y) {
    for (;;) {
        const double x = 0.5 + 0.5 * src.next_uniform();
        const double ymax = std::sqrt(std::max(0.0, 1.0 - x * x));
        const double y = ymax * src.next_uniform();
        if (y >= min_y) return {x, y};
    }
}

}  // namespace

SummaryReport run_verify(const RunConfig& config) {
    SummaryReport report;
    report.config = config;
    std::vector<FormCheck> forms;
    auto record = [&](std::string name, std::string grid, double dev, double tol) {
        forms.push_back({name, std::move(grid), dev, tol, dev <= tol});
        report.add_upper(std::move(name), tol, dev);
    };

    // Oracle self-checks.
    {
        const auto lin = quadrature::integrate_1d([](double x) { return x; }, 0.0, 1.0, 1e-12);
        record("oracle_linear_1d", "single integral", std::abs(lin.value - 0.5), 1e-12);
        const auto lg = quadrature::integrate_1d([](double x) { return std::log(x); }, 0.0, 1.0, 1e-10);
        record("oracle_log_endpoint", "single integral", std::abs(lg.value + 1.0), 1e-9);
        const auto cube = quadrature::integrate_cube(
            [](std::span<const double>) { return 1.0; }, 3, 1e-12);
        record("oracle_cube_const", "single integral", std::abs(cube.value - 1.0), 1e-12);
    }

    // Expected log of the area factor: closed constant against quadrature.
    record("elog_area_factor_dev", "unit cube",
           std::abs(st::expected_log_area_factor() - st::expected_log_area_factor_by_quadrature(2e-9)),
           1e-8);

    // Expected log of the max side across the x grid, plus the pinned value
    // at x = 1/2.
    {
        double dev = 0.0;
        for (double x : config.x_grid)
            dev = std::max(dev, std::abs(st::expected_log_max_side(x) -
                                         st::expected_log_max_side_by_quadrature(x, 2e-9)));
        char grid[64];
        std::snprintf(grid, sizeof(grid), "%zu x values", config.x_grid.size());
        record("elog_max_side_max_dev", grid, dev, 1e-8);
        record("elog_max_side_at_half_dev", "x = 1/2",
               std::abs(st::expected_log_max_side(0.5) - kLogMaxSideAtHalf), 1e-12);
    }

    // Conditional expectations of the height ratio at y = 0.
    {
        const std::vector<double> xi_grid{0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95};
        double d1 = 0, d2 = 0, d3 = 0, dab = 0;
        for (double x : config.x_grid) {
            for (double xa : xi_grid) {
                for (double xb : xi_grid) {
                    const auto t = st::closed_form_terms(x, xa, xb);
                    const double mu = 1.0 - (1.0 - x) * xa;
                    const double nu = x * (1.0 - xb);
                    auto piece = [&](double lo, double hi, auto side) {
                        return quadrature::integrate_1d(
                                   [&](double xc) {
                                       const double big_r =
                                           xa * xb * xc + (1.0 - xa) * (1.0 - xb) * (1.0 - xc);
                                       const double s = side(xc);
                                       return big_r / (s * s);
                                   },
                                   lo, hi, 1e-10)
                            .value;
                    };
                    d1 = std::max(d1, std::abs(t.i1 - piece(0.0, nu, [&](double xc) { return mu - xc; })));
                    d2 = std::max(d2, std::abs(t.i2 - piece(nu, mu, [&](double) { return mu - nu; })));
                    d3 = std::max(d3, std::abs(t.i3 - piece(mu, 1.0, [&](double xc) { return xc - nu; })));
                    dab = std::max(dab, std::abs(st::cond_r_given_ab(x, xa, xb) -
                                                 st::cond_r_given_ab_by_quadrature(x, xa, xb)));
                }
            }
        }
        char grid[80];
        std::snprintf(grid, sizeof(grid), "%zu x * 10 xi_a * 10 xi_b", config.x_grid.size());
        record("i1_max_dev", grid, d1, 1e-8);
        record("i2_max_dev", grid, d2, 1e-8);
        record("i3_max_dev", grid, d3, 1e-8);
        record("cond_r_ab_max_dev", grid, dab, 1e-8);

        double da = 0;
        for (double x : config.x_grid)
            for (double xa : xi_grid)
                da = std::max(da, std::abs(st::cond_r_given_a(x, xa) -
                                           st::cond_r_given_a_by_quadrature(x, xa, 2e-9)));
        std::snprintf(grid, sizeof(grid), "%zu x * 10 xi_a", config.x_grid.size());
        record("cond_r_a_max_dev", grid, da, 1e-8);

        double dn = 0;
        for (double x : config.x_grid) {
            const auto total = quadrature::integrate_1d(
                [&](double xa) { return st::cond_r_given_a(x, xa); }, 0.0, 1.0, 1e-9);
            dn = std::max(dn, std::abs(total.value - 1.0));
        }
        std::snprintf(grid, sizeof(grid), "%zu x values", config.x_grid.size());
        record("cond_r_a_normalization_max_dev", grid, dn, 1e-6);
    }

    // Step equivalence against the vertex-construction oracle.
    {
        RandomSource src(config.seed, 101);
        double dev = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const ShapeCoord s = random_shape(src, 1e-9);
            const UniformTriple xi = src.next_triple();
            const ShapeCoord fast = st::step(s, xi).shape;
            const ShapeCoord slow = st::step_via_vertices(s, xi);
            dev = std::max({dev, std::abs(fast.x - slow.x), std::abs(fast.y - slow.y)});
        }
        record("step_equiv_max_dev", "1e5 random (shape, draw)", dev, 1e-10);
    }

    // Branch consistency of the collinear max side (exact).
    {
        RandomSource src(config.seed, 102);
        double dev = 0.0;
        for (int i = 0; i < 1000000; ++i) {
            const double x = 0.5 + 0.5 * src.next_uniform();
            const UniformTriple xi = src.next_triple();
            const double s = st::max_side_y0(x, xi);
            dev = std::max(dev, std::abs(s * s - st::side_lengths_sq({x, 0.0}, xi).max()));
        }
        record("branch_consistency_max_dev", "1e6 random draws", dev, 0.0);
    }

    // Monotonicity of the height ratio in y (exact).
    {
        RandomSource src(config.seed, 103);
        double worst = -1.0;
        for (int i = 0; i < 1000000; ++i) {
            const ShapeCoord s = random_shape(src, 1e-12);
            const UniformTriple xi = src.next_triple();
            const double ry = st::step(s, xi).diag.height_ratio;
            const double r0 = st::step({s.x, 0.0}, xi).diag.height_ratio;
            worst = std::max(worst, ry - r0);
        }
        record("r_monotone_max_excess", "1e6 random draws", std::max(worst, 0.0), 0.0);
    }

    // Contraction certification for the bisector maps.
    {
        RandomSource src(config.seed, 104);
        double avg_max = -1e9, pair_max = -1e9;
        for (int i = 0; i < 10000; ++i) {
            const AngleTriple u = random_simplex_point(src);
            const AngleTriple v = random_simplex_point(src);
            if (simplex_distance(u, v) == 0.0) continue;
            avg_max = std::max(avg_max, bisector::pairwise_contraction(u, v));
            for (int p = 0; p < 3; ++p)
                pair_max = std::max(pair_max, bisector::pair_sum_contraction(u, v, p));
        }
        record("contraction_max", "1e4 random pairs", avg_max, kLogSqrt3Over2 + 1e-12);
        record("contraction_pair_sum_max", "1e4 random pairs", pair_max, kLogThreeQuarters + 1e-12);
    }

    // Gap-ratio law: identity, uniformity, and the collinear one-step law.
    {
        double max_dev = 0.0;
        for (int i = 1; i < 50; ++i) {
            for (int j = 1; j < 50; ++j) {
                const auto t = st::gap_ratio_cdf_terms(i / 50.0, j / 50.0);
                max_dev = std::max(max_dev, std::abs(t.below + t.inside + t.above - j / 50.0));
            }
        }
        record("gap_cdf_identity_max_dev", "49 x 49 (x, z) grid", max_dev, 1e-10);

        double worst_d = 0.0;
        for (double x : {0.51, 0.75, 0.99}) {
            RandomSource src(config.seed, 105);
            std::vector<double> vals;
            vals.reserve(1000000);
            for (int i = 0; i < 1000000; ++i) {
                const UniformTriple xi = src.next_triple();
                const double mu = 1.0 - (1.0 - x) * xi.xi_a;
                const double nu = x * (1.0 - xi.xi_b);
                vals.push_back(st::gap_ratio(mu, nu, xi.xi_c));
            }
            const auto ks = stats::ks_test(std::move(vals),
                                           [](double v) { return std::clamp(v, 0.0, 1.0); });
            worst_d = std::max(worst_d, ks.d_statistic);
        }
        record("gap_ratio_uniform_ks_d", "3 x values, 1e6 draws each", worst_d,
               stats::ks_critical_value(1000000, 0.01));

        RandomSource src(config.seed, 106);
        std::vector<double> xs;
        xs.reserve(100000);
        for (int i = 0; i < 100000; ++i) xs.push_back(st::step({0.75, 0.0}, src.next_triple()).shape.x);
        const auto ks = stats::ks_test(std::move(xs), [](double v) {
            return std::clamp(2.0 * (v - 0.5), 0.0, 1.0);
        });
        report.add_lower("x_one_step_ks_pvalue", 0.01, ks.p_value);
        forms.push_back({"x_one_step_ks_pvalue", "1e5 one-step draws from y = 0", ks.p_value, 0.01,
                         ks.p_value > 0.01});
    }

    if (!config.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(config.out_dir);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& f : forms)
            arr.push_back({{"name", f.name},
                           {"grid", f.grid},
                           {"max_abs_dev", f.max_abs_dev},
                           {"tolerance", f.tolerance},
                           {"pass", f.pass}});
        nlohmann::json j{{"forms", arr}, {"config", data_config_to_json(config)}};
        std::ofstream out(fs::path(config.out_dir) / "verification.json", std::ios::binary);
        out << j.dump(2) << '\n';
        report.artifacts.push_back("verification.json");
    }
    return report;
}

}  // namespace subdiv::cli
