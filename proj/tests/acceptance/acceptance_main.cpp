// Acceptance suite: one test case per quantitative criterion, each printing
// a single PASS/FAIL line with its runtime. Sample sizes and tolerances are
// fixed here, not configurable.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <subdiv/bisector_chain.hpp>
#include <subdiv/quad_chain.hpp>
#include <subdiv/quadrature.hpp>
#include <subdiv/random.hpp>
#include <subdiv/stats.hpp>
#include <subdiv/subtriangle_chain.hpp>

using namespace subdiv;
namespace st = subdiv::subtriangle;

namespace {

class CriterionTimer {
public:
    CriterionTimer(int number, double budget_seconds, std::string what)
        : number_(number), budget_seconds_(budget_seconds), what_(std::move(what)) {}

    void finish(bool pass) const {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        CHECK_MESSAGE(secs < budget_seconds_, "criterion ", number_, " over its runtime budget");
        std::printf("[criterion %02d] %s  %s (%.2f s, budget %g s)\n", number_,
                    pass ? "PASS" : "FAIL", what_.c_str(), secs, budget_seconds_);
        std::fflush(stdout);
    }

private:
    int number_;
    double budget_seconds_;
    std::string what_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const Quadrilateral kCanonicalQuad{{0, 0}, {4, 0}, {5, 3}, {1, 4}};

double uniform01_cdf(double v) { return std::clamp(v, 0.0, 1.0); }
double uniform_half_one_cdf(double v) { return std::clamp(2.0 * (v - 0.5), 0.0, 1.0); }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE_MESSAGE(f.good(), "missing file: ", p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("criterion 01: quadrilateral pair halving and defect envelope") {
    CriterionTimer timer(1, 1, "pair |u_n - v_n| = 2^-n |u_0 - v_0| to 1e-12 over 40 steps; defect <= 2^(1-n) envelope");
    bool pass = true;

    std::vector<Quadrilateral> quads{kCanonicalQuad};
    RandomSource gen(1, 1000);
    for (int i = 0; i < 100; ++i) quads.push_back(quadchain::random_convex_quadrilateral(gen, true));

    double halving_dev = 0.0;
    double envelope = 0.0;
    for (std::size_t qi = 0; qi < quads.size(); ++qi) {
        const Quadrilateral& q = quads[qi];
        quadchain::PairState s{q.b - q.a, q.c - q.d, 0};
        const double d0 = norm(s.u - s.v);
        RandomSource coins(1, 2000 + qi);
        if (d0 > 0.0) {
            for (int n = 1; n <= 40; ++n) {
                s = quadchain::pair_step(s, coins.next_bit());
                const double expected = std::ldexp(d0, -n);
                halving_dev = std::max(halving_dev, std::abs(norm(s.u - s.v) - expected) / expected);
            }
        }
        RandomSource vertex_coins(1, 3000 + qi);
        const auto rows = quadchain::simulate_vertex_trajectory(q, vertex_coins, 40);
        if (rows[0].defect > 1e-15) {
            const double scale = quadchain::defect_envelope_scale(q);
            for (const auto& row : rows) {
                if (row.step == 0) continue;
                envelope = std::max(envelope, row.defect / std::ldexp(scale, -(row.step - 1)));
            }
        } else {
            for (const auto& row : rows)
                if (row.defect > 1e-14) envelope = std::max(envelope, 2.0);
        }
    }
    CHECK(halving_dev <= 1e-12);
    CHECK(envelope <= 1.0);
    pass = halving_dev <= 1e-12 && envelope <= 1.0;
    timer.finish(pass);
}

TEST_CASE("criterion 02: quadrilateral limit law is uniform on the segment") {
    CriterionTimer timer(2, 5, "segment parameter of X_30 over 1e5 replicas, KS vs U[0,1] at p > 0.001");
    const quadchain::PairState s0{kCanonicalQuad.b - kCanonicalQuad.a,
                                  kCanonicalQuad.c - kCanonicalQuad.d, 0};
    const auto ts = quadchain::sample_limit_parameters(s0, 30, 100000, 1, 2);
    const auto ks = stats::ks_test(std::vector<double>(ts.begin(), ts.end()), uniform01_cdf);
    CHECK(ks.p_value > 0.001);
    timer.finish(ks.p_value > 0.001);
}

TEST_CASE("criterion 03: bisector contraction bound") {
    CriterionTimer timer(3, 1, "pairwise contraction <= -0.143841 + 1e-12 on 1e4 random simplex pairs");
    RandomSource src(1, 0);
    auto random_triple = [&]() {
        const double e1 = -std::log(1.0 - src.next_uniform());
        const double e2 = -std::log(1.0 - src.next_uniform());
        const double e3 = -std::log(1.0 - src.next_uniform());
        return AngleTriple::renormalized(e1, e2, e3);
    };
    double worst = -1e9;
    int counted = 0;
    while (counted < 10000) {
        const AngleTriple u = random_triple();
        const AngleTriple v = random_triple();
        if (simplex_distance(u, v) == 0.0) continue;
        worst = std::max(worst, bisector::pairwise_contraction(u, v));
        ++counted;
    }
    CHECK(worst <= -0.143841 + 1e-12);
    timer.finish(worst <= -0.143841 + 1e-12);
}

TEST_CASE("criterion 04: bisector limit moments") {
    CriterionTimer timer(4, 60, "1e6 replicas at 60 steps: E a, E a^2, E ab, Cov within 1e-3");
    const auto m = bisector::estimate_moments(60, 1000000, 1, bisector::Dynamics::permutation, 2);
    const bool ok_mean = std::abs(m.mean_a - 1.0 / 3.0) < 1e-3;
    const bool ok_second = std::abs(m.second_a - 1.0 / 7.0) < 1e-3;
    const bool ok_cross = std::abs(m.cross_ab - 2.0 / 21.0) < 1e-3;
    const bool ok_cov = std::abs(m.cov_ab + 1.0 / 63.0) < 1e-3;
    CHECK(ok_mean);
    CHECK(ok_second);
    CHECK(ok_cross);
    CHECK(ok_cov);
    timer.finish(ok_mean && ok_second && ok_cross && ok_cov);
}

TEST_CASE("criterion 05: subtriangle step equals the vertex-construction oracle") {
    CriterionTimer timer(5, 5, "step vs step_via_vertices within 1e-10 on 1e5 random cases");
    RandomSource src(1, 0);
    double dev = 0.0;
    int counted = 0;
    while (counted < 100000) {
        const double x = 0.5 + 0.5 * src.next_uniform();
        const double ymax = std::sqrt(std::max(0.0, 1.0 - x * x));
        const double y = ymax * src.next_uniform();
        if (y <= 1e-9) continue;
        const UniformTriple xi = src.next_triple();
        const ShapeCoord fast = st::step({x, y}, xi).shape;
        const ShapeCoord slow = st::step_via_vertices({x, y}, xi);
        dev = std::max({dev, std::abs(fast.x - slow.x), std::abs(fast.y - slow.y)});
        ++counted;
    }
    CHECK(dev < 1e-10);
    timer.finish(dev < 1e-10);
}

TEST_CASE("criterion 06: closed forms match the quadrature oracle") {
    CriterionTimer timer(6, 60, "I1..I3, E[r|a,b], E[r|a] to 1e-8; normalization to 1e-6; E log R and E log S to 1e-8");
    const std::vector<double> x_grid{0.51, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.99};
    const std::vector<double> xi_grid{0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95};

    double term_dev = 0.0, ab_dev = 0.0;
    for (double x : x_grid) {
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
                term_dev = std::max(term_dev,
                                    std::abs(t.i1 - piece(0.0, nu, [&](double xc) { return mu - xc; })));
                term_dev = std::max(term_dev,
                                    std::abs(t.i2 - piece(nu, mu, [&](double) { return mu - nu; })));
                term_dev = std::max(term_dev,
                                    std::abs(t.i3 - piece(mu, 1.0, [&](double xc) { return xc - nu; })));
                ab_dev = std::max(ab_dev, std::abs(st::cond_r_given_ab(x, xa, xb) -
                                                   st::cond_r_given_ab_by_quadrature(x, xa, xb)));
            }
        }
    }
    const bool ok_terms = term_dev < 1e-8;
    const bool ok_ab = ab_dev < 1e-8;
    CHECK(ok_terms);
    CHECK(ok_ab);

    double a_dev = 0.0;
    for (double x : x_grid)
        for (double xa : xi_grid)
            a_dev = std::max(a_dev, std::abs(st::cond_r_given_a(x, xa) -
                                             st::cond_r_given_a_by_quadrature(x, xa, 2e-9)));
    const bool ok_a = a_dev < 1e-8;
    CHECK(ok_a);

    double norm_dev = 0.0;
    for (double x : x_grid) {
        const auto total = quadrature::integrate_1d(
            [&](double xa) { return st::cond_r_given_a(x, xa); }, 0.0, 1.0, 1e-9);
        norm_dev = std::max(norm_dev, std::abs(total.value - 1.0));
    }
    const bool ok_norm = norm_dev < 1e-6;
    CHECK(ok_norm);

    const double logr_dev =
        std::abs(st::expected_log_area_factor() - st::expected_log_area_factor_by_quadrature(2e-9));
    const bool ok_logr = logr_dev < 1e-8;
    CHECK(ok_logr);

    double logs_dev = 0.0;
    for (double x : x_grid)
        logs_dev = std::max(logs_dev, std::abs(st::expected_log_max_side(x) -
                                               st::expected_log_max_side_by_quadrature(x, 2e-9)));
    const bool ok_logs = logs_dev < 1e-8;
    CHECK(ok_logs);
    const double at_half = std::abs(st::expected_log_max_side(0.5) - (std::log(4.0) - 5.0) / 6.0);
    const bool ok_half = at_half < 1e-12;
    CHECK(ok_half);

    timer.finish(ok_terms && ok_ab && ok_a && ok_norm && ok_logr && ok_logs && ok_half);
}

TEST_CASE("criterion 07: height decay rate") {
    CriterionTimer timer(7, 120, "Lyapunov slope over steps [50,200], 1e4 replicas: below -0.3654 and equal to the stationary prediction");
    const auto est = st::lyapunov_estimate(200, 10000, 1, equilateral_shape(), 2);
    const bool ok_bound = est.slope + 3.0 * est.stderr_slope < -0.3654;
    const double predicted = st::stationary_slope_prediction();
    const bool ok_match = std::abs(est.slope - predicted) < 3.0 * est.stderr_slope;
    CHECK(est.fit_begin == 50);
    CHECK(ok_bound);
    CHECK(ok_match);
    // The quadrature prediction itself is pinned analytically.
    CHECK(std::abs(predicted - (2.0 / 3.0 - std::numbers::pi * std::numbers::pi / 9.0)) < 1e-8);
    timer.finish(ok_bound && ok_match);
}

TEST_CASE("criterion 08: tail of -log S under 2 e^{-z}") {
    CriterionTimer timer(8, 10, "survival at z = 1..6 over 1e6 samples within 2 e^-z + 3 sigma");
    const std::vector<double> zs{1, 2, 3, 4, 5, 6};
    const auto pts = st::sigma_tail_check(zs, 1000000, 1);
    bool pass = true;
    for (const auto& p : pts) {
        CHECK(p.empirical <= p.bound + 3.0 * p.sigma);
        pass = pass && p.pass;
    }
    timer.finish(pass);
}

TEST_CASE("criterion 09: x converges to uniform on [1/2, 1]") {
    CriterionTimer timer(9, 60, "KS of x_50 over 1e5 replicas at p > 0.001; CDF identity to 1e-10; MC of both outer terms");
    const auto xs = st::simulate_x_limit(50, 100000, 1, 2);
    const auto ks = stats::ks_test(std::vector<double>(xs.begin(), xs.end()), uniform_half_one_cdf);
    const bool ok_ks = ks.p_value > 0.001;
    CHECK(ok_ks);

    double identity_dev = 0.0;
    for (int i = 1; i < 50; ++i)
        for (int j = 1; j < 50; ++j) {
            const auto t = st::gap_ratio_cdf_terms(i / 50.0, j / 50.0);
            identity_dev = std::max(identity_dev, std::abs(t.below + t.inside + t.above - j / 50.0));
        }
    const bool ok_identity = identity_dev < 1e-10;
    CHECK(ok_identity);

    bool ok_mc = true;
    int point = 0;
    for (auto [x, z] : {std::pair{0.7, 0.4}, std::pair{0.3, 0.6}}) {
        const auto closed = st::gap_ratio_cdf_terms(x, z);
        const auto below = quadrature::mc_integrate(
            [x = x, z = z](std::span<const double> p) {
                const double mu = 1.0 - (1.0 - x) * p[0];
                const double nu = x * (1.0 - p[1]);
                return (p[2] < nu && st::gap_ratio(mu, nu, p[2]) <= z) ? 1.0 : 0.0;
            },
            3, 10000000, RandomSource(1, 7000 + point));
        const auto above = quadrature::mc_integrate(
            [x = x, z = z](std::span<const double> p) {
                const double mu = 1.0 - (1.0 - x) * p[0];
                const double nu = x * (1.0 - p[1]);
                return (p[2] > mu && st::gap_ratio(mu, nu, p[2]) <= z) ? 1.0 : 0.0;
            },
            3, 10000000, RandomSource(1, 7100 + point));
        CHECK(std::abs(below.value - closed.below) <= below.error_estimate + 1e-9);
        CHECK(std::abs(above.value - closed.above) <= above.error_estimate + 1e-9);
        ok_mc = ok_mc && std::abs(below.value - closed.below) <= below.error_estimate + 1e-9 &&
                std::abs(above.value - closed.above) <= above.error_estimate + 1e-9;
        ++point;
    }
    timer.finish(ok_ks && ok_identity && ok_mc);
}

TEST_CASE("criterion 10: event frequency and the height-ratio cap on the event") {
    CriterionTimer timer(10, 10, "P(xi_a < 0.1, xi_b > 0.9) = 0.01 within 3 sigma over 1e6 draws; r < 1/3 on every event sample");
    const auto rep = st::supermartingale_and_event_checks(1000000, 20000, 1);
    CHECK(rep.event_frequency_pass);
    CHECK(rep.event_ratio_pass);
    CHECK(rep.max_ratio_on_event < 1.0 / 3.0);
    bool grid_ok = true;
    for (const auto& g : rep.grid) grid_ok = grid_ok && g.pass;
    CHECK(grid_ok);
    timer.finish(rep.event_frequency_pass && rep.event_ratio_pass && grid_ok);
}

TEST_CASE("criterion 11: CLI reruns are byte-identical") {
    CriterionTimer timer(11, 60, "same config twice (and across thread counts) gives byte-identical data files");
#ifndef SUBDIV_CLI_PATH
    FAIL("SUBDIV_CLI_PATH not defined");
#else
    namespace fs = std::filesystem;
    const std::string cli = SUBDIV_CLI_PATH;
    const fs::path base = fs::current_path() / "acceptance_determinism";
    fs::remove_all(base);
    fs::create_directories(base);

    struct Job {
        std::string args;
        std::vector<std::string> files;
        bool expect_zero_exit;
    };
    const std::vector<Job> jobs{
        {"quad --steps 30 --replicas 20000 --seed 11 --format csv --out %OUT% --threads %T%",
         {"quad_trajectory.csv", "quad_limit.csv", "report.csv"},
         true},
        {"bisector --steps 25 --replicas 4000 --seed 11 --bins 16 --out %OUT% --threads %T%",
         {"bisector_samples.csv", "bisector_angle_hist.csv", "bisector_ternary.csv",
          "bisector_moments.json"},
         false},
        {"subtriangle --steps 40 --replicas 300 --seed 11 --out %OUT% --threads %T%",
         {"subtriangle_trajectory.csv"},
         false},
        {"verify --seed 11 --out %OUT% --threads %T%", {"verification.json"}, true},
    };

    bool pass = true;

    // Usage errors exit with 2.
    {
        const std::string bad = cli + " quad --steps -3 > /dev/null 2>&1";
        const int rc = std::system(bad.c_str());
        const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
        CHECK(code == 2);
        pass = pass && code == 2;
    }

    int idx = 0;
    for (const auto& job : jobs) {
        const fs::path d1 = base / ("a" + std::to_string(idx));
        const fs::path d2 = base / ("b" + std::to_string(idx));
        const fs::path d3 = base / ("c" + std::to_string(idx));
        auto run_one = [&](const fs::path& dir, const char* threads) {
            std::string cmd = cli + " " + job.args + " > /dev/null";
            cmd.replace(cmd.find("%OUT%"), 5, dir.string());
            cmd.replace(cmd.find("%T%"), 3, threads);
            const int rc = std::system(cmd.c_str());
            return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
        };
        const int r1 = run_one(d1, "1");
        const int r2 = run_one(d2, "1");
        const int r3 = run_one(d3, "2");
        if (job.expect_zero_exit) {
            CHECK(r1 == 0);
            pass = pass && r1 == 0;
        }
        CHECK(r1 == r2);
        CHECK(r1 == r3);
        CHECK((r1 == 0 || r1 == 1));
        for (const auto& f : job.files) {
            const bool rerun_same = slurp(d1 / f) == slurp(d2 / f);
            const bool threads_same = slurp(d1 / f) == slurp(d3 / f);
            CHECK_MESSAGE(rerun_same, "rerun differs: ", f);
            CHECK_MESSAGE(threads_same, "thread count changed bytes: ", f);
            pass = pass && rerun_same && threads_same;
        }
        ++idx;
    }
    fs::remove_all(base);
    timer.finish(pass);
#endif
}

TEST_CASE("diagnostics: stationarity and atom scan") {
    // Companion checks for the two qualitative limit statements: the pooled
    // angle law stops moving between n = 60 and n = 120 (two-sample KS at
    // 1%), and no value repeats suspiciously often at 1e-9 resolution.
    CriterionTimer timer(12, 60, "[diagnostic] two-sample KS n=60 vs n=120 at 1%; atom scan multiplicity <= 8");
    const std::int64_t n = 100000;
    const auto a = bisector::simulate_final_triples(60, n, 21, bisector::Dynamics::permutation, 2);
    const auto b = bisector::simulate_final_triples(120, n, 22, bisector::Dynamics::permutation, 2);
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
    const double crit = stats::ks_two_sample_critical_value(static_cast<std::size_t>(n),
                                                            static_cast<std::size_t>(n), 0.01);
    const bool ok_ks = d <= crit;
    CHECK(ok_ks);

    const auto big = bisector::simulate_final_triples(60, 1000000, 23,
                                                      bisector::Dynamics::permutation, 2);
    const auto mult = bisector::atom_scan_max_multiplicity(big);
    const bool ok_atoms = mult <= 8;
    CHECK(ok_atoms);
    timer.finish(ok_ks && ok_atoms);
}
