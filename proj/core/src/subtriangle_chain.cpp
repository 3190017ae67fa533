#include <subdiv/subtriangle_chain.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <subdiv/quadrature.hpp>
#include <subdiv/stats.hpp>

namespace subdiv::subtriangle {

namespace {

constexpr double kPi = std::numbers::pi;

inline double sq(double v) { return v * v; }

// Horizontal projections of A1 and B1. max_side_y0 and side_lengths_sq must
// share these exact expressions so their outputs agree bit for bit at y = 0.
inline void horizontal_projections(double x, const UniformTriple& xi, double& mu, double& nu) {
    mu = 1.0 - (1.0 - x) * xi.xi_a;
    nu = x * (1.0 - xi.xi_b);
}

inline double area_factor(const UniformTriple& xi) {
    return xi.xi_a * xi.xi_b * xi.xi_c + (1.0 - xi.xi_a) * (1.0 - xi.xi_b) * (1.0 - xi.xi_c);
}

void run_replicas(std::int64_t replicas, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& worker,
                  std::int64_t align = 1) {
    if (threads <= 1) {
        worker(0, replicas);
        return;
    }
    std::vector<std::thread> pool;
    std::int64_t chunk = (replicas + threads - 1) / threads;
    chunk = (chunk + align - 1) / align * align;  // chunk borders on block borders
    for (int t = 0; t < threads; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min(replicas, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
}

}  // namespace

double SideLengthsSquared::max() const { return std::max({a2, b2, c2}); }
double SideLengthsSquared::min() const { return std::min({a2, b2, c2}); }

SideLengthsSquared side_lengths_sq(const ShapeCoord& s, const UniformTriple& xi) {
    double mu, nu;
    horizontal_projections(s.x, xi, mu, nu);
    const double ha = s.y * xi.xi_a;                      // height of A1
    const double hb = s.y * (1.0 - xi.xi_b);              // height of B1
    const double hc = s.y * (1.0 - xi.xi_a - xi.xi_b);    // height gap of A1B1
    SideLengthsSquared out;
    out.a2 = sq(nu - xi.xi_c) + sq(hb);
    out.b2 = sq(mu - xi.xi_c) + sq(ha);
    out.c2 = sq(mu - nu) + sq(hc);
    return out;
}

StepResult step(const ShapeCoord& s, const UniformTriple& xi) {
    const SideLengthsSquared sides = side_lengths_sq(s, xi);
    const double max2 = sides.max();
    if (max2 == 0.0) throw std::domain_error("degenerate child");
    const double min2 = sides.min();
    const double r_big = area_factor(xi);

    StepResult out;
    double x1 = (sides.a2 + sides.b2 + sides.c2 - 2.0 * min2) / (2.0 * max2);
    x1 = std::max(x1, 1.0 - x1);  // fold; the formula already lands in [1/2,1] up to roundoff
    out.shape.x = std::min(x1, 1.0);
    const double ratio = r_big / max2;
    out.shape.y = s.y * ratio;

    out.diag.height_ratio = ratio;
    out.diag.area_factor = r_big;
    out.diag.max_side = std::sqrt(max2);
    horizontal_projections(s.x, xi, out.diag.mu, out.diag.nu);
    out.diag.area = 0.5 * s.y * r_big;
    return out;
}

ShapeCoord step_via_vertices(const ShapeCoord& s, const UniformTriple& xi) {
    if (!(s.y > 0.0)) throw std::domain_error("step_via_vertices: requires y > 0");
    const Vec2 a{0.0, 0.0}, b{1.0, 0.0}, c{s.x, s.y};
    const Vec2 a1 = b + xi.xi_a * (c - b);
    const Vec2 b1 = c + xi.xi_b * (a - c);
    const Vec2 c1 = a + xi.xi_c * (b - a);
    return shape_from_vertices(a1, b1, c1);
}

double max_side_y0(double x, const UniformTriple& xi) {
    double mu, nu;
    horizontal_projections(x, xi, mu, nu);
    if (xi.xi_c < nu) return mu - xi.xi_c;
    if (xi.xi_c <= mu) return mu - nu;
    return xi.xi_c - nu;
}

namespace {

void check_closed_form_domain(double x, double xi_a, double xi_b) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("closed form: x must be in (0,1)");
    if (!(xi_a > 0.0 && xi_a < 1.0 && xi_b > 0.0 && xi_b < 1.0))
        throw std::domain_error("closed form: xi_a, xi_b must be in (0,1)");
    const double p = 1.0 - xi_a + xi_a * x;      // horizontal position of A1
    const double q = 1.0 - x + xi_b * x;         // 1 minus position of B1
    const double w = xi_b * x + (1.0 - x) * (1.0 - xi_a);
    if (!(p > 0.0 && q > 0.0 && w > 0.0)) throw std::domain_error("closed form: log argument <= 0");
}

}  // namespace

CondRTerms closed_form_terms(double x, double xi_a, double xi_b) {
    check_closed_form_domain(x, xi_a, xi_b);
    const double p = 1.0 - xi_a + xi_a * x;
    const double q = 1.0 - x + xi_b * x;
    const double w = xi_b * x + (1.0 - x) * (1.0 - xi_a);
    CondRTerms t;
    t.i1 = (xi_a + xi_b - 1.0) * std::log(w / p) + (1.0 - xi_b) * xi_a * x / p;
    t.i2 = 0.5 * (xi_a + 1.0 - xi_b);
    t.i3 = (xi_a + xi_b - 1.0) * std::log(q / w) + xi_a * (1.0 - xi_b) * (1.0 - x) / q;
    return t;
}

double cond_r_given_ab(double x, double xi_a, double xi_b) {
    check_closed_form_domain(x, xi_a, xi_b);
    const double p = 1.0 - xi_a + xi_a * x;
    const double q = 1.0 - x + xi_b * x;
    // Simplified sum of the three pieces; the rational part combines the
    // non-log remainders of i1 and i3 over the common denominator p*q.
    const double numer = (1.0 - x * x) - xi_a * sq(1.0 - x) + xi_b * x * x;
    return (xi_a + xi_b - 1.0) * std::log(q / p) + 0.5 * (xi_a + 1.0 - xi_b) +
           xi_a * (1.0 - xi_b) * numer / (p * q);
}

double cond_r_given_a(double x, double xi_a) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("cond_r_given_a: x must be in (0,1)");
    if (!(xi_a > 0.0 && xi_a < 1.0))
        throw std::domain_error("cond_r_given_a: xi_a must be in (0,1)");
    const double p = 1.0 - xi_a + xi_a * x;
    const double poly = x * (x + 1.0 - xi_a * (1.0 - x) * (2.0 * x + 3.0 - xi_a * (2.0 - x)));
    const double logs = (1.0 - 2.0 * xi_a) * p *
                        ((1.0 - x * x) * std::log(1.0 - x) + x * x * std::log(p));
    return (poly + logs) / (2.0 * x * x * p);
}

double expected_log_area_factor() { return kPi * kPi / 9.0 - 8.0 / 3.0; }

double expected_log_max_side(double x) {
    if (!(x > 0.0 && x <= 1.0)) throw std::domain_error("expected_log_max_side: x in (0,1]");
    const double u = 1.0 - x;
    if (u < 1e-6) {
        // Series about x = 1; the direct form loses precision as 1-x -> 0.
        const double lu = u > 0.0 ? std::log(u) : 0.0;
        return -0.5 - 0.5 * u - u * u * lu / 3.0 - 2.0 * u * u / 9.0;
    }
    return -5.0 / 6.0 - (x * x * x * std::log(x) + u * u * u * std::log(u)) / (3.0 * x * u);
}

double expected_log_max_side_alt(double x) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("expected_log_max_side_alt: x in (0,1)");
    const double u = 1.0 - x;
    return -5.0 / 6.0 - (x * x * x * std::log(x) + u * u * u * std::log(x)) / (3.0 * x * u);
}

double stationary_slope_prediction() {
    const auto avg = quadrature::integrate_1d(
        [](double x) { return 2.0 * expected_log_max_side(x); }, 0.5, 1.0, 1e-10);
    return expected_log_area_factor() - 2.0 * avg.value;
}

namespace {

// Integral over xi_c of g(S) at y = 0, split at the kinks nu and mu of the
// max-side branch so each piece is smooth.
template <class G>
double integrate_over_xi_c(double x, double xi_a, double xi_b, double tol, G&& g) {
    double mu, nu;
    UniformTriple probe{xi_a, xi_b, 0.0};
    horizontal_projections(x, probe, mu, nu);
    double total = 0.0;
    auto piece = [&](double lo, double hi) {
        if (hi - lo < 1e-14) return;
        total += quadrature::integrate_1d(
                     [&](double xi_c) { return g(UniformTriple{xi_a, xi_b, xi_c}); }, lo, hi, tol)
                     .value;
    };
    piece(0.0, nu);
    piece(nu, mu);
    piece(mu, 1.0);
    return total;
}

}  // namespace

double cond_r_given_ab_by_quadrature(double x, double xi_a, double xi_b, double tol) {
    return integrate_over_xi_c(x, xi_a, xi_b, tol / 3.0, [&](const UniformTriple& xi) {
        const double s = max_side_y0(x, xi);
        return area_factor(xi) / (s * s);
    });
}

double cond_r_given_a_by_quadrature(double x, double xi_a, double tol) {
    return quadrature::integrate_1d(
               [&](double xi_b) { return cond_r_given_ab_by_quadrature(x, xi_a, xi_b, 0.02 * tol); },
               0.0, 1.0, 0.5 * tol)
        .value;
}

double expected_log_max_side_by_quadrature(double x, double tol) {
    return quadrature::integrate_1d(
               [&](double xi_a) {
                   return quadrature::integrate_1d(
                              [&](double xi_b) {
                                  return integrate_over_xi_c(
                                      x, xi_a, xi_b, 0.002 * tol,
                                      [&](const UniformTriple& xi) { return std::log(max_side_y0(x, xi)); });
                              },
                              0.0, 1.0, 0.02 * tol)
                       .value;
               },
               0.0, 1.0, 0.5 * tol)
        .value;
}

double expected_log_area_factor_by_quadrature(double tol) {
    return quadrature::integrate_cube(
               [](std::span<const double> p) {
                   return std::log(area_factor(UniformTriple{p[0], p[1], p[2]}));
               },
               3, tol)
        .value;
}

LyapunovEstimate lyapunov_estimate(int n, std::int64_t replicas, std::uint64_t seed,
                                   const ShapeCoord& s0, int threads) {
    if (n < 100) throw std::invalid_argument("lyapunov_estimate: n must be >= 100");
    if (replicas < 2) throw std::invalid_argument("lyapunov_estimate: replicas must be >= 2");
    if (!(s0.y > 0.0)) throw std::domain_error("lyapunov_estimate: start must have y > 0");

    const int fit_begin = n / 4;
    const int fit_len = n - fit_begin + 1;
    std::vector<double> ks(static_cast<std::size_t>(fit_len));
    for (int i = 0; i < fit_len; ++i) ks[static_cast<std::size_t>(i)] = fit_begin + i;

    std::vector<double> slopes(static_cast<std::size_t>(replicas));

    // Fixed-size replica blocks accumulate the mean path so the reduction
    // order does not depend on the thread count.
    constexpr std::int64_t kBlock = 1024;
    const std::int64_t n_blocks = (replicas + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> block_sums(static_cast<std::size_t>(n_blocks),
                                                std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));

    auto worker = [&](std::int64_t lo, std::int64_t hi) {
        std::vector<double> log_path(static_cast<std::size_t>(n) + 1);
        for (std::int64_t r = lo; r < hi; ++r) {
            RandomSource src(seed, static_cast<std::uint64_t>(r));
            ShapeCoord s = s0;
            double log_y = std::log(s0.y);
            log_path[0] = log_y;
            for (int k = 1; k <= n; ++k) {
                const StepResult res = step(s, src.next_triple());
                s = res.shape;
                log_y += std::log(res.diag.height_ratio);
                log_path[static_cast<std::size_t>(k)] = log_y;
            }
            auto& bs = block_sums[static_cast<std::size_t>(r / kBlock)];
            for (int k = 0; k <= n; ++k) bs[static_cast<std::size_t>(k)] += log_path[static_cast<std::size_t>(k)];
            const auto fit = stats::fit_slope(
                ks, std::span<const double>(log_path.data() + fit_begin, static_cast<std::size_t>(fit_len)));
            slopes[static_cast<std::size_t>(r)] = fit.slope;
        }
    };
    run_replicas(replicas, threads, worker, kBlock);

    stats::MomentAccumulator slope_acc;
    for (double v : slopes) slope_acc.add(v);

    LyapunovEstimate est;
    est.slope = slope_acc.mean();
    est.stderr_slope = slope_acc.stderr_mean();
    est.fit_begin = fit_begin;
    est.mean_log_y.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (const auto& bs : block_sums)
        for (int k = 0; k <= n; ++k) est.mean_log_y[static_cast<std::size_t>(k)] += bs[static_cast<std::size_t>(k)];
    for (double& v : est.mean_log_y) v /= static_cast<double>(replicas);
    return est;
}

bool SupermartingaleReport::all_pass() const {
    if (!event_frequency_pass || !event_ratio_pass) return false;
    for (const auto& g : grid)
        if (!g.pass) return false;
    return true;
}

SupermartingaleReport supermartingale_and_event_checks(std::int64_t n_draws,
                                                       std::int64_t per_point_samples,
                                                       std::uint64_t seed) {
    if (n_draws < 1000 || per_point_samples < 1000)
        throw std::invalid_argument("supermartingale_and_event_checks: too few samples");
    SupermartingaleReport rep;
    rep.n_draws = static_cast<std::uint64_t>(n_draws);

    // (iii) unconditional event frequency.
    RandomSource freq_src(seed, 0);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < n_draws; ++i) {
        const UniformTriple xi = freq_src.next_triple();
        if (xi.xi_a < 0.1 && xi.xi_b > 0.9) ++hits;
    }
    rep.event_frequency = static_cast<double>(hits) / static_cast<double>(n_draws);
    rep.event_sigma = std::sqrt(0.01 * 0.99 / static_cast<double>(n_draws));
    rep.event_frequency_pass = std::abs(rep.event_frequency - 0.01) <= 3.0 * rep.event_sigma;

    // Shape grid; y capped by the unit-longest-side constraint x^2 + y^2 <= 1.
    std::vector<ShapeCoord> shapes;
    for (double x : {0.5, 0.55, 0.65, 0.75, 0.85, 0.95}) {
        const double ymax = std::sqrt(1.0 - x * x);
        for (double f : {0.25, 0.6, 0.95}) shapes.push_back({x, f * ymax});
    }
    shapes.push_back({0.75, 0.2});

    rep.max_ratio_on_event = 0.0;
    std::uint64_t stream = 1;
    for (const ShapeCoord& s : shapes) {
        RandomSource src(seed, stream++);
        stats::MomentAccumulator acc;
        for (std::int64_t i = 0; i < per_point_samples; ++i) {
            const UniformTriple xi = src.next_triple();
            const StepResult res = step(s, xi);
            acc.add(res.diag.height_ratio);
            if (xi.xi_a < 0.1 && xi.xi_b > 0.9) {
                rep.max_ratio_on_event = std::max(rep.max_ratio_on_event, res.diag.height_ratio);
                ++rep.event_samples;
            }
        }
        SupermartingaleGridPoint p;
        p.x = s.x;
        p.y = s.y;
        p.mean_ratio = acc.mean();
        p.stderr_ratio = acc.stderr_mean();
        p.pass = p.mean_ratio <= 1.0 + 3.0 * p.stderr_ratio;
        rep.grid.push_back(p);

        // Direct sampling inside the event box guarantees coverage of the
        // r < 1/3 check at every shape.
        RandomSource esrc(seed, stream++);
        for (std::int64_t i = 0; i < per_point_samples / 10; ++i) {
            UniformTriple xi;
            xi.xi_a = 0.1 * esrc.next_uniform();
            xi.xi_b = 0.9 + 0.1 * esrc.next_uniform();
            xi.xi_c = esrc.next_uniform();
            const StepResult res = step(s, xi);
            rep.max_ratio_on_event = std::max(rep.max_ratio_on_event, res.diag.height_ratio);
            ++rep.event_samples;
        }
    }
    rep.event_ratio_pass = rep.max_ratio_on_event < 1.0 / 3.0;
    return rep;
}

std::vector<TailPoint> sigma_tail_check(std::span<const double> z_grid,
                                        std::int64_t n_samples, std::uint64_t seed) {
    if (n_samples < 1000) throw std::invalid_argument("sigma_tail_check: too few samples");
    std::vector<std::int64_t> counts(z_grid.size(), 0);
    RandomSource src(seed, 0);
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const double x = 0.5 + 0.5 * src.next_uniform();
        const UniformTriple xi = src.next_triple();
        const double sigma = -std::log(max_side_y0(x, xi));
        for (std::size_t j = 0; j < z_grid.size(); ++j)
            if (sigma >= z_grid[j]) ++counts[j];
    }
    std::vector<TailPoint> out(z_grid.size());
    for (std::size_t j = 0; j < z_grid.size(); ++j) {
        TailPoint& p = out[j];
        p.z = z_grid[j];
        p.bound = std::min(1.0, 2.0 * std::exp(-p.z));
        p.empirical = static_cast<double>(counts[j]) / static_cast<double>(n_samples);
        p.sigma = std::sqrt(p.bound * (1.0 - p.bound) / static_cast<double>(n_samples));
        p.pass = p.empirical <= p.bound + 3.0 * p.sigma;
    }
    return out;
}

double gap_ratio(double mu, double nu, double xi_c) {
    double lo = std::min({mu, nu, xi_c});
    double hi = std::max({mu, nu, xi_c});
    const double spread = hi - lo;
    if (spread == 0.0) throw std::domain_error("zero spread");
    const double mid = mu + nu + xi_c - lo - hi;
    return (mid - lo) / spread;
}

GapRatioCdfTerms gap_ratio_cdf_terms(double x, double z) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("gap_ratio_cdf_terms: x in (0,1)");
    if (!(z > 0.0 && z < 1.0)) throw std::domain_error("gap_ratio_cdf_terms: z in (0,1)");
    GapRatioCdfTerms t;
    if (x < z) {
        t.below = (3.0 * z - x * z * z - z * x - x) * x / (6.0 * z * (1.0 - x));
        t.above = (3.0 * z * z + z * z * x * x - 3.0 * z * z * x + z * x * x - 3.0 * z * x + x * x) /
                  (6.0 * z * (1.0 - x));
    } else {
        t.below = (3.0 * x - z * x * x - x * z - z) * z / (6.0 * x * (1.0 - z));
        t.above = sq(1.0 - x) * z * z / (6.0 * (1.0 - z) * x);
    }
    t.inside = 0.5 * z;
    return t;
}

std::vector<double> simulate_x_limit(int n, std::int64_t replicas, std::uint64_t seed,
                                     int threads, const ShapeCoord& s0) {
    if (n < 1 || replicas < 1)
        throw std::invalid_argument("simulate_x_limit: need n >= 1, replicas >= 1");
    std::vector<double> out(static_cast<std::size_t>(replicas));
    auto worker = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t r = lo; r < hi; ++r) {
            RandomSource src(seed, static_cast<std::uint64_t>(r));
            ShapeCoord s = s0;
            for (int k = 0; k < n; ++k) s = step(s, src.next_triple()).shape;
            out[static_cast<std::size_t>(r)] = s.x;
        }
    };
    run_replicas(replicas, threads, worker);
    return out;
}

}  // namespace subdiv::subtriangle
