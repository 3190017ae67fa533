#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <subdiv/geometry.hpp>
#include <subdiv/random.hpp>

namespace subdiv::subtriangle {

/// Squared side lengths of the child triangle picked on the sides of the
/// unit-longest-side parent: a2 = |B1C1|^2, b2 = |C1A1|^2, c2 = |A1B1|^2.
struct SideLengthsSquared {
    double a2 = 0.0;
    double b2 = 0.0;
    double c2 = 0.0;

    double max() const;
    double min() const;
};

SideLengthsSquared side_lengths_sq(const ShapeCoord& s, const UniformTriple& xi);

/// Per-step quantities of one subtriangle update.
///   height_ratio  r = area_factor / max squared side; y1 = y * r
///   area_factor   R = xi_a xi_b xi_c + (1-xi_a)(1-xi_b)(1-xi_c)
///   max_side      S = longest child side (in (0, 1])
///   mu, nu        horizontal projections of A1 and B1; 0 <= nu <= mu <= 1
///                 when y = 0
///   area          child area = (y/2) * R
struct StepDiagnostics {
    double height_ratio = 0.0;
    double area_factor = 0.0;
    double max_side = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    double area = 0.0;
};

struct StepResult {
    ShapeCoord shape;
    StepDiagnostics diag;
};

/// Exact one-step update in shape coordinates:
///   y1 = y * R / max{a1^2, b1^2, c1^2}
///   x1 = (a1^2 + b1^2 + c1^2 - 2 min) / (2 max), folded into [1/2, 1].
/// Collinear states (y = 0) are legal and use the same formulas.
/// Throws when all three child sides vanish (coincident sample points).
StepResult step(const ShapeCoord& s, const UniformTriple& xi);

/// Independent oracle for step(): places the triangle at A=(0,0), B=(1,0),
/// C=(x,y), picks the three side points explicitly and renormalizes the
/// child with shape_from_vertices. Requires y > 0.
ShapeCoord step_via_vertices(const ShapeCoord& s, const UniformTriple& xi);

/// Longest child side for a collinear parent (y = 0), via the three-case
/// branch on where xi_c falls relative to [nu, mu]. Bit-identical to
/// sqrt(max side_lengths_sq((x,0), xi)).
double max_side_y0(double x, const UniformTriple& xi);

/// The three pieces of E[r(x,0) | xi_a, xi_b] split by the position of xi_c.
struct CondRTerms {
    double i1 = 0.0;
    double i2 = 0.0;
    double i3 = 0.0;
};

/// Closed forms for the conditional expectations of r at y = 0. Domain:
/// x in (0,1), xi_a, xi_b in (0,1); arguments that drive a log argument or
/// denominator to zero or below throw std::domain_error.
CondRTerms closed_form_terms(double x, double xi_a, double xi_b);
double cond_r_given_ab(double x, double xi_a, double xi_b);
double cond_r_given_a(double x, double xi_a);

/// E[log R] over the unit cube: pi^2/9 - 8/3 = -1.5700439...
double expected_log_area_factor();

/// E[log S(x)] for a collinear parent:
///   -5/6 - [x^3 log x + (1-x)^3 log(1-x)] / (3 x (1-x)),
/// with the removable limit -1/2 at x -> 1. Minimum (log 4 - 5)/6 at x = 1/2.
/// Domain (0, 1].
double expected_log_max_side(double x);

/// Variant with log(x) in place of log(1-x) in the second numerator term.
/// It does not satisfy the defining integral identity; kept so the two
/// readings can be compared against quadrature.
double expected_log_max_side_alt(double x);

/// Stationary prediction for lim (log y_n)/n: E[log R] minus twice the
/// average of E[log S(x)] under the uniform [1/2, 1] limit law of x,
/// computed by quadrature. Equals 2/3 - pi^2/9 = -0.4299560...
double stationary_slope_prediction();

/// Quadrature routes to the same quantities, evaluated from the defining
/// integrands rather than the closed forms. The xi_c integral is split at
/// its kink locations nu and mu, which keeps every piece smooth.
double cond_r_given_ab_by_quadrature(double x, double xi_a, double xi_b, double tol = 1e-10);
double cond_r_given_a_by_quadrature(double x, double xi_a, double tol = 2e-9);
double expected_log_max_side_by_quadrature(double x, double tol = 2e-9);
double expected_log_area_factor_by_quadrature(double tol = 2e-9);

struct LyapunovEstimate {
    double slope = 0.0;
    double stderr_slope = 0.0;
    int fit_begin = 0;            // first step index of the fit window
    std::vector<double> mean_log_y;  // mean over replicas, index = step
};

/// Simulates `replicas` chains for n steps from s0 (s0.y > 0 required,
/// n >= 100) and fits the decay rate of log y over steps [n/4, n].
/// The slope is the ordinary least squares fit of the replica-averaged
/// log y path; its standard error is estimated across replicas (each
/// replica contributes one independent fitted slope), because residuals
/// of the averaged path are serially correlated.
LyapunovEstimate lyapunov_estimate(int n, std::int64_t replicas, std::uint64_t seed,
                                   const ShapeCoord& s0, int threads = 1);

struct SupermartingaleGridPoint {
    double x = 0.0;
    double y = 0.0;
    double mean_ratio = 0.0;    // sample mean of r at this shape
    double stderr_ratio = 0.0;
    bool pass = false;          // mean_ratio <= 1 + 3 stderr
};

struct SupermartingaleReport {
    std::vector<SupermartingaleGridPoint> grid;
    double event_frequency = 0.0;   // empirical P(xi_a < 0.1, xi_b > 0.9)
    double event_sigma = 0.0;       // binomial sigma at p = 0.01
    bool event_frequency_pass = false;
    double max_ratio_on_event = 0.0;
    std::uint64_t event_samples = 0;
    bool event_ratio_pass = false;  // every observed r on the event < 1/3
    std::uint64_t n_draws = 0;

    bool all_pass() const;
};

/// Checks the drift and event structure of the height ratio:
///  (i)  on a grid of shapes, the conditional mean of r stays <= 1 within
///       three standard errors (resampled with `per_point_samples` draws);
///  (ii) on the event {xi_a < 0.1, xi_b > 0.9} every observed r is < 1/3
///       (sampled directly inside the event box at every grid shape);
///  (iii) the unconditional frequency of the event over `n_draws` draws is
///       0.01 within three binomial sigmas.
SupermartingaleReport supermartingale_and_event_checks(std::int64_t n_draws,
                                                       std::int64_t per_point_samples,
                                                       std::uint64_t seed);

struct TailPoint {
    double z = 0.0;
    double bound = 0.0;      // min(1, 2 e^-z)
    double empirical = 0.0;  // P(-log S >= z), x uniform on [1/2,1], y = 0
    double sigma = 0.0;      // binomial sigma at the bound
    bool pass = false;       // empirical <= bound + 3 sigma
};

std::vector<TailPoint> sigma_tail_check(std::span<const double> z_grid,
                                        std::int64_t n_samples, std::uint64_t seed);

/// Ratio of the middle gap to the total spread of three collinear abscissae.
/// Uniform on [0,1] when the abscissae are (mu, nu, xi_c) of a collinear
/// step. Throws std::domain_error("zero spread") if all three coincide.
double gap_ratio(double mu, double nu, double xi_c);

/// Closed-form decomposition of P(gap_ratio <= z) by the position of xi_c
/// relative to [nu, mu]: below + inside + above = z for all x in (0,1).
struct GapRatioCdfTerms {
    double below = 0.0;   // xi_c < nu
    double inside = 0.0;  // nu <= xi_c <= mu, equals z/2
    double above = 0.0;   // xi_c > mu
};

GapRatioCdfTerms gap_ratio_cdf_terms(double x, double z);

/// Final x coordinates of independent chains after n steps (stream =
/// replica id). Converges to uniform on [1/2, 1].
std::vector<double> simulate_x_limit(int n, std::int64_t replicas, std::uint64_t seed,
                                     int threads = 1, const ShapeCoord& s0 = {0.5, 0.8660254037844386});

}  // namespace subdiv::subtriangle
