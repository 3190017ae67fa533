#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <subdiv/random.hpp>
#include <subdiv/stats.hpp>

namespace subdiv::quadrature {

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

/// Thrown when an adaptive pass runs out of its evaluation budget. Carries
/// the partial result accumulated so far.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(const char* msg, IntegrationResult partial)
        : std::runtime_error(msg), partial_(partial) {}
    const IntegrationResult& partial() const { return partial_; }

private:
    IntegrationResult partial_;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1]. Nodes are interior, so endpoint
// singularities of the integrand are never evaluated.
inline constexpr std::array<double, 8> kGk15Nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kGauss7Weights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15_panel(F& f, double a, double b, double& k15, double& abs_err) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double kron = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGk15Nodes[static_cast<std::size_t>(i)];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        kron += kKronrodWeights[static_cast<std::size_t>(i)] * (f1 + f2);
        if (i % 2 == 1) gauss += kGauss7Weights[static_cast<std::size_t>(i / 2)] * (f1 + f2);
    }
    const double fc = f(mid);
    kron += kKronrodWeights[7] * fc;
    gauss += kGauss7Weights[3] * fc;
    k15 = kron * h;
    abs_err = std::abs((kron - gauss) * h);
}

struct Interval {
    double a, b, tol;
};

}  // namespace detail

/// Adaptive 1-D integration of f over [a, b] to absolute tolerance tol.
/// Interior-node rule plus bisection, so integrable endpoint log
/// singularities are fine. Subintervals narrower than 1e-12 are accepted
/// as-is; that floor bounds how far the bisection chases a singular endpoint.
/// Throws BudgetExhausted (carrying the partial result) past max_evals.
template <class F>
IntegrationResult integrate_1d(F&& f, double a, double b, double tol,
                               std::int64_t max_evals = 50'000'000) {
    if (!(a < b)) throw std::invalid_argument("integrate_1d: requires a < b");
    constexpr double kMinWidth = 1e-12;

    IntegrationResult res;
    std::vector<detail::Interval> work;
    work.push_back({a, b, tol});
    while (!work.empty()) {
        const detail::Interval iv = work.back();
        work.pop_back();
        double k15, err;
        detail::gk15_panel(f, iv.a, iv.b, k15, err);
        res.evaluations += 15;
        if (err <= iv.tol || (iv.b - iv.a) < kMinWidth) {
            res.value += k15;
            res.error_estimate += err;
            continue;
        }
        if (res.evaluations > max_evals) {
            res.value += k15;
            res.error_estimate += err;
            for (const auto& rest : work) {
                double rk, re;
                detail::gk15_panel(f, rest.a, rest.b, rk, re);
                res.evaluations += 15;
                res.value += rk;
                res.error_estimate += re;
            }
            throw BudgetExhausted("integrate_1d: evaluation budget exhausted", res);
        }
        const double m = 0.5 * (iv.a + iv.b);
        work.push_back({iv.a, m, 0.5 * iv.tol});
        work.push_back({m, iv.b, 0.5 * iv.tol});
    }
    return res;
}

/// Iterated adaptive integration of f over the unit square or cube.
/// f is called with a span of `dims` coordinates. Inner levels run an order
/// of magnitude tighter than the level above them; otherwise their residual
/// noise sits above the outer tolerance and drives the outer pass into
/// useless refinement. The reported error estimate combines the outer
/// estimate with the inner tolerance allowances.
template <class F>
IntegrationResult integrate_cube(F&& f, int dims, double tol,
                                 std::int64_t max_evals = 4'000'000'000LL) {
    if (dims < 1 || dims > 3) throw std::invalid_argument("integrate_cube: dims must be 1..3");
    const std::array<double, 3> level_tol{0.5 * tol, 0.05 * tol, 0.005 * tol};
    std::array<double, 3> point{};
    std::int64_t evals = 0;

    struct Level {
        F& f;
        int dims;
        const std::array<double, 3>& level_tol;
        std::array<double, 3>& point;
        std::int64_t& evals;
        std::int64_t max_evals;

        double run(int k) {
            auto g = [&](double x) {
                point[static_cast<std::size_t>(k)] = x;
                if (k + 1 == dims) {
                    ++evals;
                    return f(std::span<const double>(point.data(), static_cast<std::size_t>(dims)));
                }
                return run(k + 1);
            };
            IntegrationResult r = integrate_1d(g, 0.0, 1.0, level_tol[static_cast<std::size_t>(k)], max_evals);
            if (evals > max_evals)
                throw BudgetExhausted("integrate_cube: evaluation budget exhausted", {r.value, r.error_estimate, evals});
            if (k > 0) return r.value;
            outer_err = r.error_estimate;
            return r.value;
        }
        double outer_err = 0.0;
    };

    Level lvl{f, dims, level_tol, point, evals, max_evals, 0.0};
    IntegrationResult res;
    res.value = lvl.run(0);
    res.evaluations = evals;
    double allowance = 0.0;
    for (int k = 1; k < dims; ++k) allowance += level_tol[static_cast<std::size_t>(k)];
    res.error_estimate = lvl.outer_err + allowance;
    return res;
}

/// Monte Carlo integration over the unit cube; error_estimate is three
/// standard errors of the sample mean. Deterministic given the source key.
template <class F>
IntegrationResult mc_integrate(F&& f, int dims, std::int64_t n, RandomSource src) {
    if (dims < 1 || dims > 3) throw std::invalid_argument("mc_integrate: dims must be 1..3");
    if (n < 2) throw std::invalid_argument("mc_integrate: n must be >= 2");
    stats::MomentAccumulator acc;
    std::array<double, 3> point{};
    for (std::int64_t i = 0; i < n; ++i) {
        for (int d = 0; d < dims; ++d) point[static_cast<std::size_t>(d)] = src.next_uniform();
        acc.add(f(std::span<const double>(point.data(), static_cast<std::size_t>(dims))));
    }
    IntegrationResult res;
    res.value = acc.mean();
    res.error_estimate = 3.0 * acc.stderr_mean();
    res.evaluations = n;
    return res;
}

}  // namespace subdiv::quadrature
