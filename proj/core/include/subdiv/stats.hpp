#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace subdiv::stats {

/// Streaming mean/variance accumulator (Welford update, Chan merge).
/// merge() of two accumulators equals accumulating the concatenated data,
/// so shards can be reduced in any grouping.
class MomentAccumulator {
public:
    void add(double x);
    void merge(const MomentAccumulator& other);

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double sum_sq_dev() const { return m2_; }
    /// Sample variance (n - 1 denominator).
    double variance() const;
    double stddev() const;
    /// Standard error of the mean.
    double stderr_mean() const;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Streaming covariance accumulator with the pairwise co-moment update form.
class CovarianceAccumulator {
public:
    void add(double x, double y);
    void merge(const CovarianceAccumulator& other);

    std::uint64_t count() const { return count_; }
    double mean_x() const { return mean_x_; }
    double mean_y() const { return mean_y_; }
    /// Sample covariance (n - 1 denominator).
    double covariance() const;

private:
    std::uint64_t count_ = 0;
    double mean_x_ = 0.0;
    double mean_y_ = 0.0;
    double cxy_ = 0.0;
};

struct KsReport {
    double d_statistic = 0.0;
    std::size_t n = 0;
    double p_value = 0.0;
};

/// Survival function Q(t) of the Kolmogorov distribution, evaluated with the
/// series appropriate for the regime of t; terms below 1e-10 are dropped.
double kolmogorov_survival(double t);

/// One-sample two-sided Kolmogorov-Smirnov test of `samples` against the
/// reference `cdf` (nondecreasing, range [0,1]). The p-value uses the
/// asymptotic Kolmogorov distribution at sqrt(n) * D.
/// Requires at least 10 samples.
KsReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS statistic sup |ECDF_a - ECDF_b|.
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);

/// Critical D for the one-sample test at significance alpha (asymptotic).
double ks_critical_value(std::size_t n, double alpha);

/// Critical D for the two-sample test at significance alpha (asymptotic).
double ks_two_sample_critical_value(std::size_t na, std::size_t nb, double alpha);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

/// Ordinary least squares line fit; stderr of the slope comes from the
/// residual variance. Requires >= 3 points and non-constant xs.
SlopeFit fit_slope(std::span<const double> xs, std::span<const double> ys);

/// Fixed-width histogram over [lo, hi); values outside are clamped to the
/// boundary bins.
class Histogram1D {
public:
    Histogram1D(double lo, double hi, int bins);

    void add(double v);
    void add_n(double v, std::uint64_t n);

    int bins() const { return static_cast<int>(counts_.size()); }
    double bin_left(int i) const;
    double bin_right(int i) const;
    std::uint64_t count(int i) const { return counts_[static_cast<std::size_t>(i)]; }
    std::uint64_t total() const { return total_; }
    /// Mean of bin midpoints weighted by counts.
    double midpoint_mean() const;

private:
    double lo_, hi_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

}  // namespace subdiv::stats
