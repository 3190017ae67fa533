#include <subdiv/stats.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace subdiv::stats {

void MomentAccumulator::add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    const double n = na + nb;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta * delta * na * nb / n;
    count_ += other.count_;
}

double MomentAccumulator::variance() const {
    if (count_ < 2) return 0.0;
    return m2_ / static_cast<double>(count_ - 1);
}

double MomentAccumulator::stddev() const { return std::sqrt(variance()); }

double MomentAccumulator::stderr_mean() const {
    if (count_ < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(count_));
}

void CovarianceAccumulator::add(double x, double y) {
    ++count_;
    const double n = static_cast<double>(count_);
    const double dx = x - mean_x_;
    mean_x_ += dx / n;
    mean_y_ += (y - mean_y_) / n;
    cxy_ += dx * (y - mean_y_);
}

void CovarianceAccumulator::merge(const CovarianceAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double dx = other.mean_x_ - mean_x_;
    const double dy = other.mean_y_ - mean_y_;
    cxy_ += other.cxy_ + dx * dy * na * nb / n;
    mean_x_ += dx * (nb / n);
    mean_y_ += dy * (nb / n);
    count_ += other.count_;
}

double CovarianceAccumulator::covariance() const {
    if (count_ < 2) return 0.0;
    return cxy_ / static_cast<double>(count_ - 1);
}

double kolmogorov_survival(double t) {
    if (t <= 0.0) return 1.0;
    constexpr double kTermCutoff = 1e-10;
    double q;
    if (t < 1.0) {
        // Jacobi theta form converges fast for small t.
        const double pi = std::numbers::pi;
        double s = 0.0;
        for (int k = 1; k < 200; k += 2) {
            const double term = std::exp(-static_cast<double>(k) * k * pi * pi / (8.0 * t * t));
            s += term;
            if (term < kTermCutoff) break;
        }
        q = 1.0 - std::sqrt(2.0 * pi) / t * s;
    } else {
        double s = 0.0;
        double sign = 1.0;
        for (int k = 1; k < 200; ++k) {
            const double term = std::exp(-2.0 * static_cast<double>(k) * k * t * t);
            s += sign * term;
            sign = -sign;
            if (term < kTermCutoff) break;
        }
        q = 2.0 * s;
    }
    return std::clamp(q, 0.0, 1.0);
}

KsReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < 10) throw std::invalid_argument("ks_test needs at least 10 samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double lo = f - static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n - f;
        d = std::max({d, lo, hi});
    }
    KsReport r;
    r.d_statistic = d;
    r.n = samples.size();
    r.p_value = kolmogorov_survival(std::sqrt(n) * d);
    return r;
}

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_value(std::size_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0) / static_cast<double>(n));
}

double ks_two_sample_critical_value(std::size_t na, std::size_t nb, double alpha) {
    const double scale = (static_cast<double>(na) + static_cast<double>(nb)) /
                         (static_cast<double>(na) * static_cast<double>(nb));
    return std::sqrt(-0.5 * std::log(alpha / 2.0) * scale);
}

SlopeFit fit_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_slope: size mismatch");
    const std::size_t n = xs.size();
    if (n < 3) throw std::invalid_argument("fit_slope needs at least 3 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_slope: xs are all equal");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        rss += r * r;
    }
    f.stderr_slope = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    return f;
}

Histogram1D::Histogram1D(double lo, double hi, int bins) : lo_(lo), hi_(hi) {
    if (bins < 1 || !(hi > lo)) throw std::invalid_argument("bad histogram range");
    counts_.assign(static_cast<std::size_t>(bins), 0);
}

void Histogram1D::add(double v) { add_n(v, 1); }

void Histogram1D::add_n(double v, std::uint64_t n) {
    const int b = bins();
    int i = static_cast<int>((v - lo_) / (hi_ - lo_) * static_cast<double>(b));
    i = std::clamp(i, 0, b - 1);
    counts_[static_cast<std::size_t>(i)] += n;
    total_ += n;
}

double Histogram1D::bin_left(int i) const {
    return lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(bins());
}

double Histogram1D::bin_right(int i) const {
    return lo_ + (hi_ - lo_) * static_cast<double>(i + 1) / static_cast<double>(bins());
}

double Histogram1D::midpoint_mean() const {
    if (total_ == 0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < bins(); ++i) {
        s += 0.5 * (bin_left(i) + bin_right(i)) * static_cast<double>(counts_[static_cast<std::size_t>(i)]);
    }
    return s / static_cast<double>(total_);
}

}  // namespace subdiv::stats
