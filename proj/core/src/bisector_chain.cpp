#include <subdiv/bisector_chain.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace subdiv::bisector {

AngleTriple base_map(const AngleTriple& t) {
    return AngleTriple::renormalized(0.5 * t.a, t.c + 0.5 * t.b, 0.5 * (t.a + t.b));
}

std::array<AngleTriple, 6> children(const AngleTriple& t) {
    const double a = t.a, b = t.b, c = t.c;
    return {
        AngleTriple::renormalized(0.5 * a, c + 0.5 * b, 0.5 * (a + b)),
        AngleTriple::renormalized(0.5 * a, b + 0.5 * c, 0.5 * (a + c)),
        AngleTriple::renormalized(0.5 * b, a + 0.5 * c, 0.5 * (b + c)),
        AngleTriple::renormalized(0.5 * b, c + 0.5 * a, 0.5 * (a + b)),
        AngleTriple::renormalized(0.5 * c, b + 0.5 * a, 0.5 * (a + c)),
        AngleTriple::renormalized(0.5 * c, a + 0.5 * b, 0.5 * (b + c)),
    };
}

AngleTriple apply_permutation(const AngleTriple& t, int k) {
    switch (k) {
        case 0: return {t.a, t.b, t.c};
        case 1: return {t.b, t.c, t.a};
        case 2: return {t.c, t.a, t.b};
        case 3: return {t.c, t.b, t.a};
        case 4: return {t.b, t.a, t.c};
        case 5: return {t.a, t.c, t.b};
        default: throw std::invalid_argument("apply_permutation: k must be 0..5");
    }
}

AngleTriple step_permutation(const AngleTriple& t, RandomSource& src) {
    return apply_permutation(base_map(t), src.next_index(6));
}

AngleTriple step_child(const AngleTriple& t, RandomSource& src) {
    return children(t)[static_cast<std::size_t>(src.next_index(6))];
}

double pairwise_contraction(const AngleTriple& u, const AngleTriple& v) {
    const double d = simplex_distance(u, v);
    if (d == 0.0) throw std::invalid_argument("zero displacement");
    const auto cu = children(u);
    const auto cv = children(v);
    double sum = 0.0;
    for (int i = 0; i < 6; ++i)
        sum += std::log(simplex_distance(cu[static_cast<std::size_t>(i)],
                                         cv[static_cast<std::size_t>(i)]) / d);
    return sum / 6.0;
}

double pair_sum_contraction(const AngleTriple& u, const AngleTriple& v, int pair_index) {
    if (pair_index < 0 || pair_index > 2)
        throw std::invalid_argument("pair_sum_contraction: pair_index must be 0..2");
    const double d = simplex_distance(u, v);
    if (d == 0.0) throw std::invalid_argument("zero displacement");
    const auto cu = children(u);
    const auto cv = children(v);
    double sum = 0.0;
    for (int i = 2 * pair_index; i < 2 * pair_index + 2; ++i)
        sum += std::log(simplex_distance(cu[static_cast<std::size_t>(i)],
                                         cv[static_cast<std::size_t>(i)]) / d);
    return sum;
}

std::vector<AngleTriple> simulate_final_triples(int n_steps, std::int64_t n_replicas,
                                                std::uint64_t seed, Dynamics dynamics,
                                                int threads) {
    if (n_steps < 1 || n_replicas < 1)
        throw std::invalid_argument("simulate_final_triples: need n_steps >= 1, n_replicas >= 1");
    std::vector<AngleTriple> out(static_cast<std::size_t>(n_replicas));
    auto worker = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t r = lo; r < hi; ++r) {
            RandomSource src(seed, static_cast<std::uint64_t>(r));
            AngleTriple t = equilateral_triple();
            for (int k = 0; k < n_steps; ++k)
                t = dynamics == Dynamics::permutation ? step_permutation(t, src)
                                                      : step_child(t, src);
            out[static_cast<std::size_t>(r)] = t;
        }
    };
    if (threads <= 1) {
        worker(0, n_replicas);
    } else {
        std::vector<std::thread> pool;
        const std::int64_t chunk = (n_replicas + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::int64_t lo = t * chunk;
            const std::int64_t hi = std::min(n_replicas, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

BisectorMoments estimate_moments(std::span<const AngleTriple> samples) {
    if (samples.empty()) throw std::invalid_argument("estimate_moments: empty sample");
    stats::MomentAccumulator first, second, cross;
    for (const AngleTriple& t : samples) {
        first.add(t.a);
        second.add((t.a * t.a + t.b * t.b + t.c * t.c) / 3.0);
        cross.add((t.a * t.b + t.b * t.c + t.c * t.a) / 3.0);
    }
    BisectorMoments m;
    m.mean_a = first.mean();
    m.second_a = second.mean();
    m.cross_ab = cross.mean();
    m.var_a = m.second_a - m.mean_a * m.mean_a;
    m.cov_ab = m.cross_ab - m.mean_a * m.mean_a;
    m.n_samples = first.count();
    m.stderr_mean = first.stderr_mean();
    m.stderr_second = second.stderr_mean();
    m.stderr_cross = cross.stderr_mean();
    return m;
}

BisectorMoments estimate_moments(int n_steps, std::int64_t n_replicas, std::uint64_t seed,
                                 Dynamics dynamics, int threads) {
    const auto samples = simulate_final_triples(n_steps, n_replicas, seed, dynamics, threads);
    return estimate_moments(samples);
}

std::size_t TernaryHistogram::cell_index(int i, int j) const {
    if (i < 0 || j < 0 || i + j > resolution)
        throw std::out_of_range("TernaryHistogram: cell outside simplex");
    // Cells with first index < i occupy sum_{p<i} (resolution - p + 1) slots.
    const std::size_t ii = static_cast<std::size_t>(i);
    const std::size_t k = static_cast<std::size_t>(resolution);
    return ii * (k + 1) - ii * (ii - 1) / 2 + static_cast<std::size_t>(j);
}

TernaryHistogram build_ternary_histogram(std::span<const AngleTriple> samples, int resolution) {
    if (resolution < 1) throw std::invalid_argument("build_ternary_histogram: resolution >= 1");
    TernaryHistogram h;
    h.resolution = resolution;
    const std::size_t k = static_cast<std::size_t>(resolution);
    h.counts.assign((k + 1) * (k + 2) / 2, 0);
    for (const AngleTriple& t : samples) {
        int i = std::min(static_cast<int>(t.a * resolution), resolution);
        int j = std::min(static_cast<int>(t.b * resolution), resolution - i);
        i = std::max(i, 0);
        j = std::max(j, 0);
        ++h.counts[h.cell_index(i, j)];
        ++h.total;
    }
    return h;
}

stats::Histogram1D build_angle_histogram(std::span<const AngleTriple> samples, int bins) {
    stats::Histogram1D h(0.0, 1.0, bins);
    for (const AngleTriple& t : samples) {
        h.add(t.a);
        h.add(t.b);
        h.add(t.c);
    }
    return h;
}

std::uint64_t atom_scan_max_multiplicity(std::span<const AngleTriple> samples,
                                         double resolution) {
    std::unordered_map<long long, std::uint64_t> counts;
    counts.reserve(samples.size());
    std::uint64_t best = 0;
    for (const AngleTriple& t : samples) {
        const long long key = static_cast<long long>(std::llround(t.a / resolution));
        best = std::max(best, ++counts[key]);
    }
    return best;
}

}  // namespace subdiv::bisector
