#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <subdiv/geometry.hpp>
#include <subdiv/random.hpp>
#include <subdiv/stats.hpp>

namespace subdiv::bisector {

/// The left-bottom subdivision map (a/2, c + b/2, (a+b)/2).
AngleTriple base_map(const AngleTriple& t);

/// The six child triples of one angle-bisector subdivision, in a fixed order.
/// Each child equals base_map applied to one of the six orderings of the
/// input, so the multiset of children matches permute-then-map exactly.
std::array<AngleTriple, 6> children(const AngleTriple& t);

/// One of the six orderings of (a, b, c); k in 0..5 indexes
/// (a,b,c), (b,c,a), (c,a,b), (c,b,a), (b,a,c), (a,c,b).
AngleTriple apply_permutation(const AngleTriple& t, int k);

/// Markov step in the exchangeable representation: base_map followed by a
/// uniformly random permutation of the three new angles.
AngleTriple step_permutation(const AngleTriple& t, RandomSource& src);

/// Markov step that picks one of the six children uniformly.
AngleTriple step_child(const AngleTriple& t, RandomSource& src);

/// Average log contraction ratio of the six maps between two distinct
/// simplex points: (1/6) sum_i log(|f_i(u) - f_i(v)| / |u - v|).
/// Always <= log(sqrt(3)/2) = -0.14384...
/// Throws std::invalid_argument("zero displacement") when u == v.
double pairwise_contraction(const AngleTriple& u, const AngleTriple& v);

/// Log contraction ratio summed over one of the three map pairs
/// (pair_index 0 -> maps 1,2; 1 -> maps 3,4; 2 -> maps 5,6).
/// Always <= log(3/4).
double pair_sum_contraction(const AngleTriple& u, const AngleTriple& v, int pair_index);

enum class Dynamics { permutation, uniform_child };

/// Final triples of independent chains started at the equilateral point
/// (stream = replica id).
std::vector<AngleTriple> simulate_final_triples(int n_steps, std::int64_t n_replicas,
                                                std::uint64_t seed,
                                                Dynamics dynamics = Dynamics::permutation,
                                                int threads = 1);

/// Moment summary of the limiting angle distribution. The second-order
/// statistics average the three components of each sample (the triple is
/// exchangeable); the mean uses the first component so that its standard
/// error is a real convergence check rather than an identity.
struct BisectorMoments {
    double mean_a = 0.0;
    double second_a = 0.0;
    double cross_ab = 0.0;
    double var_a = 0.0;
    double cov_ab = 0.0;
    std::uint64_t n_samples = 0;
    double stderr_mean = 0.0;
    double stderr_second = 0.0;
    double stderr_cross = 0.0;
};

BisectorMoments estimate_moments(std::span<const AngleTriple> samples);
BisectorMoments estimate_moments(int n_steps, std::int64_t n_replicas, std::uint64_t seed,
                                 Dynamics dynamics = Dynamics::permutation, int threads = 1);

/// Counts over the barycentric grid of resolution k: cell (i, j) with
/// i + j <= k receives samples with floor(a * k) = i, floor(b * k) = j.
struct TernaryHistogram {
    int resolution = 0;
    std::vector<std::uint64_t> counts;  // row-major over (i, j), j fast
    std::uint64_t total = 0;

    std::size_t cell_index(int i, int j) const;
    std::uint64_t count(int i, int j) const { return counts[cell_index(i, j)]; }
};

TernaryHistogram build_ternary_histogram(std::span<const AngleTriple> samples, int resolution);

/// Histogram over [0, 1] pooling all three components of every sample (the
/// law of a randomly chosen angle); total mass is 3x the sample count.
stats::Histogram1D build_angle_histogram(std::span<const AngleTriple> samples, int bins);

/// Heuristic atom scan: largest multiplicity of any first component after
/// rounding to the given resolution. For a continuous limit law this stays
/// small; it is a diagnostic, not a proof of atomlessness.
std::uint64_t atom_scan_max_multiplicity(std::span<const AngleTriple> samples,
                                         double resolution = 1e-9);

}  // namespace subdiv::bisector
