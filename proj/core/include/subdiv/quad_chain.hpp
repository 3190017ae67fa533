#pragma once

#include <cstdint>
#include <vector>

#include <subdiv/geometry.hpp>
#include <subdiv/random.hpp>

namespace subdiv::quadchain {

/// Reduced state of the quadrilateral chain: the two "horizontal" side
/// vectors. Along any trajectory |u - v| halves exactly at every step.
struct PairState {
    Vec2 u;
    Vec2 v;
    int step = 0;
};

/// One step of the two-case midpoint recursion:
///   coin = 0 -> {u, (u+v)/2},  coin = 1 -> {v, (u+v)/2}.
/// The second component is always the newly created vector.
PairState pair_step(const PairState& s, int coin);

/// Child selection for the full vertex chain. E, F, G, H are the side
/// midpoints of AB, BC, CD, DA and M is the intersection of EG and FH;
/// index 0..3 picks AEMH, EBFM, MFCG, HMGD. The child is rescaled by 2
/// about its own centroid, which keeps coordinates bounded over long runs
/// without affecting the shape.
Quadrilateral quad_child(const Quadrilateral& q, int index);

/// Runs n pair steps with fair coins and returns the endpoint of the vector
/// created at step n. All such points lie on the segment between the
/// endpoints of u0 and v0.
Vec2 simulate_pair_limit(PairState s0, RandomSource& src, int n);

/// Scale-free distance from being a parallelogram:
/// (|(b-a)-(c-d)| + |(d-a)-(c-b)|) / perimeter. Zero iff q is a parallelogram.
double parallelogram_defect(const Quadrilateral& q);

/// A-priori envelope constant for the defect decay: every child chain from q
/// satisfies defect_n <= 2^(1-n) * defect_envelope_scale(q). Combines the
/// exact relation defect_n * perimeter_n = 2^-n * defect_0 * perimeter_0
/// with the perimeter floor 2 * (distance from the origin to the horizontal
/// pair segment + same for the vertical pair).
double defect_envelope_scale(const Quadrilateral& q);

/// Parameter t of the orthogonal projection of p onto the line through u0
/// and v0 (t = 0 at u0, t = 1 at v0). Projection absorbs roundoff off the
/// segment.
double segment_parameter(Vec2 p, Vec2 u0, Vec2 v0);

/// Distance from p to the segment [u0, v0].
double distance_to_segment(Vec2 p, Vec2 u0, Vec2 v0);

struct TrajectoryRow {
    int step = 0;
    Vec2 u;
    Vec2 v;
    double defect = 0.0;
};

/// Simulates the full vertex chain for n steps, recording after each step
/// the horizontal pair (b-a, c-d) and the parallelogram defect. Row 0 holds
/// the initial state.
std::vector<TrajectoryRow> simulate_vertex_trajectory(const Quadrilateral& q0,
                                                      RandomSource& src, int n);

/// Segment parameters of X_n over independent replicas (stream = replica id).
std::vector<double> sample_limit_parameters(const PairState& s0, int n_steps,
                                            std::int64_t replicas, std::uint64_t seed,
                                            int threads = 1);

/// Random convex quadrilateral with vertices in angular order on a noisy
/// circle. With on_dyadic_grid set, coordinates are snapped to the 1/32 grid
/// so that midpoint arithmetic stays exact in doubles over 40+ steps.
Quadrilateral random_convex_quadrilateral(RandomSource& src, bool on_dyadic_grid);

}  // namespace subdiv::quadchain
