#include <subdiv/quad_chain.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace subdiv::quadchain {

PairState pair_step(const PairState& s, int coin) {
    const Vec2 mid = 0.5 * (s.u + s.v);
    return {coin == 0 ? s.u : s.v, mid, s.step + 1};
}

namespace {

Vec2 intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    const Vec2 d1 = p2 - p1;
    const Vec2 d2 = q2 - q1;
    const double det = cross(d1, d2);
    if (std::abs(det) < 1e-300) throw std::invalid_argument("degenerate quadrilateral");
    const double t = cross(q1 - p1, d2) / det;
    return p1 + t * d1;
}

Quadrilateral rescale_about_centroid(const Quadrilateral& q, double factor) {
    const Vec2 g = 0.25 * (q.a + q.b + q.c + q.d);
    auto map = [&](Vec2 v) { return g + factor * (v - g); };
    return {map(q.a), map(q.b), map(q.c), map(q.d)};
}

}  // namespace

Quadrilateral quad_child(const Quadrilateral& q, int index) {
    if (index < 0 || index > 3) throw std::invalid_argument("quad_child: index must be 0..3");
    if (!is_convex(q)) throw std::invalid_argument("quad_child: quadrilateral must be convex");

    const Vec2 e = 0.5 * (q.a + q.b);
    const Vec2 f = 0.5 * (q.b + q.c);
    const Vec2 g = 0.5 * (q.c + q.d);
    const Vec2 h = 0.5 * (q.d + q.a);
    const Vec2 m = intersect(e, g, f, h);

    Quadrilateral child;
    switch (index) {
        case 0: child = {q.a, e, m, h}; break;
        case 1: child = {e, q.b, f, m}; break;
        case 2: child = {m, f, q.c, g}; break;
        default: child = {h, m, g, q.d}; break;
    }
    return rescale_about_centroid(child, 2.0);
}

Vec2 simulate_pair_limit(PairState s0, RandomSource& src, int n) {
    if (n < 1) throw std::invalid_argument("simulate_pair_limit: n must be >= 1");
    PairState s = s0;
    for (int i = 0; i < n; ++i) s = pair_step(s, src.next_bit());
    return s.v;
}

double parallelogram_defect(const Quadrilateral& q) {
    const double horizontal = norm((q.b - q.a) - (q.c - q.d));
    const double vertical = norm((q.d - q.a) - (q.c - q.b));
    return (horizontal + vertical) / perimeter(q);
}

double defect_envelope_scale(const Quadrilateral& q) {
    const Vec2 origin{0.0, 0.0};
    const double horizontal = distance_to_segment(origin, q.b - q.a, q.c - q.d);
    const double vertical = distance_to_segment(origin, q.d - q.a, q.c - q.b);
    if (!(horizontal + vertical > 0.0))
        throw std::invalid_argument("defect_envelope_scale: degenerate pair segments");
    return parallelogram_defect(q) * perimeter(q) / (4.0 * (horizontal + vertical));
}

double segment_parameter(Vec2 p, Vec2 u0, Vec2 v0) {
    const Vec2 d = v0 - u0;
    return dot(p - u0, d) / norm_sq(d);
}

double distance_to_segment(Vec2 p, Vec2 u0, Vec2 v0) {
    const Vec2 d = v0 - u0;
    double t = dot(p - u0, d) / norm_sq(d);
    t = std::min(std::max(t, 0.0), 1.0);
    return norm(p - (u0 + t * d));
}

std::vector<TrajectoryRow> simulate_vertex_trajectory(const Quadrilateral& q0,
                                                      RandomSource& src, int n) {
    std::vector<TrajectoryRow> rows;
    rows.reserve(static_cast<std::size_t>(n) + 1);
    Quadrilateral q = q0;
    rows.push_back({0, q.b - q.a, q.c - q.d, parallelogram_defect(q)});
    for (int k = 1; k <= n; ++k) {
        // Two independent fair bits pick the child; the horizontal pair then
        // sees the two-case recursion with the first bit as its coin.
        const int horizontal = src.next_bit();
        const int vertical = src.next_bit();
        const int index = horizontal == 0 ? (vertical == 0 ? 0 : 1) : (vertical == 0 ? 3 : 2);
        q = quad_child(q, index);
        rows.push_back({k, q.b - q.a, q.c - q.d, parallelogram_defect(q)});
    }
    return rows;
}

std::vector<double> sample_limit_parameters(const PairState& s0, int n_steps,
                                            std::int64_t replicas, std::uint64_t seed,
                                            int threads) {
    std::vector<double> out(static_cast<std::size_t>(replicas));
    auto worker = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t r = lo; r < hi; ++r) {
            RandomSource src(seed, static_cast<std::uint64_t>(r));
            const Vec2 x = simulate_pair_limit(s0, src, n_steps);
            out[static_cast<std::size_t>(r)] = segment_parameter(x, s0.u, s0.v);
        }
    };
    if (threads <= 1) {
        worker(0, replicas);
    } else {
        std::vector<std::thread> pool;
        const std::int64_t chunk = (replicas + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::int64_t lo = t * chunk;
            const std::int64_t hi = std::min(replicas, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

Quadrilateral random_convex_quadrilateral(RandomSource& src, bool on_dyadic_grid) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        double angles[4];
        for (double& a : angles) a = src.next_uniform() * 6.283185307179586;
        std::sort(std::begin(angles), std::end(angles));
        bool spread = true;
        for (int i = 0; i < 3; ++i)
            if (angles[i + 1] - angles[i] < 0.3) spread = false;
        if (angles[0] + 6.283185307179586 - angles[3] < 0.3) spread = false;
        if (!spread) continue;

        Vec2 v[4];
        for (int i = 0; i < 4; ++i) {
            const double radius = 2.0 + 2.0 * src.next_uniform();
            v[i] = {4.0 + radius * std::cos(angles[i]), 4.0 + radius * std::sin(angles[i])};
            if (on_dyadic_grid) {
                v[i].x = std::round(v[i].x * 32.0) / 32.0;
                v[i].y = std::round(v[i].y * 32.0) / 32.0;
            }
        }
        const Quadrilateral q{v[0], v[1], v[2], v[3]};
        if (is_convex(q) && std::abs(signed_area(q)) > 0.5) return q;
    }
    throw std::runtime_error("random_convex_quadrilateral: generation failed");
}

}  // namespace subdiv::quadchain
