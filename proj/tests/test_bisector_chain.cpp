#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <subdiv/bisector_chain.hpp>

using namespace subdiv;
using namespace subdiv::bisector;

namespace {

constexpr double kLogSqrt3Over2 = -0.14384103622589045;  // log(sqrt(3)/2)
constexpr double kLogThreeQuarters = -0.2876820724517809;  // log(3/4)

std::array<double, 3> sorted_components(const AngleTriple& t) {
    std::array<double, 3> v{t.a, t.b, t.c};
    std::sort(v.begin(), v.end());
    return v;
}

AngleTriple random_triple(RandomSource& src) {
    // Dirichlet-ish: three exponentials normalized.
    const double e1 = -std::log(1.0 - src.next_uniform());
    const double e2 = -std::log(1.0 - src.next_uniform());
    const double e3 = -std::log(1.0 - src.next_uniform());
    return AngleTriple::renormalized(e1, e2, e3);
}

// Closed form for the log contraction of the first map pair in terms of the
// displacement (y, z) of the last two components.
double pair_sum_closed_form(double y, double z) {
    const double num = (y * y + 3.0 * z * z + 3.0 * y * z) * (3.0 * y * y + z * z + 3.0 * y * z);
    const double den = 16.0 * (y * y + z * z + y * z) * (y * y + z * z + y * z);
    return 0.5 * std::log(num / den);
}

}  // namespace

TEST_CASE("children: equilateral, corner, and a worked example") {
    const auto eq = children(equilateral_triple());
    CHECK(eq[0].a == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(eq[0].b == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eq[0].c == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const auto corner = children({1.0, 0.0, 0.0});
    CHECK(corner[0].a == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(corner[0].b == doctest::Approx(0.0));
    CHECK(corner[0].c == doctest::Approx(0.5).epsilon(1e-14));

    const auto mid = children({0.5, 0.25, 0.25});
    CHECK(mid[0].a == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(mid[0].b == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(mid[0].c == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("children: always on the simplex") {
    RandomSource src(101, 0);
    for (int trial = 0; trial < 5000; ++trial) {
        const AngleTriple t = trial == 0 ? AngleTriple{1, 0, 0} : random_triple(src);
        for (const AngleTriple& ch : children(t)) {
            CHECK(ch.a >= 0.0);
            CHECK(ch.b >= 0.0);
            CHECK(ch.c >= 0.0);
            CHECK(ch.a + ch.b + ch.c == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("children equal base_map over the six input orderings") {
    RandomSource src(102, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const AngleTriple t = random_triple(src);
        const auto kids = children(t);
        // map k -> which child matches base_map(permutation k)
        const int expected_child[6] = {0, 2, 4, 5, 3, 1};
        for (int k = 0; k < 6; ++k) {
            const AngleTriple viaperm = base_map(apply_permutation(t, k));
            const AngleTriple& child = kids[static_cast<std::size_t>(expected_child[k])];
            CHECK(std::abs(viaperm.a - child.a) < 1e-14);
            CHECK(std::abs(viaperm.b - child.b) < 1e-14);
            CHECK(std::abs(viaperm.c - child.c) < 1e-14);
        }
    }
}

TEST_CASE("one- and two-step sorted laws agree between the two dynamics") {
    // From the equilateral point both dynamics give the same sorted support
    // with the same weights; enumerate exactly instead of sampling.
    const AngleTriple eq = equilateral_triple();

    std::vector<std::array<double, 3>> child_sorted, perm_sorted;
    for (int i = 0; i < 6; ++i) child_sorted.push_back(sorted_components(children(eq)[static_cast<std::size_t>(i)]));
    for (int k = 0; k < 6; ++k) perm_sorted.push_back(sorted_components(apply_permutation(base_map(eq), k)));
    std::sort(child_sorted.begin(), child_sorted.end());
    std::sort(perm_sorted.begin(), perm_sorted.end());
    for (int i = 0; i < 6; ++i)
        for (int c = 0; c < 3; ++c)
            CHECK(child_sorted[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] ==
                  doctest::Approx(perm_sorted[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]).epsilon(1e-14));

    // Two steps: 36 equally weighted outcomes each.
    std::vector<std::array<double, 3>> child2, perm2;
    for (int i = 0; i < 6; ++i) {
        const AngleTriple s1 = children(eq)[static_cast<std::size_t>(i)];
        for (int j = 0; j < 6; ++j) child2.push_back(sorted_components(children(s1)[static_cast<std::size_t>(j)]));
    }
    for (int k1 = 0; k1 < 6; ++k1) {
        const AngleTriple s1 = apply_permutation(base_map(eq), k1);
        for (int k2 = 0; k2 < 6; ++k2)
            perm2.push_back(sorted_components(apply_permutation(base_map(s1), k2)));
    }
    std::sort(child2.begin(), child2.end());
    std::sort(perm2.begin(), perm2.end());
    REQUIRE(child2.size() == 36);
    REQUIRE(perm2.size() == 36);
    for (std::size_t i = 0; i < 36; ++i)
        for (std::size_t c = 0; c < 3; ++c)
            CHECK(child2[i][c] == doctest::Approx(perm2[i][c]).epsilon(1e-13));
}

TEST_CASE("step_child picks children uniformly") {
    const AngleTriple t{0.5, 1.0 / 3.0, 1.0 / 6.0};
    const auto kids = children(t);
    std::array<int, 6> counts{};
    const int n = 100000;
    RandomSource src(103, 0);
    for (int i = 0; i < n; ++i) {
        const AngleTriple out = step_child(t, src);
        for (int k = 0; k < 6; ++k) {
            if (std::abs(out.a - kids[static_cast<std::size_t>(k)].a) < 1e-15 &&
                std::abs(out.b - kids[static_cast<std::size_t>(k)].b) < 1e-15) {
                ++counts[static_cast<std::size_t>(k)];
                break;
            }
        }
    }
    int total = 0;
    for (int c : counts) {
        CHECK(std::abs(c / static_cast<double>(n) - 1.0 / 6.0) < 0.005);
        total += c;
    }
    CHECK(total == n);
}

TEST_CASE("pairwise_contraction: bounded by log(sqrt(3)/2)") {
    RandomSource src(104, 0);
    double worst = -1e9;
    for (int trial = 0; trial < 10000; ++trial) {
        const AngleTriple u = random_triple(src);
        AngleTriple v = random_triple(src);
        if (trial % 3 == 0) {
            // Nearby pair: contraction is a local Lipschitz statement too.
            const double eps = 1e-6;
            v = AngleTriple::renormalized(u.a + eps, u.b - 0.5 * eps, u.c - 0.5 * eps);
        }
        const double c = pairwise_contraction(u, v);
        worst = std::max(worst, c);
        CHECK(c <= kLogSqrt3Over2 + 1e-12);
        for (int p = 0; p < 3; ++p) CHECK(pair_sum_contraction(u, v, p) <= kLogThreeQuarters + 1e-12);
    }
    CHECK(worst <= -0.143841 + 1e-12);
}

TEST_CASE("pair sum matches its closed form in the displacement") {
    RandomSource src(105, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        const AngleTriple u = random_triple(src);
        const double y = (src.next_uniform() - 0.5) * 0.2;
        const double z = (src.next_uniform() - 0.5) * 0.2;
        const double x = -(y + z);
        if (u.a + x < 0 || u.b + y < 0 || u.c + z < 0) continue;
        if (std::abs(x) + std::abs(y) + std::abs(z) < 1e-12) continue;
        const AngleTriple v{u.a + x, u.b + y, u.c + z};
        CHECK(pair_sum_contraction(u, v, 0) ==
              doctest::Approx(pair_sum_closed_form(y, z)).epsilon(1e-10));
    }
}

TEST_CASE("pair sum landscape: maximum sits at y = z, not at y = -z") {
    // Grid search the closed form over displacement directions. The max of
    // the first pair sum is log(7/12) at y = z; the direction y = -z gives
    // log(1/4).
    double best = -1e9;
    double best_t = 0.0;
    for (int i = -2000; i <= 2000; ++i) {
        const double t = i / 100.0;  // z / y
        const double v = pair_sum_closed_form(1.0, t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    CHECK(best == doctest::Approx(std::log(7.0 / 12.0)).epsilon(1e-6));
    CHECK(best_t == doctest::Approx(1.0).epsilon(0.02));
    CHECK(pair_sum_closed_form(1.0, -1.0) == doctest::Approx(std::log(0.25)).epsilon(1e-12));
    CHECK(best <= kLogThreeQuarters);
}

TEST_CASE("contraction is symmetric under displacement sign flip") {
    const AngleTriple base = equilateral_triple();
    const double x = 0.05;
    const AngleTriple up{base.a + x, base.b - x, base.c};
    const AngleTriple dn{base.a - x, base.b + x, base.c};
    CHECK(pairwise_contraction(base, up) ==
          doctest::Approx(pairwise_contraction(base, dn)).epsilon(1e-12));
}

TEST_CASE("pairwise_contraction: identical points throw") {
    const AngleTriple t = equilateral_triple();
    CHECK_THROWS_AS(pairwise_contraction(t, t), std::invalid_argument);
}

TEST_CASE("moments: quick run sits near the limit values") {
    const auto m = estimate_moments(60, 100000, 106);
    CHECK(std::abs(m.mean_a - 1.0 / 3.0) < 0.002);
    CHECK(std::abs(m.second_a - 1.0 / 7.0) < 0.002);
    CHECK(std::abs(m.cross_ab - 2.0 / 21.0) < 0.002);
    CHECK(std::abs(m.var_a - 2.0 / 63.0) < 0.002);
    CHECK(std::abs(m.cov_ab + 1.0 / 63.0) < 0.002);
    CHECK(m.n_samples == 100000);
    CHECK(m.var_a == doctest::Approx(m.second_a - m.mean_a * m.mean_a).epsilon(1e-14));

    // Self-consistency relation of the stationary second moments.
    const double lhs = m.second_a;
    const double e_gb = m.second_a * 1.25 + m.cross_ab;       // E(c + b/2)^2 by exchangeability
    const double e_ab2 = 2.0 * m.second_a + 2.0 * m.cross_ab; // E(a + b)^2
    const double rhs = (0.25 * m.second_a + e_gb + 0.25 * e_ab2) / 3.0;
    const double se = 3.0 * std::max({m.stderr_second, m.stderr_cross, 1e-9});
    CHECK(std::abs(lhs - rhs) < 3.0 * se);
}

TEST_CASE("moments: threaded run is identical to single-threaded") {
    const auto a = estimate_moments(30, 20000, 107, Dynamics::permutation, 1);
    const auto b = estimate_moments(30, 20000, 107, Dynamics::permutation, 2);
    CHECK(a.mean_a == b.mean_a);
    CHECK(a.second_a == b.second_a);
    CHECK(a.cross_ab == b.cross_ab);
}

TEST_CASE("stationarity: pooled angle law stops moving between n=60 and n=120") {
    const auto s60 = simulate_final_triples(60, 30000, 108);
    const auto s120 = simulate_final_triples(120, 30000, 109);
    std::vector<double> pooled60, pooled120;
    for (const auto& t : s60) {
        pooled60.push_back(t.a);
        pooled60.push_back(t.b);
        pooled60.push_back(t.c);
    }
    for (const auto& t : s120) {
        pooled120.push_back(t.a);
        pooled120.push_back(t.b);
        pooled120.push_back(t.c);
    }
    const double d = stats::ks_two_sample_statistic(pooled60, pooled120);
    // Threshold at the replica count: components within a triple are
    // dependent, so the pooled size would overstate the information.
    CHECK(d < stats::ks_two_sample_critical_value(30000, 30000, 0.01));
}

TEST_CASE("histograms: cells, pooling and consistency with moments") {
    std::vector<AngleTriple> one{equilateral_triple()};
    const auto th = build_ternary_histogram(one, 8);
    CHECK(th.total == 1);
    std::uint64_t nonzero = 0, sum = 0;
    for (auto c : th.counts) {
        if (c > 0) ++nonzero;
        sum += c;
    }
    CHECK(nonzero == 1);
    CHECK(sum == 1);

    const auto samples = simulate_final_triples(60, 50000, 110);
    const auto h = build_angle_histogram(samples, 64);
    CHECK(h.total() == 3 * samples.size());
    const auto m = estimate_moments(samples);
    CHECK(std::abs(h.midpoint_mean() - m.mean_a) < 0.01);
    CHECK(std::abs(h.midpoint_mean() - 1.0 / 3.0) < 0.005);

    const auto t2 = build_ternary_histogram(samples, 24);
    std::uint64_t total2 = 0;
    for (auto c : t2.counts) total2 += c;
    CHECK(total2 == t2.total);
    CHECK(t2.total == samples.size());
}

TEST_CASE("ternary histogram rejects cells outside the simplex") {
    std::vector<AngleTriple> one{equilateral_triple()};
    const auto th = build_ternary_histogram(one, 4);
    CHECK_THROWS_AS(th.cell_index(3, 2), std::out_of_range);
    CHECK_THROWS_AS(th.cell_index(-1, 0), std::out_of_range);
    CHECK(th.cell_index(4, 0) == th.counts.size() - 1);
    CHECK_THROWS_AS(build_ternary_histogram(one, 0), std::invalid_argument);
}

TEST_CASE("atom scan: continuous-looking law has low multiplicity") {
    const auto samples = simulate_final_triples(60, 200000, 111);
    CHECK(atom_scan_max_multiplicity(samples) <= 8);
}

TEST_CASE("permutation dynamics stays on the simplex for long runs") {
    RandomSource src(112, 0);
    AngleTriple t = equilateral_triple();
    for (int k = 0; k < 20000; ++k) {
        t = step_permutation(t, src);
        REQUIRE(t.on_simplex(1e-12));
    }
}
