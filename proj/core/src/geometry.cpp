#include <subdiv/geometry.hpp>

#include <algorithm>
#include <stdexcept>

namespace subdiv {

AngleTriple AngleTriple::renormalized(double a, double b, double c) {
    double s = a + b + c;
    if (!(s > 0.0)) throw std::invalid_argument("angle triple must have positive sum");
    return {a / s, b / s, c / s};
}

bool AngleTriple::on_simplex(double tol) const {
    return a >= -tol && b >= -tol && c >= -tol && std::abs(a + b + c - 1.0) <= tol;
}

AngleTriple equilateral_triple() { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; }

double simplex_distance(const AngleTriple& u, const AngleTriple& v) {
    double da = u.a - v.a;
    double db = u.b - v.b;
    double dc = u.c - v.c;
    return std::sqrt(da * da + db * db + dc * dc);
}

bool ShapeCoord::is_valid(double tol) const {
    if (!(x >= 0.5 - tol && x <= 1.0 + tol)) return false;
    if (!(y >= -tol && y <= std::sqrt(3.0) / 2.0 + tol)) return false;
    // The longest side is the unit segment, so the apex cannot be farther
    // than 1 from either endpoint.
    return x * x + y * y <= 1.0 + 4.0 * tol;
}

namespace {

// Apex coordinates of vertex w once side (p, q) is scaled onto [0,1],
// reflected so x >= 1/2.
ShapeCoord place_on_side(Vec2 p, Vec2 q, Vec2 w) {
    Vec2 side = q - p;
    double d2 = norm_sq(side);
    double x = dot(w - p, side) / d2;
    double y = std::abs(cross(side, w - p)) / d2;
    if (x < 0.5) x = 1.0 - x;
    x = std::min(std::max(x, 0.5), 1.0);
    return {x, y};
}

}  // namespace

ShapeCoord shape_from_vertices(Vec2 a, Vec2 b, Vec2 c) {
    const double lab = norm_sq(b - a);
    const double lbc = norm_sq(c - b);
    const double lca = norm_sq(a - c);
    const double longest = std::max({lab, lbc, lca});
    if (!(longest > 0.0)) throw std::invalid_argument("null triangle");

    // Evaluate every side within a relative tie window of the longest and
    // keep the lexicographically smallest (x, y).
    const double cutoff = longest * (1.0 - 1e-12);
    bool have = false;
    ShapeCoord best;
    auto consider = [&](double len2, Vec2 p, Vec2 q, Vec2 w) {
        if (len2 < cutoff) return;
        ShapeCoord s = place_on_side(p, q, w);
        if (!have || s.x < best.x || (s.x == best.x && s.y < best.y)) {
            best = s;
            have = true;
        }
    };
    consider(lab, a, b, c);
    consider(lbc, b, c, a);
    consider(lca, c, a, b);
    return best;
}

double signed_area(const Quadrilateral& q) {
    return 0.5 * (cross(q.a, q.b) + cross(q.b, q.c) + cross(q.c, q.d) + cross(q.d, q.a));
}

double perimeter(const Quadrilateral& q) {
    return norm(q.b - q.a) + norm(q.c - q.b) + norm(q.d - q.c) + norm(q.a - q.d);
}

bool is_convex(const Quadrilateral& q) {
    const Vec2 e1 = q.b - q.a;
    const Vec2 e2 = q.c - q.b;
    const Vec2 e3 = q.d - q.c;
    const Vec2 e4 = q.a - q.d;
    const double z1 = cross(e1, e2);
    const double z2 = cross(e2, e3);
    const double z3 = cross(e3, e4);
    const double z4 = cross(e4, e1);
    const bool all_pos = z1 > 0.0 && z2 > 0.0 && z3 > 0.0 && z4 > 0.0;
    const bool all_neg = z1 < 0.0 && z2 < 0.0 && z3 < 0.0 && z4 < 0.0;
    return (all_pos || all_neg) && std::abs(signed_area(q)) > 0.0;
}

}  // namespace subdiv
