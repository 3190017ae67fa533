#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace subdiv {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm_sq(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(norm_sq(a)); }

/// A point of the 2-simplex: three angle fractions that sum to one.
/// Angles are stored as fractions of the straight angle, so an equilateral
/// triangle is (1/3, 1/3, 1/3) and a degenerate ("flat") one has a component
/// approaching 1.
struct AngleTriple {
    double a = 1.0 / 3.0;
    double b = 1.0 / 3.0;
    double c = 1.0 / 3.0;

    /// Builds a triple rescaled so the components sum to exactly one.
    static AngleTriple renormalized(double a, double b, double c);

    bool on_simplex(double tol = 1e-12) const;
};

AngleTriple equilateral_triple();

/// Euclidean distance between two simplex points viewed in 3-space.
double simplex_distance(const AngleTriple& u, const AngleTriple& v);

/// Similarity class of a triangle: the apex coordinates (x, y) once the
/// longest side is scaled to the unit segment [0,1] on the horizontal axis,
/// the apex is mapped to the upper half-plane, and a reflection is applied
/// so that x >= 1/2. Collinear (zero-area) triangles are legal and have y = 0.
struct ShapeCoord {
    double x = 0.5;
    double y = 0.0;

    bool is_valid(double tol = 1e-9) const;
};

inline ShapeCoord equilateral_shape() { return {0.5, std::sqrt(3.0) / 2.0}; }

/// Normalizes a triangle given by three vertices to its ShapeCoord.
/// Ties on the longest side are broken by choosing the candidate with the
/// lexicographically smallest (x, y).
/// Throws std::invalid_argument("null triangle") if all vertices coincide.
ShapeCoord shape_from_vertices(Vec2 a, Vec2 b, Vec2 c);

/// Convex quadrilateral with vertices in convex (counterclockwise or
/// clockwise) order.
struct Quadrilateral {
    Vec2 a, b, c, d;
};

double signed_area(const Quadrilateral& q);
double perimeter(const Quadrilateral& q);

/// Strict convexity: all cross products of consecutive edges share one sign
/// and the area is positive.
bool is_convex(const Quadrilateral& q);

/// One draw of the three independent uniforms that drive a subtriangle step.
struct UniformTriple {
    double xi_a = 0.0;
    double xi_b = 0.0;
    double xi_c = 0.0;

    bool is_valid() const {
        return xi_a >= 0.0 && xi_a <= 1.0 && xi_b >= 0.0 && xi_b <= 1.0 &&
               xi_c >= 0.0 && xi_c <= 1.0;
    }
};

}  // namespace subdiv
