#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace epsb {

/// Base error type for everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kPi = std::numbers::pi;

/// Uniform angular tolerance (radians) used for arc comparisons.
inline constexpr double kAngleTol = 1e-9;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    constexpr Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    constexpr Point2 operator-() const { return {-x, -y}; }
    constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Point2&) const = default;

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Point2 operator*(double s, Point2 p) { return p * s; }
constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
constexpr double norm2(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Lexicographic order (x, then y).
constexpr bool lex_less(Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

/// Angle normalized into [0, 2pi).
double normalize_angle(double a);

/// Counter-clockwise angle from `from` to `to`, in [0, 2pi).
double ccw_angle(double from, double to);

/// Point on the unit circle. Construction enforces unit length within 1e-12
/// (`make`) or normalizes (`normalized`).
class UnitDir {
public:
    UnitDir() = default;

    static UnitDir make(double ux, double uy);
    static UnitDir normalized(Point2 v);
    static UnitDir from_angle(double theta) { return UnitDir(std::cos(theta), std::sin(theta)); }

    double ux() const { return ux_; }
    double uy() const { return uy_; }
    Point2 vec() const { return {ux_, uy_}; }
    double angle() const { return normalize_angle(std::atan2(uy_, ux_)); }

    UnitDir operator-() const { return UnitDir(-ux_, -uy_); }
    /// Rotation by +90 degrees (counter-clockwise).
    UnitDir perp() const { return UnitDir(-uy_, ux_); }
    UnitDir rotated(double theta) const;

private:
    UnitDir(double ux, double uy) : ux_(ux), uy_(uy) {}
    double ux_ = 1.0;
    double uy_ = 0.0;
};

inline double dot(UnitDir a, UnitDir b) { return a.ux() * b.ux() + a.uy() * b.uy(); }

/// Unsigned angle between two directions, in [0, pi].
double angle_between(UnitDir a, UnitDir b);

enum class ArcKind { proper_arc, singleton, antipodal_pair, half_circle, full_circle };

const char* to_string(ArcKind k);

/// A closed subset of S^1 described by its two boundary directions.
///
/// For proper_arc and half_circle the set is the counter-clockwise sweep from
/// `a` to `b`. singleton has a == b, antipodal_pair is the two points {a, b}
/// with b == -a, full_circle is all of S^1.
struct GeodesicArc {
    UnitDir a;
    UnitDir b;
    ArcKind kind = ArcKind::singleton;

    /// Counter-clockwise sweep from a to b for the connected kinds; 0 for
    /// singleton and antipodal_pair.
    double width() const;
    /// Direction halfway along the sweep (connected kinds only).
    UnitDir midpoint() const;
};

/// The set {a v + b w : a, b >= 0} intersected with S^1.
GeodesicArc geodesic_arc(UnitDir v, UnitDir w);

bool arc_contains(const GeodesicArc& arc, UnitDir u, double tol = kAngleTol);

/// Same point set, up to tolerance.
bool same_point_set(const GeodesicArc& p, const GeodesicArc& q, double tol = 1e-9);

/// Circular arc swept counter-clockwise from theta_start to theta_end.
/// theta_start lies in [0, 2pi); theta_end - theta_start lies in (0, 2pi].
struct CircularArc {
    Point2 center;
    double radius = 1.0;
    double theta_start = 0.0;
    double theta_end = kTwoPi;

    double sweep() const { return theta_end - theta_start; }
    double length() const { return radius * sweep(); }
    bool is_full() const { return sweep() >= kTwoPi - kAngleTol; }
    Point2 point_at(double theta) const {
        return {center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)};
    }
    Point2 start() const { return point_at(theta_start); }
    Point2 end() const { return point_at(theta_end); }
    /// Whether polar angle `theta` (any range) falls on the arc.
    bool contains_angle(double theta, double tol = kAngleTol) const;
    /// Euclidean distance from p to the arc's point set.
    double distance_to(Point2 p) const;
};

/// Hausdorff distance between two finite samples. Throws on empty input.
double hausdorff_distance(std::span<const Point2> a, std::span<const Point2> b);

/// One-sided sup_{a in A} dist(a, B), using a uniform grid over B.
double directed_hausdorff(std::span<const Point2> a, std::span<const Point2> b);

}  // namespace epsb
