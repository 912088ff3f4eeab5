#include "epsb/geometry.hpp"

#include <algorithm>

#include "epsb/spatial_hash.hpp"

namespace epsb {

double normalize_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double ccw_angle(double from, double to) { return normalize_angle(to - from); }

UnitDir UnitDir::make(double ux, double uy) {
    if (!std::isfinite(ux) || !std::isfinite(uy)) throw Error("non-finite direction");
    if (std::abs(std::hypot(ux, uy) - 1.0) > 1e-12) throw Error("direction is not unit length");
    return UnitDir(ux, uy);
}

UnitDir UnitDir::normalized(Point2 v) {
    double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) throw Error("cannot normalize zero vector");
    return UnitDir(v.x / n, v.y / n);
}

UnitDir UnitDir::rotated(double theta) const {
    double c = std::cos(theta), s = std::sin(theta);
    return UnitDir(c * ux_ - s * uy_, s * ux_ + c * uy_);
}

double angle_between(UnitDir a, UnitDir b) {
    // atan2 form stays accurate near 0 and pi
    return std::atan2(std::abs(cross(a.vec(), b.vec())), dot(a.vec(), b.vec()));
}

const char* to_string(ArcKind k) {
    switch (k) {
        case ArcKind::proper_arc: return "proper_arc";
        case ArcKind::singleton: return "singleton";
        case ArcKind::antipodal_pair: return "antipodal_pair";
        case ArcKind::half_circle: return "half_circle";
        case ArcKind::full_circle: return "full_circle";
    }
    return "?";
}

double GeodesicArc::width() const {
    switch (kind) {
        case ArcKind::proper_arc: return ccw_angle(a.angle(), b.angle());
        case ArcKind::half_circle: return kPi;
        case ArcKind::full_circle: return kTwoPi;
        default: return 0.0;
    }
}

UnitDir GeodesicArc::midpoint() const { return a.rotated(0.5 * width()); }

GeodesicArc geodesic_arc(UnitDir v, UnitDir w) {
    double th = angle_between(v, w);
    if (th <= kAngleTol) return {v, v, ArcKind::singleton};
    if (th >= kPi - kAngleTol) {
        // order the pair canonically so the result is symmetric in (v, w)
        if (v.angle() <= w.angle()) return {v, w, ArcKind::antipodal_pair};
        return {w, v, ArcKind::antipodal_pair};
    }
    if (cross(v.vec(), w.vec()) > 0.0) return {v, w, ArcKind::proper_arc};
    return {w, v, ArcKind::proper_arc};
}

bool arc_contains(const GeodesicArc& arc, UnitDir u, double tol) {
    switch (arc.kind) {
        case ArcKind::full_circle: return true;
        case ArcKind::singleton: return angle_between(arc.a, u) <= tol;
        case ArcKind::antipodal_pair:
            return angle_between(arc.a, u) <= tol || angle_between(arc.b, u) <= tol;
        case ArcKind::proper_arc:
        case ArcKind::half_circle: {
            double d = ccw_angle(arc.a.angle(), u.angle());
            return d <= arc.width() + tol || d >= kTwoPi - tol;
        }
    }
    return false;
}

bool same_point_set(const GeodesicArc& p, const GeodesicArc& q, double tol) {
    if (p.kind != q.kind) return false;
    auto close = [tol](UnitDir x, UnitDir y) { return angle_between(x, y) <= tol; };
    switch (p.kind) {
        case ArcKind::full_circle: return true;
        case ArcKind::singleton: return close(p.a, q.a);
        case ArcKind::antipodal_pair:
            return (close(p.a, q.a) && close(p.b, q.b)) || (close(p.a, q.b) && close(p.b, q.a));
        default: return close(p.a, q.a) && close(p.b, q.b);
    }
}

bool CircularArc::contains_angle(double theta, double tol) const {
    if (is_full()) return true;
    double d = ccw_angle(theta_start, theta);
    return d <= sweep() + tol || d >= kTwoPi - tol;
}

double CircularArc::distance_to(Point2 p) const {
    Point2 v = p - center;
    double r = norm(v);
    if (r == 0.0) return radius;
    if (contains_angle(std::atan2(v.y, v.x), 0.0)) return std::abs(r - radius);
    return std::min(distance(p, start()), distance(p, end()));
}

double directed_hausdorff(std::span<const Point2> a, std::span<const Point2> b) {
    if (a.empty() || b.empty()) throw Error("empty sample");
    PointGrid grid(b, 0.0);
    double worst = 0.0;
    for (const auto& p : a) worst = std::max(worst, grid.nearest(p).dist);
    return worst;
}

double hausdorff_distance(std::span<const Point2> a, std::span<const Point2> b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace epsb
