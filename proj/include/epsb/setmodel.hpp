#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "epsb/geometry.hpp"

namespace epsb {

struct PointPrim {
    Point2 p;
};

struct SegmentPrim {
    Point2 a;
    Point2 b;
};

using Primitive = std::variant<PointPrim, SegmentPrim>;

struct BBox {
    Point2 lo;
    Point2 hi;
};

/// Declarative compact set E: a finite union of points and closed segments.
struct SetSpec {
    std::string label;
    std::vector<Primitive> primitives;

    /// Throws if empty or any coordinate is non-finite.
    void validate() const;
    BBox bbox() const;
};

struct ProjectionResult {
    double distance = 0.0;
    std::vector<Point2> argmin;
};

/// Closest point on a single primitive.
Point2 closest_point(const Primitive& prim, Point2 x);
double primitive_distance(const Primitive& prim, Point2 x);

/// dist(x, E) and every minimiser (relative tolerance 1e-9), deduplicated,
/// sorted lexicographically.
ProjectionResult distance_and_projection(const SetSpec& spec, Point2 x);

struct ApproxSet {
    int level = 0;
    double cell_size = 1.0;
    /// One representative per half-open dyadic cell meeting E, sorted by cell (y-major).
    std::vector<Point2> points;
};

/// Smallest admissible level for a given eps is min_level(eps) + 1.
int min_level(double eps);

/// Dyadic representatives at level n without the eps threshold check.
ApproxSet grid_representatives(const SetSpec& spec, int n);

/// Grid-scheme D^n. Throws "level below threshold" unless n > min_level(eps).
ApproxSet finite_approximating_set(const SetSpec& spec, int n, double eps);

/// C_k x {0,1}, C_k the Smith-Volterra-Cantor approximant of depth k (0..12).
SetSpec gen_fat_cantor(int depth);

/// Contributor points y+-(s) of the graph of the jump integral.
SetSpec gen_jump_integral(int num_terms, double eps);

/// [2,3] x {0,1}.
SetSpec gen_rectangle_example();

/// Seeded uniform point cloud in [lo, hi]^2.
SetSpec gen_random_cloud(std::uint64_t seed, int count, double lo, double hi);

// Pieces of the jump-integral construction, exposed for testing.
struct Rational {
    int p = 0;
    int q = 1;
    double value() const { return double(p) / double(q); }
};

/// Reduced fractions in (0,1) ordered by denominator then numerator.
std::vector<Rational> enumerate_rationals(int count);

struct JumpIntegral {
    std::vector<double> q;  // jump locations
    std::vector<double> a;  // jump sizes 2^-n

    double alpha(double s) const;        // right-continuous: sum over q_n <= s
    double alpha_left(double s) const;   // sum over q_n < s
    double integral(double s) const;     // exact: sum a_n (s - q_n)^+
};

JumpIntegral make_jump_integral(int num_terms);

}  // namespace epsb
