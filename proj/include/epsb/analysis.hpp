#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "epsb/arrangement.hpp"
#include "epsb/geometry.hpp"
#include "epsb/setmodel.hpp"
#include "epsb/spatial_hash.hpp"

namespace epsb {

struct ContributorSet {
    Point2 point;
    double eps = 0.0;
    std::vector<Point2> members;  // sorted lexicographically
    std::vector<bool> extremal;   // filled by flag_extremal
};

/// Pi_E(x): the nearest point of every primitive lying within eps + tol of x,
/// deduplicated. With tol ~ 0 this is the exact argmin set; a positive tol
/// absorbs the offset between a level-n boundary point and the true boundary.
/// Throws "not a boundary point" unless |dist(x,E) - eps| <= tol.
ContributorSet contributors(const SetSpec& spec, Point2 x, double eps, double tol);

struct OutwardArc {
    GeodesicArc arc;
    UnitDir xi1;
    UnitDir xi2;
};

/// Intersection of the closed half-circles {u : <y-x,u> <= 0}. Throws
/// "interior point" when empty.
OutwardArc outward_arc(Point2 x, const ContributorSet& pi, double tol = 1e-9);

struct ExtremalPair {
    UnitDir xi;
    Point2 y;
};

/// Pairs (xi, y), xi in {xi1, xi2}, with |<y-x, xi>| <= rel_tol * eps.
std::vector<ExtremalPair> extremal_pairs(Point2 x, const ContributorSet& pi, const OutwardArc& oa,
                                         double rel_tol = 1e-7);

/// Sets pi.extremal from the pairs.
void flag_extremal(ContributorSet& pi, const OutwardArc& oa, double rel_tol = 1e-7);

/// D^n with a lookup grid, shared across local representations.
struct ApproxContext {
    double eps = 0.0;
    int level = 0;
    std::vector<Point2> points;
    PointGrid grid;

    ApproxContext(std::vector<Point2> pts, double eps, int level);
    static ApproxContext build(const SetSpec& spec, double eps, int n);
};

struct LocalSample {
    double s = 0.0;
    double f = 0.0;      // -inf when undefined
    double slope = 0.0;  // df/ds from the active centre
    long active = -1;    // index into ApproxContext::points, -1 when undefined
    bool defined() const { return active >= 0; }
};

/// f(s) = max{t : dist(x + s xi + t (x - y), D^n_{xi,y}) <= eps}, evaluated in
/// an orthonormalised frame (xi made exactly perpendicular to x - y).
class LocalRepEval {
public:
    LocalRepEval(const ApproxContext& ctx, Point2 x, const ExtremalPair& pair);

    LocalSample at(double s) const;
    Point2 curve(double s, double f) const { return x_ + xi_ * s + d_ * f; }
    Point2 xi() const { return xi_; }
    std::size_t cone_size() const { return a_.size(); }
    const ApproxContext& context() const { return *ctx_; }

private:
    const ApproxContext* ctx_;
    Point2 x_, xi_, d_;  // d_ = x - y
    double dlen_ = 0.0;
    // cone centres sorted by a = <c-x, xi>; b = <c-x, (x-y)/|x-y|>
    std::vector<double> a_, b_;
    std::vector<long> id_;
    std::vector<double> block_bmax_;
};

struct LocalRep {
    ExtremalPair pair;
    Point2 base;
    int level = 0;
    double eps = 0.0;
    std::vector<LocalSample> samples;
    /// Prefix [0, radius] on which the active centre stays within the
    /// half-strip the Lipschitz bound is stated for.
    double radius = 0.0;
};

/// Uniform grid on [0, eps/2].
std::vector<double> uniform_grid(double eps, int num_samples);

LocalRep local_rep(const ApproxContext& ctx, Point2 x, const ExtremalPair& pair, int num_samples = 256);
LocalRep local_rep(const SetSpec& spec, Point2 x, const ExtremalPair& pair, double eps, int n,
                   int num_samples = 256);

struct AlphaPoint {
    double s = 0.0;
    double alpha = 0.0;  // -inf when either f is undefined (open)
};

struct AlphaProfile {
    std::vector<AlphaPoint> points;
    std::vector<std::size_t> sign_changes;  // index i where sign(alpha_i) != sign(alpha_{i+1})
    std::vector<std::size_t> zero_touches;  // local maxima with |alpha| <= tol
};

/// Opposing contributors: ||(y1-x) + (y2-x)|| <= 1e-6 eps.
bool opposing(Point2 x, Point2 y1, Point2 y2, double eps);

/// Pointwise sum; throws on mismatched grids, different xi, or non-opposing contributors.
AlphaProfile alpha_profile(const LocalRep& r1, const LocalRep& r2, double zero_tol = 1e-12);

/// One-sided secants from sample idx to its window-th neighbour along the
/// boundary, forward then backward. Walks across vertices onto the arc whose
/// end sample coincides. Throws "isolated sample" if a side has no neighbour.
class TangentEstimator {
public:
    explicit TangentEstimator(const std::vector<BoundarySample>& samples);
    std::pair<UnitDir, UnitDir> operator()(std::size_t idx, int window) const;

private:
    const std::vector<BoundarySample>* samples_;
    std::vector<std::vector<std::size_t>> by_arc_;
    std::vector<std::size_t> arc_of_, pos_of_;
    std::vector<long> next_arc_, prev_arc_;
    std::vector<bool> closed_;
    std::size_t walk(std::size_t arc, long pos, bool forward) const;
};

std::pair<UnitDir, UnitDir> tangent_estimate(const std::vector<BoundarySample>& samples, std::size_t idx,
                                             int window);

/// Largest r <= r_max (bisection, `iters` steps) such that x + s v lies
/// strictly outside E_eps for the probed s in (0, r].
double outward_probe_radius(const SetSpec& spec, Point2 x, UnitDir v, double eps, double r_max,
                            int iters = 30);

}  // namespace epsb
