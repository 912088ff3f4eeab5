#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "epsb/geometry.hpp"
#include "epsb/setmodel.hpp"
#include "epsb/spatial_hash.hpp"

namespace epsb {

struct ArcEndRef {
    std::size_t arc = 0;
    bool at_end = false;  // false: theta_start, true: theta_end
};

struct BoundaryArc {
    CircularArc arc;
    std::size_t center = 0;  // index into BoundaryArcSet::centers
    int start_vertex = -1;
    int end_vertex = -1;
};

struct BoundaryVertex {
    Point2 p;
    std::vector<std::size_t> centers;  // distinct generating centers, ascending
    std::vector<ArcEndRef> ends;
};

/// boundary of the union of closed eps-disks around `centers`
struct BoundaryArcSet {
    double eps = 0.0;
    int level = -1;
    std::vector<Point2> centers;  // deduplicated, first-occurrence order
    std::vector<BoundaryArc> arcs;
    std::vector<BoundaryVertex> vertices;
};

struct ArrangementOptions {
    bool brute_force = false;  // all-pairs neighbour search, for cross-checking
    unsigned threads = 1;
};

/// Throws if eps <= 0 or centers empty.
BoundaryArcSet disk_union_boundary(const std::vector<Point2>& centers, double eps,
                                   const ArrangementOptions& opt = {});

struct BoundarySample {
    Point2 position;
    Point2 generating_center;
    std::size_t center_index = 0;
    std::size_t arc_id = 0;
    double s = 0.0;        // arclength from the arc's start
    bool closed = false;   // arc is a full circle
};

/// ceil(L/spacing)+1 samples per arc, endpoints included; full circles drop
/// the duplicated closing sample.
std::vector<BoundarySample> sample_boundary(const BoundaryArcSet& bas, double spacing);

/// Distance from p to the union of arcs, exact per arc; grid-accelerated.
class ArcDistance {
public:
    explicit ArcDistance(const BoundaryArcSet& bas);
    double operator()(Point2 p) const;

private:
    const BoundaryArcSet* bas_;
    PointGrid grid_;                  // dense samples of every arc
    std::vector<std::size_t> owner_;  // sample -> arc id
    double half_gap_ = 0.0;           // every arc point is this close to a sample
};

/// Hausdorff distance between the boundaries at two levels: samples of each
/// side measured exactly against the other side's arcs.
double boundary_distance(const BoundaryArcSet& a, const BoundaryArcSet& b, double spacing);

struct ConvergenceRow {
    int level = 0;
    double dist = 0.0;
    std::size_t arcs = 0;
};

/// dist_H(boundary at n, boundary at n_hi) for n = n_lo..n_hi.
std::vector<ConvergenceRow> boundary_convergence(const SetSpec& spec, double eps, int n_lo, int n_hi,
                                                 double spacing, unsigned threads = 1);

}  // namespace epsb
