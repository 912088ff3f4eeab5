#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epsb/arrangement.hpp"
#include "epsb/classify.hpp"
#include "epsb/geometry.hpp"
#include "epsb/setmodel.hpp"

namespace epsb {

struct ComplementComponent {
    int id = 0;
    std::vector<std::int64_t> cells;  // iy * nx + ix, ascending
    BBox bbox;                        // of cell centres
    double diameter = 0.0;            // of cell centres
    std::vector<std::size_t> boundary_arc_ids;
    bool bounded = true;
};

/// Raster of the complement: cell (ix, iy) has centre lo + ((ix+.5)h, (iy+.5)h).
struct ComponentMap {
    Point2 lo;
    double h = 0.0;
    double eps = 0.0;
    std::int64_t nx = 0, ny = 0;
    std::vector<int> label;  // component id per cell, -1 inside the union of disks
    std::vector<ComplementComponent> components;

    Point2 center(std::int64_t cell) const { return {lo.x + (double(cell % nx) + 0.5) * h, lo.y + (double(cell / nx) + 0.5) * h}; }
    int component_at(Point2 p) const;  // -1 outside the raster or inside the union
    int bounded_count() const;
};

/// Flood fill over cells whose centre is farther than eps from every centre.
/// Cells connect through shared edges, and diagonally when the shared corner
/// is free as well. Ids follow the lexicographic (x, then y) order of seed cells.
/// Throws "bbox too small" unless bbox contains every centre padded by 2 eps.
ComponentMap complement_components(const std::vector<Point2>& centers, double eps, const BBox& bbox, double h,
                                   unsigned threads = 0);

/// bbox around the centres padded by 2 eps + h. With an anchor, the raster is
/// shifted so the anchor is a cell centre; otherwise rows and columns avoid
/// dyadic coordinates.
BBox raster_bbox(const std::vector<Point2>& centers, double eps, double h, std::optional<Point2> anchor = {});

/// Fills boundary_arc_ids: an arc belongs to the component just outside its midpoint.
void attach_boundary_arcs(ComponentMap& map, const BoundaryArcSet& bas);

/// Distinct component ids met by short outward probes along the record's arc.
std::vector<int> adjacent_components(const ComponentMap& map, const SingularityRecord& rec);

struct ChainEvidence {
    Point2 target;
    std::vector<int> component_ids;
    std::vector<double> hausdorff_seq;  // dist_H(target, V_k), cell centres
    double error_bar = 0.0;             // h sqrt(2) / 2
    std::vector<Point2> pinch_points;   // between consecutive links
    std::optional<int> adjacent_component;  // accessible target
};

struct ChainOptions {
    int min_links = 3;
    double ratio = 0.5;  // d_{k+1} <= ratio * d_k
};

/// Longest run of bounded components whose Hausdorff distance to target
/// shrinks geometrically and by more than twice the error bar per link.
std::optional<ChainEvidence> chain_evidence(Point2 target, const ComponentMap& map, const ChainOptions& opt = {});

struct ChainSetReport {
    int chain_records = 0;
    bool closed = true;         // (a)
    bool separated = true;      // (b)
    bool nowhere_dense = true;  // (c)
    std::vector<std::string> violations;
    bool ok() const { return closed && separated && nowhere_dense; }
};

ChainSetReport chain_set_diagnostics(const Inventory& inv, const std::vector<double>& r_list);

struct RasterStability {
    int bounded_h = 0;
    int bounded_half = 0;
    std::size_t total_h = 0, total_half = 0;
    bool stable() const { return bounded_h == bounded_half && total_h == total_half; }
};

/// Component counts at h and h/2, each raster from raster_bbox with the same anchor.
RasterStability raster_stability(const std::vector<Point2>& centers, double eps, double h,
                                 std::optional<Point2> anchor = {}, unsigned threads = 0);

}  // namespace epsb
