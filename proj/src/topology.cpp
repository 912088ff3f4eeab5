#include "epsb/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "epsb/parallel.hpp"
#include "epsb/spatial_hash.hpp"

namespace epsb {

int ComponentMap::component_at(Point2 p) const {
    double fx = std::floor((p.x - lo.x) / h), fy = std::floor((p.y - lo.y) / h);
    if (!(fx >= 0 && fy >= 0 && fx < double(nx) && fy < double(ny))) return -1;
    return label[std::size_t(std::int64_t(fy) * nx + std::int64_t(fx))];
}

int ComponentMap::bounded_count() const {
    return int(std::count_if(components.begin(), components.end(), [](const auto& c) { return c.bounded; }));
}

namespace {

double hull_diameter(std::vector<Point2> pts) {
    if (pts.size() < 2) return 0.0;
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts.size() == 2 ? distance(pts[0], pts[1]) : 0.0;
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, distance(hull[i], hull[j]));
    return best;
}

void finish_component(const ComponentMap& map, ComplementComponent& c) {
    std::sort(c.cells.begin(), c.cells.end());
    c.bbox = {map.center(c.cells.front()), map.center(c.cells.front())};
    // row extremes carry the hull
    std::vector<Point2> ext;
    for (std::size_t i = 0; i < c.cells.size(); ++i) {
        Point2 p = map.center(c.cells[i]);
        c.bbox.lo = {std::min(c.bbox.lo.x, p.x), std::min(c.bbox.lo.y, p.y)};
        c.bbox.hi = {std::max(c.bbox.hi.x, p.x), std::max(c.bbox.hi.y, p.y)};
        std::int64_t row = c.cells[i] / map.nx;
        bool first = i == 0 || c.cells[i - 1] / map.nx != row;
        bool last = i + 1 == c.cells.size() || c.cells[i + 1] / map.nx != row;
        if (first || last) ext.push_back(p);
    }
    c.diameter = hull_diameter(std::move(ext));
}

}  // namespace

ComponentMap complement_components(const std::vector<Point2>& centers, double eps, const BBox& bbox, double h,
                                   unsigned threads) {
    if (!(eps > 0.0)) throw Error("eps must be positive");
    if (!(h > 0.0) || h > eps / 8.0 * (1.0 + 1e-12)) throw Error("raster step must lie in (0, eps/8]");
    if (centers.empty()) throw Error("no centres");
    const double pad = 2.0 * eps * (1.0 - 1e-12);
    for (const auto& c : centers)
        if (c.x - pad < bbox.lo.x || c.y - pad < bbox.lo.y || c.x + pad > bbox.hi.x || c.y + pad > bbox.hi.y)
            throw Error("bbox too small");

    ComponentMap map;
    map.lo = bbox.lo;
    map.h = h;
    map.eps = eps;
    map.nx = std::int64_t(std::ceil((bbox.hi.x - bbox.lo.x) / h));
    map.ny = std::int64_t(std::ceil((bbox.hi.y - bbox.lo.y) / h));
    const std::size_t total = std::size_t(map.nx * map.ny);
    map.label.assign(total, -1);

    PointGrid grid(centers, 0.5 * eps);
    const double e2 = eps * eps;
    std::vector<char> free(total, 0);
    parallel_for(std::size_t(map.ny), resolve_threads(threads), [&](std::size_t iy) {
        for (std::int64_t ix = 0; ix < map.nx; ++ix) {
            std::int64_t cell = std::int64_t(iy) * map.nx + ix;
            free[std::size_t(cell)] = !grid.any_within2(map.center(cell), e2);
        }
    });

    std::deque<std::int64_t> queue;
    for (std::int64_t ix = 0; ix < map.nx; ++ix)
        for (std::int64_t iy = 0; iy < map.ny; ++iy) {
            std::int64_t seed = iy * map.nx + ix;
            if (!free[std::size_t(seed)] || map.label[std::size_t(seed)] >= 0) continue;
            ComplementComponent comp;
            comp.id = int(map.components.size());
            map.label[std::size_t(seed)] = comp.id;
            queue.push_back(seed);
            while (!queue.empty()) {
                std::int64_t c = queue.front();
                queue.pop_front();
                comp.cells.push_back(c);
                std::int64_t cx = c % map.nx, cy = c / map.nx;
                if (cx == 0 || cy == 0 || cx == map.nx - 1 || cy == map.ny - 1) comp.bounded = false;
                auto visit = [&](std::int64_t x, std::int64_t y) {
                    if (x < 0 || y < 0 || x >= map.nx || y >= map.ny) return;
                    std::size_t k = std::size_t(y * map.nx + x);
                    if (!free[k] || map.label[k] >= 0) return;
                    map.label[k] = comp.id;
                    queue.push_back(std::int64_t(k));
                };
                visit(cx - 1, cy);
                visit(cx + 1, cy);
                visit(cx, cy - 1);
                visit(cx, cy + 1);
                // diagonal steps only through a free shared corner
                for (int dx : {-1, 1})
                    for (int dy : {-1, 1}) {
                        Point2 corner = map.center(c) + Point2{0.5 * dx * h, 0.5 * dy * h};
                        if (!grid.any_within2(corner, e2)) visit(cx + dx, cy + dy);
                    }
            }
            finish_component(map, comp);
            map.components.push_back(std::move(comp));
        }
    int unbounded = int(map.components.size()) - map.bounded_count();
    if (unbounded != 1) throw Error("raster edge is not a single component");
    return map;
}

BBox raster_bbox(const std::vector<Point2>& centers, double eps, double h, std::optional<Point2> anchor) {
    if (centers.empty()) throw Error("no centres");
    Point2 lo = centers[0], hi = centers[0];
    for (const auto& c : centers) {
        lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
        hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
    }
    const double pad = 2.0 * eps + h;
    lo = lo - Point2{pad, pad};
    hi = hi + Point2{pad, pad};
    Point2 start;
    if (anchor) {
        start = {anchor->x - (std::ceil((anchor->x - lo.x) / h) + 0.5) * h,
                 anchor->y - (std::ceil((anchor->y - lo.y) / h) + 0.5) * h};
    } else {
        // 0.382: centres stay off the dyadic lines that symmetric sets like to use
        start = {(std::floor(lo.x / h) - 0.381966) * h, (std::floor(lo.y / h) - 0.381966) * h};
    }
    return {start, hi};
}

void attach_boundary_arcs(ComponentMap& map, const BoundaryArcSet& bas) {
    for (auto& c : map.components) c.boundary_arc_ids.clear();
    for (std::size_t i = 0; i < bas.arcs.size(); ++i) {
        const auto& a = bas.arcs[i].arc;
        double th = a.theta_start + 0.5 * a.sweep();
        Point2 p = a.center + (a.radius + map.h) * Point2{std::cos(th), std::sin(th)};
        int id = map.component_at(p);
        if (id >= 0) map.components[std::size_t(id)].boundary_arc_ids.push_back(i);
    }
}

std::vector<int> adjacent_components(const ComponentMap& map, const SingularityRecord& rec) {
    std::vector<UnitDir> dirs;
    const auto& arc = rec.arc;
    switch (arc.kind) {
        case ArcKind::singleton: dirs.push_back(arc.a); break;
        case ArcKind::antipodal_pair: dirs = {arc.a, arc.b}; break;
        case ArcKind::full_circle:
            for (int k = 0; k < 8; ++k) dirs.push_back(UnitDir::from_angle(k * kTwoPi / 8));
            break;
        default:
            for (int k = 1; k <= 3; ++k) dirs.push_back(arc.a.rotated(arc.width() * k / 4.0));
    }
    // narrow wedges need the probe far enough out to span a few cells
    double t0 = 2.0;
    if (arc.kind == ArcKind::proper_arc) t0 = std::clamp(4.0 / std::max(arc.width(), 1e-9), 2.0, 0.25 * map.eps / map.h);
    std::vector<int> ids;
    for (auto d : dirs)
        for (double t : {t0, t0 + 1.0}) {
            int id = map.component_at(rec.point + (t * map.h) * d.vec());
            if (id >= 0) ids.push_back(id);
        }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::optional<ChainEvidence> chain_evidence(Point2 target, const ComponentMap& map, const ChainOptions& opt) {
    const double err = map.h * std::sqrt(2.0) / 2.0;
    struct Item {
        int id;
        double d;
    };
    std::vector<Item> items;
    for (const auto& c : map.components) {
        if (!c.bounded) continue;
        double d = 0.0;
        for (auto cell : c.cells) d = std::max(d, distance(map.center(cell), target));
        items.push_back({c.id, d});
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.d != b.d ? a.d > b.d : a.id < b.id; });

    // longest chain ending at each item, walking towards the target
    const std::size_t m = items.size();
    std::vector<int> len(m, 1), prev(m, -1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            bool link = items[i].d <= opt.ratio * items[j].d && items[j].d - items[i].d > 2.0 * err;
            if (link && len[j] + 1 > len[i]) {
                len[i] = len[j] + 1;
                prev[i] = int(j);
            }
        }
    int best = -1;
    for (std::size_t i = 0; i < m; ++i)
        if (best < 0 || len[i] > len[std::size_t(best)]) best = int(i);
    if (best < 0 || len[std::size_t(best)] < opt.min_links) return std::nullopt;

    ChainEvidence ev;
    ev.target = target;
    ev.error_bar = err;
    for (int i = best; i >= 0; i = prev[std::size_t(i)]) {
        ev.component_ids.push_back(items[std::size_t(i)].id);
        ev.hausdorff_seq.push_back(items[std::size_t(i)].d);
    }
    std::reverse(ev.component_ids.begin(), ev.component_ids.end());
    std::reverse(ev.hausdorff_seq.begin(), ev.hausdorff_seq.end());

    for (std::size_t k = 0; k + 1 < ev.component_ids.size(); ++k) {
        const auto& A = map.components[std::size_t(ev.component_ids[k])];
        const auto& B = map.components[std::size_t(ev.component_ids[k + 1])];
        std::vector<Point2> bp;
        bp.reserve(B.cells.size());
        for (auto c : B.cells) bp.push_back(map.center(c));
        PointGrid g(bp, 0.0);
        double bd = INFINITY;
        Point2 pinch;
        for (auto c : A.cells) {
            Point2 p = map.center(c);
            auto hit = g.nearest(p);
            if (hit.dist < bd) {
                bd = hit.dist;
                pinch = 0.5 * (p + bp[hit.index]);
            }
        }
        ev.pinch_points.push_back(pinch);
    }

    std::vector<int> near;
    const double r = 2.0 * map.h;
    for (double dx = -r; dx <= r + 1e-12 * r; dx += map.h)
        for (double dy = -r; dy <= r + 1e-12 * r; dy += map.h) {
            int id = map.component_at(target + Point2{dx, dy});
            if (id >= 0) near.push_back(id);
        }
    std::sort(near.begin(), near.end());
    near.erase(std::unique(near.begin(), near.end()), near.end());
    if (near.size() == 1) ev.adjacent_component = near[0];
    return ev;
}

ChainSetReport chain_set_diagnostics(const Inventory& inv, const std::vector<double>& r_list) {
    ChainSetReport rep;
    std::vector<Point2> chain, other;
    for (const auto& r : inv.records) {
        if (is_chain(r.label))
            chain.push_back(r.point);
        else
            other.push_back(r.point);
    }
    rep.chain_records = int(chain.size());
    if (chain.empty()) return rep;
    auto fmt = [](Point2 p) {
        std::ostringstream os;
        os.precision(9);
        os << "(" << p.x << "," << p.y << ")";
        return os.str();
    };

    PointGrid cg(chain, 0.0);
    PointGrid og(other, 0.0);

    // (a) samples where chain samples accumulate must be chain or unresolved
    const double acc = 2.0 * std::sqrt(2.0) * std::ldexp(1.0, -inv.level);
    for (const auto& r : inv.records) {
        if (is_chain(r.label) || r.label == Label::Unresolved) continue;
        int near = 0;
        cg.for_each_within(r.point, acc, [&](std::size_t) { ++near; });
        if (near >= 2) {
            rep.closed = false;
            rep.violations.push_back("(a) chain samples accumulate at " + fmt(r.point) + " labelled " +
                                     to_string(r.label));
        }
    }

    // (b) neighbouring chain samples need a non-chain sample between them
    const double link = 2.0 * inv.spacing;
    for (std::size_t i = 0; i < chain.size(); ++i)
        cg.for_each_within(chain[i], link, [&](std::size_t j) {
            if (j <= i) return;
            double dab = distance(chain[i], chain[j]);
            bool sep = false;
            og.for_each_within(0.5 * (chain[i] + chain[j]), dab, [&](std::size_t k) {
                const Point2& z = og.point(k);
                if (distance(z, chain[i]) < dab && distance(z, chain[j]) < dab) sep = true;
            });
            if (!sep) {
                rep.separated = false;
                rep.violations.push_back("(b) no separating sample between " + fmt(chain[i]) + " and " +
                                         fmt(chain[j]));
            }
        });

    // (c) every chain sample sees a non-chain sample at each radius
    for (const auto& p : chain) {
        double d = og.nearest(p).dist;
        for (double r : r_list)
            if (!(d <= r)) {
                rep.nowhere_dense = false;
                rep.violations.push_back("(c) no non-chain sample within " + std::to_string(r) + " of " + fmt(p));
            }
    }
    return rep;
}

RasterStability raster_stability(const std::vector<Point2>& centers, double eps, double h,
                                 std::optional<Point2> anchor, unsigned threads) {
    RasterStability rs;
    auto a = complement_components(centers, eps, raster_bbox(centers, eps, h, anchor), h, threads);
    rs.bounded_h = a.bounded_count();
    rs.total_h = a.components.size();
    auto b = complement_components(centers, eps, raster_bbox(centers, eps, 0.5 * h, anchor), 0.5 * h, threads);
    rs.bounded_half = b.bounded_count();
    rs.total_half = b.components.size();
    return rs;
}

}  // namespace epsb
