#include "epsb/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "epsb/parallel.hpp"

namespace epsb {

namespace {

constexpr double kTangentTol = 1e-9;

struct Interval {
    double s, e;  // s in [0, 2pi), e = s + width
};

// Uncovered arcs of circle i, given neighbour indices in ascending order.
std::vector<CircularArc> circle_arcs(std::size_t i, const std::vector<Point2>& c, double eps,
                                     const std::vector<std::size_t>& nbrs);

// Same result as circle_arcs over all neighbours: merge a close neighbourhood
// first, then add only discs whose centre is within eps of a surviving gap.
std::vector<CircularArc> circle_arcs_local(std::size_t i, const std::vector<Point2>& c, double eps,
                                           const PointGrid& grid) {
    const Point2 ci = c[i];
    const double reach = 2.0 * eps + kTangentTol;
    std::vector<std::size_t> keep;
    for (double r0 = eps / 8.0;; r0 *= 2.0) {
        keep.clear();
        const double r = std::min(r0, reach);
        grid.for_each_within(ci, r, [&](std::size_t j) {
            if (j != i) keep.push_back(j);
        });
        if (keep.size() >= 24 || r >= reach) break;
    }
    const auto first = circle_arcs(i, c, eps, keep);
    if (first.empty()) return first;
    const double margin = 1e-6 * eps + kTangentTol;
    for (const auto& g : first) {
        double sweep = std::min(g.sweep(), kTwoPi);
        Point2 pm = g.point_at(g.theta_start + 0.5 * sweep);
        double r = eps + 2.0 * eps * std::sin(0.25 * sweep) + margin;
        grid.for_each_within(pm, r, [&](std::size_t j) {
            if (j != i && distance(c[j], ci) <= reach) keep.push_back(j);
        });
    }
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    return circle_arcs(i, c, eps, keep);
}

std::vector<CircularArc> circle_arcs(std::size_t i, const std::vector<Point2>& c, double eps,
                                     const std::vector<std::size_t>& nbrs) {
    const Point2 ci = c[i];
    std::vector<Interval> iv;
    std::vector<double> tang;
    for (std::size_t j : nbrs) {
        Point2 v = c[j] - ci;
        double d = norm(v);
        if (d > 2.0 * eps + kTangentTol) continue;
        double phi = normalize_angle(std::atan2(v.y, v.x));
        if (std::abs(d - 2.0 * eps) < kTangentTol) {
            tang.push_back(phi);
            continue;
        }
        double w = std::acos(d / (2.0 * eps));
        double s = normalize_angle(phi - w);
        iv.push_back({s, s + 2.0 * w});
    }

    std::vector<CircularArc> gaps;
    if (iv.empty()) {
        gaps.push_back({ci, eps, 0.0, kTwoPi});
    } else {
        std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
            return a.s != b.s ? a.s < b.s : a.e < b.e;
        });
        const double s0 = iv[0].s;
        double reach = iv[0].e;
        for (const auto& x : iv) reach = std::max(reach, x.e - kTwoPi);
        for (std::size_t k = 1; k < iv.size(); ++k) {
            if (iv[k].s > reach + kAngleTol) {
                double st = normalize_angle(reach);
                gaps.push_back({ci, eps, st, st + (iv[k].s - reach)});
            }
            reach = std::max(reach, iv[k].e);
        }
        if (reach < s0 + kTwoPi - kAngleTol) {
            double st = normalize_angle(reach);
            gaps.push_back({ci, eps, st, st + (s0 + kTwoPi - reach)});
        }
    }
    if (tang.empty()) return gaps;

    // split at tangency points that survive the coverage
    std::sort(tang.begin(), tang.end());
    std::vector<CircularArc> out;
    for (const auto& g : gaps) {
        std::vector<double> cuts;
        for (double t : tang) {
            if (g.is_full()) {
                cuts.push_back(t);
                continue;
            }
            double off = ccw_angle(g.theta_start, t);
            if (off > kAngleTol && off < g.sweep() - kAngleTol) cuts.push_back(t);
        }
        if (cuts.empty()) {
            out.push_back(g);
            continue;
        }
        if (g.is_full()) {
            cuts.erase(std::unique(cuts.begin(), cuts.end(),
                                   [](double a, double b) { return b - a <= kAngleTol; }),
                       cuts.end());
            for (std::size_t k = 0; k < cuts.size(); ++k) {
                double st = cuts[k];
                double en = k + 1 < cuts.size() ? cuts[k + 1] : cuts[0] + kTwoPi;
                out.push_back({ci, eps, st, en});
            }
            continue;
        }
        std::vector<double> offs;
        for (double t : cuts) offs.push_back(ccw_angle(g.theta_start, t));
        std::sort(offs.begin(), offs.end());
        double prev = 0.0;
        for (double o : offs) {
            if (o - prev <= kAngleTol) continue;
            out.push_back({ci, eps, normalize_angle(g.theta_start + prev),
                           normalize_angle(g.theta_start + prev) + (o - prev)});
            prev = o;
        }
        out.push_back({ci, eps, normalize_angle(g.theta_start + prev),
                       normalize_angle(g.theta_start + prev) + (g.sweep() - prev)});
    }
    return out;
}

struct UnionFind {
    std::vector<std::size_t> p;
    explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    std::size_t find(std::size_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

void extract_vertices(BoundaryArcSet& bas) {
    struct End {
        Point2 p;
        std::size_t center;
        ArcEndRef ref;
    };
    std::vector<End> ends;
    ends.reserve(2 * bas.arcs.size());
    for (std::size_t a = 0; a < bas.arcs.size(); ++a) {
        const auto& arc = bas.arcs[a];
        ends.push_back({arc.arc.start(), arc.center, {a, false}});
        ends.push_back({arc.arc.end(), arc.center, {a, true}});
    }
    if (ends.empty()) return;
    std::vector<Point2> pts;
    for (const auto& e : ends) pts.push_back(e.p);
    const double tol = 1e-9 * std::max(1.0, bas.eps);
    PointGrid grid(pts, std::max(tol * 4.0, bas.eps * 0.25));
    UnionFind uf(ends.size());
    for (std::size_t k = 0; k < ends.size(); ++k)
        grid.for_each_within(ends[k].p, tol, [&](std::size_t j) { uf.unite(k, j); });

    std::vector<std::vector<std::size_t>> groups(ends.size());
    for (std::size_t k = 0; k < ends.size(); ++k) groups[uf.find(k)].push_back(k);
    for (std::size_t root = 0; root < ends.size(); ++root) {
        const auto& g = groups[root];
        if (g.empty()) continue;
        BoundaryVertex v;
        v.p = ends[g.front()].p;
        for (auto k : g) {
            v.centers.push_back(ends[k].center);
            v.ends.push_back(ends[k].ref);
        }
        std::sort(v.centers.begin(), v.centers.end());
        v.centers.erase(std::unique(v.centers.begin(), v.centers.end()), v.centers.end());
        if (v.centers.size() < 2) continue;
        int id = int(bas.vertices.size());
        for (const auto& r : v.ends) {
            auto& arc = bas.arcs[r.arc];
            (r.at_end ? arc.end_vertex : arc.start_vertex) = id;
        }
        bas.vertices.push_back(std::move(v));
    }
}

}  // namespace

BoundaryArcSet disk_union_boundary(const std::vector<Point2>& centers, double eps,
                                   const ArrangementOptions& opt) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw Error("eps must be positive");
    if (centers.empty()) throw Error("no centers");
    BoundaryArcSet bas;
    bas.eps = eps;
    {
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
        for (const auto& p : centers) {
            if (!p.finite()) throw Error("non-finite center");
            std::uint64_t h = std::hash<double>{}(p.x) * 31 + std::hash<double>{}(p.y);
            auto& bucket = seen[h];
            bool dup = false;
            for (auto k : bucket)
                if (bas.centers[k] == p) dup = true;
            if (dup) continue;
            bucket.push_back(bas.centers.size());
            bas.centers.push_back(p);
        }
    }
    const auto& c = bas.centers;
    const std::size_t m = c.size();
    const double reach = 2.0 * eps + kTangentTol;

    PointGrid grid;
    if (!opt.brute_force) grid.build(c, eps / 8.0);

    std::vector<std::vector<CircularArc>> per(m);
    parallel_for(m, resolve_threads(opt.threads), [&](std::size_t i) {
        if (!opt.brute_force) {
            per[i] = circle_arcs_local(i, c, eps, grid);
            return;
        }
        std::vector<std::size_t> nbrs;
        for (std::size_t j = 0; j < m; ++j)
            if (j != i && distance(c[i], c[j]) <= reach) nbrs.push_back(j);
        per[i] = circle_arcs(i, c, eps, nbrs);
    });
    for (std::size_t i = 0; i < m; ++i)
        for (const auto& a : per[i]) bas.arcs.push_back({a, i, -1, -1});
    extract_vertices(bas);
    return bas;
}

std::vector<BoundarySample> sample_boundary(const BoundaryArcSet& bas, double spacing) {
    if (!(spacing > 0.0)) throw Error("spacing must be positive");
    std::vector<BoundarySample> out;
    for (std::size_t a = 0; a < bas.arcs.size(); ++a) {
        const auto& ba = bas.arcs[a];
        const CircularArc& arc = ba.arc;
        const double L = arc.length();
        const std::size_t count = std::size_t(std::ceil(L / spacing)) + 1;
        const bool closed = arc.is_full();
        const std::size_t emit = closed ? count - 1 : count;
        for (std::size_t k = 0; k < emit; ++k) {
            BoundarySample s;
            s.s = L * double(k) / double(count - 1);
            if (k == 0) s.position = arc.start();
            else if (k + 1 == count) s.position = arc.end();
            else s.position = arc.point_at(arc.theta_start + s.s / arc.radius);
            s.generating_center = bas.centers[ba.center];
            s.center_index = ba.center;
            s.arc_id = a;
            s.closed = closed;
            out.push_back(s);
        }
    }
    return out;
}

ArcDistance::ArcDistance(const BoundaryArcSet& bas) : bas_(&bas) {
    const double sigma = bas.eps / 16.0;
    std::vector<Point2> pts;
    double gap = 0.0;
    for (std::size_t a = 0; a < bas.arcs.size(); ++a) {
        const auto& arc = bas.arcs[a].arc;
        std::size_t k = std::size_t(std::ceil(arc.length() / sigma));
        k = std::max<std::size_t>(k, 1);
        double step = arc.sweep() / double(k);
        gap = std::max(gap, 2.0 * arc.radius * std::sin(0.5 * step));
        for (std::size_t j = 0; j <= k; ++j) {
            pts.push_back(arc.point_at(arc.theta_start + step * double(j)));
            owner_.push_back(a);
        }
    }
    half_gap_ = 0.5 * gap + 1e-12;
    grid_.build(pts, sigma);
}

double ArcDistance::operator()(Point2 p) const {
    if (grid_.empty()) return INFINITY;
    // an arc closer than the nearest sample has one of its samples within upper + half_gap
    const double upper = grid_.nearest(p).dist;
    double best = upper;
    std::vector<std::size_t> seen;
    grid_.for_each_within(p, upper + half_gap_, [&](std::size_t k) { seen.push_back(owner_[k]); });
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto a : seen) best = std::min(best, bas_->arcs[a].arc.distance_to(p));
    return best;
}

double boundary_distance(const BoundaryArcSet& a, const BoundaryArcSet& b, double spacing) {
    if (a.arcs.empty() || b.arcs.empty()) throw Error("empty sample");
    auto one = [spacing](const BoundaryArcSet& from, const BoundaryArcSet& to) {
        ArcDistance dist(to);
        auto samples = sample_boundary(from, spacing);
        std::vector<double> d(samples.size());
        parallel_for(samples.size(), resolve_threads(0),
                     [&](std::size_t k) { d[k] = dist(samples[k].position); });
        return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
    };
    return std::max(one(a, b), one(b, a));
}

std::vector<ConvergenceRow> boundary_convergence(const SetSpec& spec, double eps, int n_lo, int n_hi,
                                                 double spacing, unsigned threads) {
    if (n_lo >= n_hi) throw Error("n_lo must be below n_hi");
    ArrangementOptions opt;
    opt.threads = threads;
    auto build = [&](int n) {
        auto D = finite_approximating_set(spec, n, eps);
        auto bas = disk_union_boundary(D.points, eps, opt);
        bas.level = n;
        return bas;
    };
    const BoundaryArcSet top = build(n_hi);
    std::vector<ConvergenceRow> rows;
    for (int n = n_lo; n < n_hi; ++n) {
        auto bas = build(n);
        rows.push_back({n, boundary_distance(bas, top, spacing), bas.arcs.size()});
    }
    rows.push_back({n_hi, 0.0, top.arcs.size()});
    return rows;
}

}  // namespace epsb
