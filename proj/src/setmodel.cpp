#include "epsb/setmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace epsb {

namespace {

struct SegParam {
    double t;
    Point2 p;
};

SegParam seg_closest(const SegmentPrim& s, Point2 x) {
    Point2 d = s.b - s.a;
    double L2 = norm2(d);
    double t = L2 > 0.0 ? std::clamp(dot(x - s.a, d) / L2, 0.0, 1.0) : 0.0;
    if (t == 0.0) return {0.0, s.a};
    if (t == 1.0) return {1.0, s.b};
    return {t, s.a + d * t};
}

Point2 seg_at(const SegmentPrim& s, double t) {
    if (t <= 0.0) return s.a;
    if (t >= 1.0) return s.b;
    return s.a + (s.b - s.a) * t;
}

}  // namespace

void SetSpec::validate() const {
    if (primitives.empty()) throw Error("empty set spec");
    for (const auto& prim : primitives) {
        bool ok = std::visit(
            [](const auto& v) {
                if constexpr (std::is_same_v<std::decay_t<decltype(v)>, PointPrim>)
                    return v.p.finite();
                else
                    return v.a.finite() && v.b.finite();
            },
            prim);
        if (!ok) throw Error("non-finite coordinate in set spec");
    }
}

BBox SetSpec::bbox() const {
    validate();
    BBox box{{INFINITY, INFINITY}, {-INFINITY, -INFINITY}};
    auto add = [&](Point2 p) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
    };
    for (const auto& prim : primitives) {
        if (auto* pp = std::get_if<PointPrim>(&prim)) {
            add(pp->p);
        } else {
            const auto& s = std::get<SegmentPrim>(prim);
            add(s.a);
            add(s.b);
        }
    }
    return box;
}

Point2 closest_point(const Primitive& prim, Point2 x) {
    if (auto* pp = std::get_if<PointPrim>(&prim)) return pp->p;
    return seg_closest(std::get<SegmentPrim>(prim), x).p;
}

double primitive_distance(const Primitive& prim, Point2 x) {
    return distance(closest_point(prim, x), x);
}

ProjectionResult distance_and_projection(const SetSpec& spec, Point2 x) {
    if (spec.primitives.empty()) throw Error("empty set spec");
    std::vector<std::pair<double, Point2>> cand;
    cand.reserve(spec.primitives.size());
    double dmin = INFINITY;
    for (const auto& prim : spec.primitives) {
        Point2 c = closest_point(prim, x);
        double d = distance(c, x);
        cand.emplace_back(d, c);
        dmin = std::min(dmin, d);
    }
    const double tol = 1e-9 * std::max(dmin, 1e-6);
    ProjectionResult res;
    res.distance = dmin;
    for (const auto& [d, c] : cand) {
        if (d > dmin + tol) continue;
        bool dup = false;
        for (const auto& q : res.argmin)
            if (distance(q, c) <= tol) dup = true;
        if (!dup) res.argmin.push_back(c);
    }
    std::sort(res.argmin.begin(), res.argmin.end(), lex_less);
    return res;
}

// ---- finite approximating sets ----

int min_level(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw Error("eps must be positive");
    int n0 = int(std::floor(std::log2(4.0 / eps))) + 1;
    return std::max(n0, 1);
}

namespace {

struct Cell {
    std::int64_t kx, ky;
    Point2 rep;
    std::vector<std::uint32_t> prims;
};

struct CellGeom {
    std::int64_t kx, ky;
    double h;

    bool contains(Point2 p) const {
        return std::int64_t(std::floor(p.x / h)) == kx && std::int64_t(std::floor(p.y / h)) == ky;
    }
    Point2 corner() const { return {double(kx) * h, double(ky) * h}; }
};

// Point of prim within the half-open cell closest to its lower-left corner.
bool cell_candidate(const Primitive& prim, const CellGeom& c, Point2& out) {
    if (auto* pp = std::get_if<PointPrim>(&prim)) {
        if (!c.contains(pp->p)) return false;
        out = pp->p;
        return true;
    }
    const auto& s = std::get<SegmentPrim>(prim);
    Point2 lo = c.corner();
    Point2 hi{lo.x + c.h, lo.y + c.h};
    Point2 d = s.b - s.a;
    // Liang-Barsky against the closed cell
    double t0 = 0.0, t1 = 1.0;
    auto clip = [&](double p, double q) {
        if (p == 0.0) return q >= 0.0;
        double r = q / p;
        if (p < 0.0) {
            if (r > t1) return false;
            t0 = std::max(t0, r);
        } else {
            if (r < t0) return false;
            t1 = std::min(t1, r);
        }
        return true;
    };
    if (!clip(-d.x, s.a.x - lo.x) || !clip(d.x, hi.x - s.a.x) || !clip(-d.y, s.a.y - lo.y) ||
        !clip(d.y, hi.y - s.a.y))
        return false;
    if (t0 > t1) return false;
    double L2 = norm2(d);
    double ts = L2 > 0.0 ? std::clamp(dot(lo - s.a, d) / L2, t0, t1) : t0;
    Point2 p = seg_at(s, ts);
    if (c.contains(p)) {
        out = p;
        return true;
    }
    // Closest point sits on an excluded edge: walk toward the middle of the piece.
    double tm = 0.5 * (t0 + t1);
    Point2 pm = seg_at(s, tm);
    if (!c.contains(pm)) {
        // endpoints of the clip can still be inside when the piece is a single point
        for (double t : {t0, t1}) {
            Point2 q = seg_at(s, t);
            if (c.contains(q)) {
                out = q;
                return true;
            }
        }
        return false;
    }
    double good = tm, bad = ts;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (good + bad);
        if (mid == good || mid == bad) break;
        if (c.contains(seg_at(s, mid))) good = mid;
        else bad = mid;
    }
    out = seg_at(s, good);
    return true;
}

bool better(Point2 cand, Point2 best, Point2 corner) {
    double dc = norm2(cand - corner), db = norm2(best - corner);
    if (dc != db) return dc < db;
    return lex_less(cand, best);
}

std::uint64_t cell_key(std::int64_t kx, std::int64_t ky) {
    return (std::uint64_t(kx) << 32) ^ (std::uint64_t(ky) & 0xffffffffULL);
}

}  // namespace

ApproxSet grid_representatives(const SetSpec& spec, int n) {
    spec.validate();
    if (n < 0 || n > 30) throw Error("level out of range");

    // level 0: unit cells met by each primitive
    std::unordered_map<std::uint64_t, std::size_t> index;
    std::vector<Cell> cells;
    auto touch = [&](std::int64_t kx, std::int64_t ky, std::uint32_t pi) {
        auto [it, fresh] = index.emplace(cell_key(kx, ky), cells.size());
        if (fresh) cells.push_back({kx, ky, {}, {}});
        auto& pr = cells[it->second].prims;
        if (pr.empty() || pr.back() != pi) pr.push_back(pi);
    };
    for (std::uint32_t pi = 0; pi < spec.primitives.size(); ++pi) {
        const auto& prim = spec.primitives[pi];
        if (auto* pp = std::get_if<PointPrim>(&prim)) {
            touch(std::int64_t(std::floor(pp->p.x)), std::int64_t(std::floor(pp->p.y)), pi);
            continue;
        }
        const auto& s = std::get<SegmentPrim>(prim);
        std::vector<double> ts{0.0, 1.0};
        Point2 d = s.b - s.a;
        for (int axis = 0; axis < 2; ++axis) {
            double a = axis ? s.a.y : s.a.x, da = axis ? d.y : d.x;
            if (da == 0.0) continue;
            double lo = std::min(a, a + da), hi = std::max(a, a + da);
            for (double g = std::ceil(lo); g <= hi; g += 1.0) ts.push_back((g - a) / da);
        }
        std::sort(ts.begin(), ts.end());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            for (double t : {ts[i], i + 1 < ts.size() ? 0.5 * (ts[i] + ts[i + 1]) : ts[i]}) {
                if (t < 0.0 || t > 1.0) continue;
                Point2 p = seg_at(s, t);
                touch(std::int64_t(std::floor(p.x)), std::int64_t(std::floor(p.y)), pi);
            }
        }
    }
    // Neighbours cover rounding in the breakpoint scan; empty cells drop out below.
    {
        std::vector<Cell> grown;
        std::unordered_map<std::uint64_t, std::size_t> gi;
        for (const auto& c : cells)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    auto [it, fresh] = gi.emplace(cell_key(c.kx + dx, c.ky + dy), grown.size());
                    if (fresh) grown.push_back({c.kx + dx, c.ky + dy, {}, {}});
                    auto& pr = grown[it->second].prims;
                    pr.insert(pr.end(), c.prims.begin(), c.prims.end());
                }
        cells.clear();
        for (auto& g : grown) {
            std::sort(g.prims.begin(), g.prims.end());
            g.prims.erase(std::unique(g.prims.begin(), g.prims.end()), g.prims.end());
            CellGeom geom{g.kx, g.ky, 1.0};
            std::vector<std::uint32_t> keep;
            bool have = false;
            Point2 best;
            for (auto pi : g.prims) {
                Point2 p;
                if (!cell_candidate(spec.primitives[pi], geom, p)) continue;
                keep.push_back(pi);
                if (!have || better(p, best, geom.corner())) best = p;
                have = true;
            }
            if (have) cells.push_back({g.kx, g.ky, best, std::move(keep)});
        }
    }

    double h = 1.0;
    for (int level = 1; level <= n; ++level) {
        h *= 0.5;
        std::vector<Cell> next;
        next.reserve(cells.size() * 2);
        for (const auto& c : cells) {
            for (int q = 0; q < 4; ++q) {
                CellGeom geom{2 * c.kx + (q & 1), 2 * c.ky + (q >> 1), h};
                std::vector<std::uint32_t> keep;
                bool have = false;
                Point2 best;
                for (auto pi : c.prims) {
                    Point2 p;
                    if (!cell_candidate(spec.primitives[pi], geom, p)) continue;
                    keep.push_back(pi);
                    if (!have || better(p, best, geom.corner())) best = p;
                    have = true;
                }
                if (!have) continue;
                // the child holding the parent's representative inherits it
                if (geom.contains(c.rep)) best = c.rep;
                next.push_back({geom.kx, geom.ky, best, std::move(keep)});
            }
        }
        cells = std::move(next);
    }

    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return a.ky != b.ky ? a.ky < b.ky : a.kx < b.kx;
    });
    ApproxSet out;
    out.level = n;
    out.cell_size = h;
    out.points.reserve(cells.size());
    for (const auto& c : cells) out.points.push_back(c.rep);
    return out;
}

ApproxSet finite_approximating_set(const SetSpec& spec, int n, double eps) {
    if (n <= min_level(eps)) throw Error("level below threshold");
    return grid_representatives(spec, n);
}

// ---- generators ----

SetSpec gen_fat_cantor(int depth) {
    if (depth < 0 || depth > 12) throw Error("depth out of range");
    std::vector<std::pair<double, double>> pieces{{0.0, 1.0}};
    for (int j = 1; j <= depth; ++j) {
        double gap = std::ldexp(1.0, -2 * j);
        std::vector<std::pair<double, double>> nxt;
        for (auto [a, b] : pieces) {
            double m = 0.5 * (a + b);
            nxt.emplace_back(a, m - 0.5 * gap);
            nxt.emplace_back(m + 0.5 * gap, b);
        }
        pieces = std::move(nxt);
    }
    SetSpec spec;
    spec.label = "fat_cantor_" + std::to_string(depth);
    for (double y : {0.0, 1.0})
        for (auto [a, b] : pieces) spec.primitives.push_back(SegmentPrim{{a, y}, {b, y}});
    return spec;
}

SetSpec gen_rectangle_example() {
    SetSpec spec;
    spec.label = "rectangle";
    spec.primitives.push_back(SegmentPrim{{2.0, 0.0}, {3.0, 0.0}});
    spec.primitives.push_back(SegmentPrim{{2.0, 1.0}, {3.0, 1.0}});
    return spec;
}

SetSpec gen_random_cloud(std::uint64_t seed, int count, double lo, double hi) {
    if (count < 1) throw Error("count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    SetSpec spec;
    spec.label = "random_" + std::to_string(seed);
    for (int i = 0; i < count; ++i) {
        double x = u(rng);
        double y = u(rng);
        spec.primitives.push_back(PointPrim{{x, y}});
    }
    return spec;
}

std::vector<Rational> enumerate_rationals(int count) {
    std::vector<Rational> out;
    for (int q = 2; int(out.size()) < count; ++q)
        for (int p = 1; p < q && int(out.size()) < count; ++p)
            if (std::gcd(p, q) == 1) out.push_back({p, q});
    return out;
}

double JumpIntegral::alpha(double s) const {
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] <= s) v += a[i];
    return v;
}

double JumpIntegral::alpha_left(double s) const {
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] < s) v += a[i];
    return v;
}

double JumpIntegral::integral(double s) const {
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] < s) v += a[i] * (s - q[i]);
    return v;
}

JumpIntegral make_jump_integral(int num_terms) {
    if (num_terms < 0) throw Error("num_terms must be non-negative");
    JumpIntegral J;
    for (const auto& r : enumerate_rationals(num_terms)) {
        J.q.push_back(r.value());
        J.a.push_back(std::ldexp(1.0, -int(J.q.size())));
    }
    return J;
}

SetSpec gen_jump_integral(int num_terms, double eps) {
    if (!(eps > 0.0)) throw Error("eps must be positive");
    JumpIntegral J = make_jump_integral(num_terms);
    std::vector<double> nodes;
    const int grid = 256;
    for (int i = 0; i <= grid; ++i) nodes.push_back(double(i) / grid);
    nodes.insert(nodes.end(), J.q.begin(), J.q.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    auto contributor = [&](double s, double D) {
        double r = std::sqrt(1.0 + D * D);
        return Point2{s + eps * D / r, J.integral(s) - eps / r};
    };
    SetSpec spec;
    spec.label = "jump_integral_" + std::to_string(num_terms);
    for (double s : nodes) {
        double dp = J.alpha(s), dm = J.alpha_left(s);
        spec.primitives.push_back(PointPrim{contributor(s, dm)});
        if (dp != dm) spec.primitives.push_back(PointPrim{contributor(s, dp)});
    }
    return spec;
}

}  // namespace epsb
