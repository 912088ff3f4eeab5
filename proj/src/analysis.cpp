#include "epsb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace epsb {

ContributorSet contributors(const SetSpec& spec, Point2 x, double eps, double tol) {
    spec.validate();
    if (!(eps > 0.0)) throw Error("eps must be positive");
    ContributorSet pi;
    pi.point = x;
    pi.eps = eps;
    double dmin = INFINITY;
    std::vector<Point2> near;
    for (const auto& prim : spec.primitives) {
        Point2 c = closest_point(prim, x);
        double d = distance(c, x);
        dmin = std::min(dmin, d);
        if (d <= eps + tol) near.push_back(c);
    }
    if (std::abs(dmin - eps) > tol) throw Error("not a boundary point");
    const double merge = 1e-9 * eps;
    for (auto c : near) {
        bool dup = false;
        for (auto q : pi.members)
            if (distance(q, c) <= merge) dup = true;
        if (!dup) pi.members.push_back(c);
    }
    std::sort(pi.members.begin(), pi.members.end(), lex_less);
    pi.extremal.assign(pi.members.size(), false);
    return pi;
}

OutwardArc outward_arc(Point2 x, const ContributorSet& pi, double tol) {
    if (pi.members.empty()) throw Error("no contributors");
    std::vector<double> ang;
    for (auto y : pi.members) {
        Point2 v = y - x;
        if (norm(v) == 0.0) throw Error("contributor coincides with point");
        ang.push_back(normalize_angle(std::atan2(v.y, v.x)));
    }
    std::sort(ang.begin(), ang.end());
    // the cone of contributor directions is the complement of the widest gap
    std::size_t m = ang.size();
    double gap = -1.0;
    std::size_t after = 0;  // index of the direction that follows the widest gap
    for (std::size_t i = 0; i < m; ++i) {
        double g = (i + 1 < m) ? ang[i + 1] - ang[i] : ang[0] + kTwoPi - ang[i];
        if (g > gap) {
            gap = g;
            after = (i + 1) % m;
        }
    }
    const double first = ang[after];
    const double last = ang[(after + m - 1) % m];
    const double w = m == 1 ? 0.0 : kTwoPi - gap;

    OutwardArc oa;
    auto dir = [](double a) { return UnitDir::from_angle(a); };
    if (w > kPi + tol) throw Error("interior point");
    if (w < tol) {
        double mid = first + 0.5 * w;
        oa.xi1 = dir(mid + 0.5 * kPi);
        oa.xi2 = dir(mid - 0.5 * kPi);
        oa.arc = {oa.xi1, oa.xi2, ArcKind::half_circle};
        return oa;
    }
    if (w < kPi - tol) {
        oa.xi1 = dir(last + 0.5 * kPi);
        oa.xi2 = dir(first - 0.5 * kPi);
        oa.arc = {oa.xi1, oa.xi2, ArcKind::proper_arc};
        return oa;
    }
    // cone spans a half-plane: antipodal pair unless a contributor sits strictly inside
    bool interior = false;
    for (double a : ang) {
        double off = ccw_angle(first, a);
        if (off > tol && off < w - tol) interior = true;
    }
    if (interior) {
        oa.xi1 = oa.xi2 = dir(last + 0.5 * kPi);
        oa.arc = {oa.xi1, oa.xi1, ArcKind::singleton};
        return oa;
    }
    oa.arc = geodesic_arc(dir(last + 0.5 * kPi), dir(first + 0.5 * kPi));
    oa.xi1 = oa.arc.a;
    oa.xi2 = oa.arc.b;
    return oa;
}

std::vector<ExtremalPair> extremal_pairs(Point2 x, const ContributorSet& pi, const OutwardArc& oa,
                                         double rel_tol) {
    std::vector<ExtremalPair> out;
    std::vector<UnitDir> xis{oa.xi1};
    if (angle_between(oa.xi1, oa.xi2) > kAngleTol) xis.push_back(oa.xi2);
    const double tol = rel_tol * pi.eps;
    for (auto xi : xis)
        for (auto y : pi.members)
            if (std::abs(dot(y - x, xi.vec())) <= tol) out.push_back({xi, y});
    return out;
}

void flag_extremal(ContributorSet& pi, const OutwardArc& oa, double rel_tol) {
    pi.extremal.assign(pi.members.size(), false);
    for (const auto& pr : extremal_pairs(pi.point, pi, oa, rel_tol))
        for (std::size_t i = 0; i < pi.members.size(); ++i)
            if (pi.members[i] == pr.y) pi.extremal[i] = true;
}

// ---- local boundary representation ----

ApproxContext::ApproxContext(std::vector<Point2> pts, double eps_, int level_)
    : eps(eps_), level(level_), points(std::move(pts)) {
    grid.build(points, eps);
}

ApproxContext ApproxContext::build(const SetSpec& spec, double eps, int n) {
    return ApproxContext(finite_approximating_set(spec, n, eps).points, eps, n);
}

namespace {
constexpr std::size_t kBlock = 32;
}

LocalRepEval::LocalRepEval(const ApproxContext& ctx, Point2 x, const ExtremalPair& pair)
    : ctx_(&ctx), x_(x), d_(x - pair.y) {
    const double eps = ctx.eps;
    dlen_ = norm(d_);
    if (!(dlen_ > 0.0)) throw Error("contributor coincides with base point");
    if (std::abs(dlen_ - eps) > 1e-6 * eps) throw Error("pair inconsistent: contributor not at distance eps");
    Point2 u = d_ * (1.0 / dlen_);
    Point2 xi = pair.xi.vec();
    if (std::abs(dot(xi, u)) > 1e-6) throw Error("pair inconsistent: direction not orthogonal");
    xi = xi - u * dot(xi, u);
    xi_ = xi * (1.0 / norm(xi));

    struct C {
        double a, b;
        long id;
    };
    std::vector<C> cone;
    ctx.grid.for_each_within(x, 2.5 * eps, [&](std::size_t i) {
        Point2 v = ctx.points[i] - x;
        double a = dot(v, xi_), b = dot(v, u);
        if (a >= -eps && a <= eps && b <= -0.5 * eps) cone.push_back({a, b, long(i)});
    });
    std::sort(cone.begin(), cone.end(), [](const C& p, const C& q) { return p.a != q.a ? p.a < q.a : p.id < q.id; });
    for (const auto& c : cone) {
        a_.push_back(c.a);
        b_.push_back(c.b);
        id_.push_back(c.id);
    }
    for (std::size_t k = 0; k < a_.size(); k += kBlock) {
        double m = -INFINITY;
        for (std::size_t j = k; j < std::min(a_.size(), k + kBlock); ++j) m = std::max(m, b_[j]);
        block_bmax_.push_back(m);
    }
}

LocalSample LocalRepEval::at(double s) const {
    const double eps = ctx_->eps;
    const double e2 = eps * eps;
    LocalSample out;
    out.s = s;
    out.f = -INFINITY;
    double best = -INFINITY;  // in length units along (x-y)/|x-y|
    long best_k = -1;
    auto consider = [&](std::size_t k) {
        double da = s - a_[k];
        double r2 = e2 - da * da;
        if (r2 < 0.0) return;
        double t = b_[k] + std::sqrt(r2);
        if (t > best || (t == best && best_k >= 0 && id_[k] < id_[std::size_t(best_k)])) {
            best = t;
            best_k = long(k);
        }
    };
    const std::size_t n = a_.size();
    const std::size_t p = std::size_t(std::lower_bound(a_.begin(), a_.end(), s) - a_.begin());
    // rightwards: a >= s, distance grows with k
    for (std::size_t k = p; k < n;) {
        double d = a_[k] - s;
        if (d > eps) break;
        std::size_t blk = k / kBlock;
        if (k % kBlock == 0 && best_k >= 0 && block_bmax_[blk] + std::sqrt(std::max(0.0, e2 - d * d)) < best) {
            k = (blk + 1) * kBlock;
            continue;
        }
        consider(k);
        ++k;
    }
    // leftwards
    for (std::size_t k = p; k-- > 0;) {
        double d = s - a_[k];
        if (d > eps) break;
        std::size_t blk = k / kBlock;
        if (k % kBlock == kBlock - 1 && best_k >= 0 &&
            block_bmax_[blk] + std::sqrt(std::max(0.0, e2 - d * d)) < best) {
            k = blk * kBlock;  // loop decrement moves into the previous block
            continue;
        }
        consider(k);
    }
    if (best_k < 0) return out;
    std::size_t k = std::size_t(best_k);
    double da = s - a_[k];
    double root = std::sqrt(std::max(0.0, e2 - da * da));
    out.f = best / dlen_;
    out.slope = root > 0.0 ? -da / (dlen_ * root) : (da > 0 ? -INFINITY : INFINITY);
    out.active = id_[k];
    return out;
}

std::vector<double> uniform_grid(double eps, int num_samples) {
    if (num_samples < 2) throw Error("need at least 2 samples");
    std::vector<double> g(static_cast<std::size_t>(num_samples));
    for (int i = 0; i < num_samples; ++i) g[std::size_t(i)] = 0.5 * eps * double(i) / double(num_samples - 1);
    return g;
}

LocalRep local_rep(const ApproxContext& ctx, Point2 x, const ExtremalPair& pair, int num_samples) {
    LocalRepEval ev(ctx, x, pair);
    LocalRep rep;
    rep.pair = pair;
    rep.base = x;
    rep.level = ctx.level;
    rep.eps = ctx.eps;
    const double eps = ctx.eps;
    bool prefix = true;
    for (double s : uniform_grid(eps, num_samples)) {
        LocalSample smp = ev.at(s);
        if (prefix) {
            bool ok = smp.defined();
            if (ok) {
                double a = dot(ctx.points[std::size_t(smp.active)] - x, ev.xi());
                ok = a >= -1e-9 * eps && a <= 0.5 * eps + 1e-9 * eps;
            }
            if (ok) rep.radius = s;
            else prefix = false;
        }
        rep.samples.push_back(smp);
    }
    return rep;
}

LocalRep local_rep(const SetSpec& spec, Point2 x, const ExtremalPair& pair, double eps, int n, int num_samples) {
    ApproxContext ctx = ApproxContext::build(spec, eps, n);
    return local_rep(ctx, x, pair, num_samples);
}

bool opposing(Point2 x, Point2 y1, Point2 y2, double eps) {
    return norm((y1 - x) + (y2 - x)) <= 1e-6 * eps;
}

AlphaProfile alpha_profile(const LocalRep& r1, const LocalRep& r2, double zero_tol) {
    if (r1.samples.size() != r2.samples.size()) throw Error("mismatched sample grids");
    for (std::size_t i = 0; i < r1.samples.size(); ++i)
        if (r1.samples[i].s != r2.samples[i].s) throw Error("mismatched sample grids");
    if (angle_between(r1.pair.xi, r2.pair.xi) > 1e-9) throw Error("different directions");
    if (!opposing(r1.base, r1.pair.y, r2.pair.y, r1.eps)) throw Error("contributors are not opposing");
    AlphaProfile ap;
    for (std::size_t i = 0; i < r1.samples.size(); ++i) {
        const auto& a = r1.samples[i];
        const auto& b = r2.samples[i];
        double al = (a.defined() && b.defined()) ? a.f + b.f : -INFINITY;
        ap.points.push_back({a.s, al});
    }
    auto sgn = [zero_tol](double v) { return v > zero_tol ? 1 : (v < -zero_tol ? -1 : 0); };
    for (std::size_t i = 0; i + 1 < ap.points.size(); ++i)
        if (sgn(ap.points[i].alpha) != sgn(ap.points[i + 1].alpha)) ap.sign_changes.push_back(i);
    for (std::size_t i = 1; i < ap.points.size(); ++i) {
        double v = ap.points[i].alpha;
        if (std::abs(v) > zero_tol) continue;
        double prev = ap.points[i - 1].alpha;
        double next = i + 1 < ap.points.size() ? ap.points[i + 1].alpha : -INFINITY;
        if (v >= prev && v >= next) ap.zero_touches.push_back(i);
    }
    return ap;
}

// ---- tangent estimation ----

TangentEstimator::TangentEstimator(const std::vector<BoundarySample>& samples) : samples_(&samples) {
    std::size_t narcs = 0;
    for (const auto& s : samples) narcs = std::max(narcs, s.arc_id + 1);
    by_arc_.assign(narcs, {});
    arc_of_.resize(samples.size());
    pos_of_.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        arc_of_[i] = samples[i].arc_id;
        pos_of_[i] = by_arc_[samples[i].arc_id].size();
        by_arc_[samples[i].arc_id].push_back(i);
    }
    closed_.assign(narcs, false);
    next_arc_.assign(narcs, -1);
    prev_arc_.assign(narcs, -1);
    std::vector<Point2> firsts;
    std::vector<std::size_t> first_arc;
    for (std::size_t a = 0; a < narcs; ++a) {
        if (by_arc_[a].empty()) continue;
        closed_[a] = samples[by_arc_[a].front()].closed;
        firsts.push_back(samples[by_arc_[a].front()].position);
        first_arc.push_back(a);
    }
    if (firsts.empty()) return;
    PointGrid grid(firsts, 0.0);
    for (std::size_t a = 0; a < narcs; ++a) {
        if (by_arc_[a].empty() || closed_[a]) continue;
        Point2 end = samples[by_arc_[a].back()].position;
        long pick = -1;
        grid.for_each_within(end, 1e-9, [&](std::size_t k) {
            std::size_t b = first_arc[k];
            if (b != a && (pick < 0 || long(b) < pick)) pick = long(b);
        });
        if (pick >= 0) {
            next_arc_[a] = pick;
            if (prev_arc_[std::size_t(pick)] < 0) prev_arc_[std::size_t(pick)] = long(a);
        }
    }
}

std::size_t TangentEstimator::walk(std::size_t arc, long pos, bool forward) const {
    for (int hops = 0; hops < 64; ++hops) {
        const auto& list = by_arc_[arc];
        const long m = long(list.size());
        if (closed_[arc]) return list[std::size_t(((pos % m) + m) % m)];
        if (pos >= 0 && pos < m) return list[std::size_t(pos)];
        if (forward) {
            long nxt = next_arc_[arc];
            if (nxt < 0) return list.back();
            // last sample of this arc equals first of the next
            pos = pos - (m - 1);
            arc = std::size_t(nxt);
        } else {
            long prv = prev_arc_[arc];
            if (prv < 0) return list.front();
            long pm = long(by_arc_[std::size_t(prv)].size());
            pos = pm - 1 + pos;
            arc = std::size_t(prv);
        }
    }
    return by_arc_[arc].front();
}

std::pair<UnitDir, UnitDir> TangentEstimator::operator()(std::size_t idx, int window) const {
    if (window < 1) throw Error("window must be >= 1");
    if (idx >= samples_->size()) throw Error("sample index out of range");
    const std::size_t arc = arc_of_[idx];
    const long pos = long(pos_of_[idx]);
    Point2 p = (*samples_)[idx].position;
    auto secant = [&](bool fwd) {
        std::size_t j = walk(arc, fwd ? pos + window : pos - window, fwd);
        Point2 v = (*samples_)[j].position - p;
        if (norm(v) <= 1e-15) {
            // at an open end: retry with a shorter step so that the vertex sample still has a secant
            throw Error("isolated sample");
        }
        return UnitDir::normalized(v);
    };
    return {secant(true), secant(false)};
}

std::pair<UnitDir, UnitDir> tangent_estimate(const std::vector<BoundarySample>& samples, std::size_t idx,
                                             int window) {
    return TangentEstimator(samples)(idx, window);
}

double outward_probe_radius(const SetSpec& spec, Point2 x, UnitDir v, double eps, double r_max, int iters) {
    auto outside = [&](double r) {
        for (int j = 1; j <= 4; ++j) {
            Point2 p = x + v.vec() * (r * j / 4.0);
            if (distance_and_projection(spec, p).distance <= eps) return false;
        }
        return true;
    };
    if (outside(r_max)) return r_max;
    double lo = 0.0, hi = r_max;
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (outside(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

}  // namespace epsb
