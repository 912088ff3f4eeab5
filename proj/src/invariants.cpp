#include "epsb/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "epsb/analysis.hpp"
#include "epsb/arrangement.hpp"

namespace epsb {

void CheckResult::fail(std::string msg) {
    ok = false;
    if (failures.size() < 20) failures.push_back(std::move(msg));
}

namespace {

std::string at(Point2 p) {
    std::ostringstream os;
    os.precision(9);
    os << "(" << p.x << "," << p.y << ")";
    return os.str();
}

// push a level-n sample radially onto dist(., E) = eps
std::optional<Point2> project(const SetSpec& spec, Point2 x, double eps) {
    auto pr = distance_and_projection(spec, x);
    if (pr.argmin.empty() || pr.distance <= 0.0) return std::nullopt;
    Point2 y = pr.argmin.front();
    return y + (eps / pr.distance) * (x - y);
}

struct Exact {
    Point2 x;
    ContributorSet pi;
    OutwardArc oa;
};

std::optional<Exact> exact_point(const SetSpec& spec, Point2 xn, double eps) {
    auto x = project(spec, xn, eps);
    if (!x) return std::nullopt;
    try {
        auto pi = contributors(spec, *x, eps, 1e-9 * std::max(1.0, eps));
        auto oa = outward_arc(*x, pi);
        return Exact{*x, std::move(pi), oa};
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<BoundarySample> check_samples(const SetSpec& spec, double eps, int n, double spacing,
                                          std::size_t max_points, BoundaryArcSet* bas_out) {
    auto D = finite_approximating_set(spec, n, eps);
    auto bas = disk_union_boundary(D.points, eps);
    auto all = sample_boundary(bas, spacing);
    if (bas_out) *bas_out = bas;
    if (max_points == 0 || all.size() <= max_points) return all;
    std::vector<BoundarySample> out;
    for (std::size_t k = 0; k < max_points; ++k) out.push_back(all[k * all.size() / max_points]);
    return out;
}

CheckResult check_lipschitz(const SetSpec& spec, double eps, int n, double spacing, std::size_t max_points) {
    CheckResult res;
    res.name = "lipschitz";
    const double L = 1.0 / (std::sqrt(3.0) * eps) + 1e-3;
    const double C = 2.0 / std::sqrt(3.0) + 1e-3;
    auto ctx = ApproxContext::build(spec, eps, n);
    for (const auto& s : check_samples(spec, eps, n, spacing, max_points)) {
        auto ex = exact_point(spec, s.position, eps);
        if (!ex) {
            ++res.skipped;
            continue;
        }
        for (const auto& pair : extremal_pairs(ex->x, ex->pi, ex->oa)) {
            auto rep = local_rep(ctx, ex->x, pair);
            LocalRepEval ev(ctx, ex->x, pair);
            ++res.checked;
            for (std::size_t i = 0; i + 1 < rep.samples.size(); ++i) {
                const auto& a = rep.samples[i];
                const auto& b = rep.samples[i + 1];
                if (b.s > rep.radius || !a.defined() || !b.defined()) break;
                double ds = b.s - a.s;
                double slope = std::abs(b.f - a.f) / ds;
                res.worst = std::max(res.worst, slope * std::sqrt(3.0) * eps);
                if (slope > L) res.fail("slope " + std::to_string(slope) + " at " + at(ex->x));
                if (distance(ev.curve(a.s, a.f), ev.curve(b.s, b.f)) > C * ds)
                    res.fail("curve step beyond 2/sqrt3 at " + at(ex->x));
            }
        }
    }
    if (res.checked == 0) res.fail("no local representation checked");
    return res;
}

CheckResult check_orientation(const SetSpec& spec, double eps, int n, double spacing, std::size_t max_points) {
    CheckResult res;
    res.name = "orientation";
    for (const auto& s : check_samples(spec, eps, n, spacing, max_points)) {
        auto ex = exact_point(spec, s.position, eps);
        if (!ex) {
            ++res.skipped;
            continue;
        }
        ++res.checked;
        const auto& arc = ex->oa.arc;
        std::vector<UnitDir> dirs{arc.a, arc.b};
        if (arc.kind == ArcKind::proper_arc || arc.kind == ArcKind::half_circle)
            for (int k = 1; k < 8; ++k) dirs.push_back(arc.a.rotated(arc.width() * k / 8.0));
        for (auto u : dirs)
            for (auto y : ex->pi.members) {
                double v = dot(y - ex->x, u.vec()) / eps;
                res.worst = std::max(res.worst, v);
                if (v > 1e-7) res.fail("direction points into a contributor at " + at(ex->x));
            }
    }
    if (res.checked == 0) res.fail("no sample checked");
    return res;
}

CheckResult check_tangents(const SetSpec& spec, double eps, int n, double spacing, double tol) {
    CheckResult res;
    res.name = "tangents";
    auto samples = check_samples(spec, eps, n, spacing, 0);
    TangentEstimator te(samples);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto ex = exact_point(spec, samples[i].position, eps);
        if (!ex || ex->oa.arc.kind != ArcKind::half_circle) {
            ++res.skipped;
            continue;
        }
        std::pair<UnitDir, UnitDir> fb;
        try {
            fb = te(i, 1);
        } catch (const Error&) {
            ++res.skipped;
            continue;
        }
        auto [f, b] = fb;
        double e1 = std::max(angle_between(f, ex->oa.xi1), angle_between(b, ex->oa.xi2));
        double e2 = std::max(angle_between(f, ex->oa.xi2), angle_between(b, ex->oa.xi1));
        double e = std::min(e1, e2);
        ++res.checked;
        res.worst = std::max(res.worst, e);
        if (e > tol) res.fail("tangent error " + std::to_string(e) + " at " + at(samples[i].position));
    }
    if (res.checked == 0) res.fail("no smooth sample");
    return res;
}

CheckResult check_partition(const Inventory& inv) {
    CheckResult res;
    res.name = "partition";
    auto rep = verify_partition(inv);
    res.checked = inv.records.size();
    for (auto& v : rep.violations) res.fail(v);
    res.ok = rep.ok;
    return res;
}

CheckResult check_raster(const std::vector<Point2>& centers, double eps, double h, std::optional<Point2> anchor) {
    CheckResult res;
    res.name = "raster";
    auto rs = raster_stability(centers, eps, h, anchor);
    res.checked = 2;
    res.worst = std::abs(double(rs.total_h) - double(rs.total_half));
    if (!rs.stable()) {
        std::ostringstream os;
        os << "components at h: " << rs.total_h << " (" << rs.bounded_h << " bounded), at h/2: " << rs.total_half
           << " (" << rs.bounded_half << " bounded)";
        res.fail(os.str());
    }
    return res;
}

}  // namespace epsb
