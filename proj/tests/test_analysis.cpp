#include <random>

#include "doctest.h"
#include "epsb/analysis.hpp"

using namespace epsb;

namespace {

SetSpec points_spec(std::vector<Point2> pts) {
    SetSpec s;
    for (auto p : pts) s.primitives.push_back(PointPrim{p});
    return s;
}

bool near_dir(UnitDir u, Point2 v, double tol) { return angle_between(u, UnitDir::normalized(v)) <= tol; }

bool has_pair(const std::vector<ExtremalPair>& ps, Point2 xi, Point2 y) {
    for (const auto& p : ps)
        if (near_dir(p.xi, xi, 1e-9) && distance(p.y, y) <= 1e-12) return true;
    return false;
}

// brute-force f: largest t on a fine scan with g(s,t) inside some cone disk
double brute_f(const std::vector<Point2>& cone, Point2 x, Point2 xi, Point2 d, double eps, double s) {
    double best = -INFINITY;
    for (auto c : cone) {
        for (double t = -2.0; t <= 2.0; t += 1e-5) {
            Point2 g = x + xi * s + d * t;
            if (distance(g, c) <= eps) best = std::max(best, t);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("contributors examples") {
    auto a = contributors(points_spec({{0, 0}}), {1, 0}, 1.0, 1e-9);
    REQUIRE(a.members.size() == 1);
    CHECK(a.members[0] == Point2{0, 0});

    auto b = contributors(points_spec({{-1, 0}, {1, 0}}), {0, 0.75}, 1.25, 1e-9);
    REQUIRE(b.members.size() == 2);
    auto oa = outward_arc(b.point, b);
    flag_extremal(b, oa);
    CHECK(b.extremal[0]);
    CHECK(b.extremal[1]);

    auto c = contributors(gen_rectangle_example(), {3, 0.5}, 0.5, 1e-9);
    REQUIRE(c.members.size() == 2);
    CHECK(distance(c.members[0], {3, 0}) < 1e-15);
    CHECK(distance(c.members[1], {3, 1}) < 1e-15);

    CHECK_THROWS_WITH(contributors(points_spec({{0, 0}}), {0.5, 0}, 1.0, 1e-9), "not a boundary point");
}

TEST_CASE("outward_arc examples") {
    ContributorSet u;
    u.point = {0, 0};
    u.eps = 1;
    u.members = {{0, -1}};
    auto oa = outward_arc(u.point, u);
    CHECK(oa.arc.kind == ArcKind::half_circle);
    CHECK(near_dir(oa.arc.midpoint(), {0, 1}, 1e-12));

    auto w = contributors(points_spec({{-1, 0}, {1, 0}}), {0, 0.75}, 1.25, 1e-9);
    auto wa = outward_arc(w.point, w);
    CHECK(wa.arc.kind == ArcKind::proper_arc);
    CHECK(wa.arc.width() == doctest::Approx(std::acos(0.28)).epsilon(1e-12));
    CHECK(same_point_set(wa.arc, geodesic_arc(UnitDir::normalized({-0.6, 0.8}), UnitDir::normalized({0.6, 0.8}))));

    auto r = contributors(gen_rectangle_example(), {3, 0.5}, 0.5, 1e-9);
    auto ra = outward_arc(r.point, r);
    CHECK(ra.arc.kind == ArcKind::antipodal_pair);
    CHECK(arc_contains(ra.arc, UnitDir::make(1, 0)));
    CHECK(arc_contains(ra.arc, UnitDir::make(-1, 0)));

    // three contributors spread over more than a half-plane
    ContributorSet in;
    in.point = {0, 0};
    in.eps = 1;
    in.members = {{1, 0}, {-0.5, 0.8660254037844386}, {-0.5, -0.8660254037844386}};
    CHECK_THROWS_WITH(outward_arc(in.point, in), "interior point");
    in.members.clear();
    CHECK_THROWS(outward_arc(in.point, in));
}

TEST_CASE("extremal_pairs examples") {
    ContributorSet u;
    u.point = {0, 0};
    u.eps = 1;
    u.members = {{0, -1}};
    auto up = extremal_pairs(u.point, u, outward_arc(u.point, u));
    CHECK(up.size() == 2);
    CHECK(has_pair(up, {1, 0}, {0, -1}));
    CHECK(has_pair(up, {-1, 0}, {0, -1}));

    auto w = contributors(points_spec({{-1, 0}, {1, 0}}), {0, 0.75}, 1.25, 1e-9);
    auto wp = extremal_pairs(w.point, w, outward_arc(w.point, w));
    CHECK(wp.size() == 2);
    CHECK(has_pair(wp, {-0.6, 0.8}, {-1, 0}));
    CHECK(has_pair(wp, {0.6, 0.8}, {1, 0}));

    auto r = contributors(gen_rectangle_example(), {3, 0.5}, 0.5, 1e-9);
    auto rp = extremal_pairs(r.point, r, outward_arc(r.point, r));
    CHECK(rp.size() == 4);
    for (Point2 xi : {Point2{1, 0}, Point2{-1, 0}})
        for (Point2 y : {Point2{3, 0}, Point2{3, 1}}) CHECK(has_pair(rp, xi, y));
}

TEST_CASE("outward arc orientation on random clouds") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto spec = gen_random_cloud(seed, 40, 0.0, 3.0);
        std::vector<Point2> pts;
        for (const auto& p : spec.primitives) pts.push_back(std::get<PointPrim>(p).p);
        const double eps = 0.3;
        auto bas = disk_union_boundary(pts, eps);
        std::vector<Point2> xs;
        for (const auto& v : bas.vertices) xs.push_back(v.p);
        for (const auto& s : sample_boundary(bas, 0.05)) xs.push_back(s.position);
        for (auto x : xs) {
            auto pi = contributors(spec, x, eps, 1e-9);
            auto oa = outward_arc(x, pi);
            auto pairs = extremal_pairs(x, pi, oa);
            CHECK(!pairs.empty());
            CHECK(pairs.size() <= 4);
            for (const auto& y : pi.members) CHECK(std::abs(distance(y, x) - eps) <= 1e-9);
            // sample the arc
            const double w = oa.arc.width();
            for (int k = 0; k <= 16; ++k) {
                UnitDir u = oa.arc.kind == ArcKind::antipodal_pair ? (k % 2 ? oa.xi1 : oa.xi2)
                                                                   : oa.xi1.rotated(w * k / 16.0);
                double worst = -INFINITY;
                for (const auto& y : pi.members) worst = std::max(worst, dot(y - x, u.vec()));
                CHECK(worst <= 1e-7);
            }
        }
    }
}

TEST_CASE("local_rep on a single disk") {
    ApproxContext ctx({{0, -1}}, 1.0, 0);
    ExtremalPair pr{UnitDir::make(1, 0), {0, -1}};
    LocalRepEval ev(ctx, {0, 0}, pr);
    CHECK(ev.at(0.5).f == doctest::Approx(std::sqrt(0.75) - 1.0).epsilon(1e-12));
    CHECK(std::abs(ev.at(0.5).f - (-0.1339746)) <= 1e-7);
    CHECK(ev.at(0.0).f == 0.0);
    double secant = (ev.at(0.5).f - ev.at(0.49).f) / 0.01;
    CHECK(std::abs(secant) < 1.0 / std::sqrt(3.0));
    CHECK(std::abs(secant) > 0.98 / std::sqrt(3.0));
    CHECK(ev.at(0.5).slope == doctest::Approx(-1.0 / std::sqrt(3.0)));

    auto rep = local_rep(ctx, {0, 0}, pr);
    CHECK(rep.samples.size() == 256);
    CHECK(rep.samples.front().s == 0.0);
    CHECK(rep.samples.back().s == 0.5);
    CHECK(rep.radius == 0.5);
    for (const auto& s : rep.samples) CHECK(s.f == doctest::Approx(std::sqrt(1 - s.s * s.s) - 1).epsilon(1e-12));

    CHECK_THROWS(LocalRepEval(ctx, {0, 0.5}, pr));
    CHECK_THROWS(LocalRepEval(ctx, {0, 0}, ExtremalPair{UnitDir::normalized({1, 1}), {0, -1}}));
    CHECK_THROWS(uniform_grid(1.0, 1));
}

TEST_CASE("local_rep undefined where no centre reaches") {
    // only a far-left centre in the cone: s beyond its reach is open
    ApproxContext ctx({{0, -1}, {-0.9, -1.2}}, 1.0, 0);
    LocalRepEval ev(ctx, {0, 0}, {UnitDir::make(-1, 0), {0, -1}});
    CHECK(ev.at(0.0).defined());
    ApproxContext lone({{0, -1}}, 1.0, 0);
    LocalRepEval e2(lone, {0, 0}, {UnitDir::make(1, 0), {0, -1}});
    CHECK(!e2.at(1.5).defined());
    CHECK(std::isinf(e2.at(1.5).f));
}

TEST_CASE("local_rep on a segment: level set, Lipschitz, monotone in n") {
    SetSpec seg;
    seg.primitives.push_back(SegmentPrim{{0, 0}, {1, 0}});
    const double eps = 0.5;
    const Point2 x{0.5, 0.5};
    ExtremalPair pr{UnitDir::make(1, 0), {0.5, 0}};
    std::vector<double> prev;
    for (int n = 5; n <= 9; ++n) {
        auto ctx = ApproxContext::build(seg, eps, n);
        auto rep = local_rep(ctx, x, pr, 128);
        LocalRepEval ev(ctx, x, pr);
        std::vector<Point2> cone;
        for (auto c : ctx.points) {
            Point2 v = c - x;
            if (std::abs(v.x) <= eps && v.y <= -0.5 * eps) cone.push_back(c);
        }
        for (const auto& s : rep.samples) {
            REQUIRE(s.defined());
            Point2 g = ev.curve(s.s, s.f);
            double dmin = INFINITY;
            for (auto c : cone) dmin = std::min(dmin, distance(g, c));
            CHECK(std::abs(dmin - eps) <= 1e-8);
        }
        const double L = 1.0 / (std::sqrt(3.0) * eps) + 1e-3;
        for (std::size_t i = 0; i < rep.samples.size(); ++i)
            for (std::size_t j = i + 1; j < rep.samples.size(); ++j) {
                const auto& a = rep.samples[i];
                const auto& b = rep.samples[j];
                if (b.s > rep.radius) continue;
                CHECK(std::abs(a.f - b.f) <= L * (b.s - a.s));
                CHECK(distance(ev.curve(a.s, a.f), ev.curve(b.s, b.f)) <= (2.0 / std::sqrt(3.0) + 1e-3) * (b.s - a.s));
            }
        if (!prev.empty())
            for (std::size_t i = 0; i < prev.size(); ++i) CHECK(rep.samples[i].f >= prev[i] - 1e-15);
        prev.clear();
        for (const auto& s : rep.samples) prev.push_back(s.f);
    }
    for (std::size_t i = 0; i < prev.size(); ++i) CHECK(std::abs(prev[i]) <= 2.0 * std::ldexp(1.0, -9) / eps);
}

TEST_CASE("local_rep matches a brute-force scan") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    std::vector<Point2> pts{{0, -1}};
    for (int k = 0; k < 12; ++k) pts.push_back({u(rng), -1.0 - 0.3 * std::abs(u(rng))});
    ApproxContext ctx(pts, 1.0, 0);
    LocalRepEval ev(ctx, {0, 0}, {UnitDir::make(1, 0), {0, -1}});
    for (double s : {0.0, 0.1, 0.27, 0.4, 0.5}) {
        double bf = brute_f(pts, {0, 0}, {1, 0}, {0, 1}, 1.0, s);
        CHECK(std::abs(ev.at(s).f - bf) <= 2e-5);
    }
}

TEST_CASE("alpha profile: sharp, zero touch, mirror") {
    const Point2 x{0, 0};
    const UnitDir xi = UnitDir::make(1, 0);
    {
        ApproxContext ctx({{0, 1}, {0, -1}}, 1.0, 0);
        auto r1 = local_rep(ctx, x, {xi, {0, -1}});
        auto r2 = local_rep(ctx, x, {xi, {0, 1}});
        auto ap = alpha_profile(r1, r2);
        for (const auto& p : ap.points) {
            CHECK(p.alpha == doctest::Approx(2 * (std::sqrt(1 - p.s * p.s) - 1)).epsilon(1e-12));
            if (p.s > 0) CHECK(p.alpha < 0);
        }
        // mirror: alpha = 2 f, no sign change after the shared zero at s = 0
        for (std::size_t i = 0; i < ap.points.size(); ++i)
            CHECK(ap.points[i].alpha == doctest::Approx(2 * r1.samples[i].f));
        CHECK(ap.sign_changes.size() == 1);
        CHECK(ap.sign_changes[0] == 0);
        CHECK(ap.zero_touches.empty());
    }
    {
        // a second tangent pair re-closes the gap at s0
        const double s0 = 0.3;
        std::vector<Point2> pts{{0, 1}, {0, -1}, {s0, 1}, {s0, -1}};
        ApproxContext ctx(pts, 1.0, 0);
        auto r1 = local_rep(ctx, x, {xi, {0, -1}});
        auto r2 = local_rep(ctx, x, {xi, {0, 1}});
        auto ap = alpha_profile(r1, r2, 1e-5);
        REQUIRE(!ap.zero_touches.empty());
        double at = ap.points[ap.zero_touches.front()].s;
        CHECK(std::abs(at - s0) <= 0.5 / 255);
        // oracle: scanned upper and lower envelopes meet at s0 and nowhere nearby
        std::vector<Point2> lower{{0, -1}, {s0, -1}}, upper{{0, 1}, {s0, 1}};
        auto scan_alpha = [&](double s) {
            return brute_f(lower, x, {1, 0}, {0, 1}, 1.0, s) + brute_f(upper, x, {1, 0}, {0, -1}, 1.0, s);
        };
        CHECK(std::abs(scan_alpha(s0)) <= 2e-5);
        CHECK(scan_alpha(s0 - 0.1) < -1e-3);
        CHECK(scan_alpha(s0 + 0.1) < -1e-3);
    }
    ApproxContext ctx({{0, 1}, {0, -1}, {0.2, -1}}, 1.0, 0);
    auto r1 = local_rep(ctx, x, {xi, {0, -1}});
    auto r3 = local_rep(ctx, x, {xi, {0, -1}}, 64);
    auto r4 = local_rep(ctx, x, {UnitDir::make(-1, 0), {0, 1}});
    CHECK_THROWS(alpha_profile(r1, r3));
    CHECK_THROWS(alpha_profile(r1, r1));
    CHECK_THROWS(alpha_profile(r1, r4));
}

TEST_CASE("tangent_estimate examples") {
    std::vector<BoundarySample> circ;
    for (int k = 0; k <= 100; ++k) {
        BoundarySample s;
        double th = 0.01 * k;
        s.position = {std::cos(th), std::sin(th)};
        s.s = th;
        circ.push_back(s);
    }
    auto [f, b] = tangent_estimate(circ, 1, 1);
    CHECK(near_dir(f, {-std::sin(0.01), std::cos(0.01)}, 0.02));
    CHECK(near_dir(b, {std::sin(0.01), -std::cos(0.01)}, 0.02));
    CHECK_THROWS(tangent_estimate(circ, 1, 0));
    CHECK_THROWS(tangent_estimate(circ, 500, 1));

    std::vector<BoundarySample> line;
    for (int k = 0; k < 50; ++k) {
        BoundarySample s;
        s.position = {0.1 * k, 0.05 * k};
        line.push_back(s);
    }
    auto [lf, lb] = tangent_estimate(line, 20, 3);
    CHECK(angle_between(lf, -lb) <= 1e-6);

    BoundarySample lone;
    CHECK_THROWS_WITH(tangent_estimate({lone}, 0, 1), "isolated sample");
}

TEST_CASE("tangents at the wedge vertex converge to the extremal directions") {
    std::vector<Point2> c{{-1, 0}, {1, 0}};
    const double eps = 1.25;
    auto bas = disk_union_boundary(c, eps);
    for (double spacing : {0.01, 0.001}) {
        auto samples = sample_boundary(bas, spacing);
        TangentEstimator te(samples);
        int hits = 0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (distance(samples[i].position, {0, 0.75}) > 1e-9) continue;
            ++hits;
            auto [f, b] = te(i, 1);
            bool ok1 = near_dir(f, {-0.6, 0.8}, 5 * spacing / eps) && near_dir(b, {0.6, 0.8}, 5 * spacing / eps);
            bool ok2 = near_dir(b, {-0.6, 0.8}, 5 * spacing / eps) && near_dir(f, {0.6, 0.8}, 5 * spacing / eps);
            CHECK((ok1 || ok2));
        }
        CHECK(hits == 2);
    }
}

TEST_CASE("outward probe radius") {
    auto spec = points_spec({{-1, 0}, {1, 0}});
    double r = outward_probe_radius(spec, {0, 0.75}, UnitDir::make(0, 1), 1.25, 1.0);
    CHECK(r == 1.0);
    // pointing back into the set: nothing is outside
    double r2 = outward_probe_radius(spec, {0, 0.75}, UnitDir::make(0, -1), 1.25, 1.0);
    CHECK(r2 < 1e-8);
}
