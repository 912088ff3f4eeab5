#include <map>
#include <set>

#include "doctest.h"
#include "epsb/setmodel.hpp"

using namespace epsb;

namespace {

SetSpec points(std::vector<Point2> ps) {
    SetSpec s;
    for (auto p : ps) s.primitives.push_back(PointPrim{p});
    return s;
}

SetSpec segment(Point2 a, Point2 b) {
    SetSpec s;
    s.primitives.push_back(SegmentPrim{a, b});
    return s;
}

double seg_dist(Point2 a, Point2 b, Point2 p) {
    // independent closest-point formula via dense parameter scan refinement
    double best = INFINITY;
    for (int i = 0; i <= 10000; ++i) {
        double t = i / 10000.0;
        best = std::min(best, distance(p, a + (b - a) * t));
    }
    return best;
}

// Brute force: scan each cell of a fine grid and test whether the segment
// meets the half-open cell, by sampling the segment very densely.
std::set<std::pair<long, long>> brute_cells(Point2 a, Point2 b, double h) {
    std::set<std::pair<long, long>> cells;
    const int N = 200000;
    for (int i = 0; i <= N; ++i) {
        Point2 p = a + (b - a) * (double(i) / N);
        cells.insert({long(std::floor(p.x / h)), long(std::floor(p.y / h))});
    }
    return cells;
}

}  // namespace

TEST_CASE("distance_and_projection examples") {
    auto r = distance_and_projection(points({{0, 0}}), {1, 0});
    CHECK(r.distance == 1.0);
    REQUIRE(r.argmin.size() == 1);
    CHECK(r.argmin[0] == Point2{0, 0});

    // two-circle closed form: sqrt(1 + 0.75^2) = 1.25
    r = distance_and_projection(points({{-1, 0}, {1, 0}}), {0, 0.75});
    CHECK(r.distance == doctest::Approx(std::hypot(1.0, 0.75)));
    CHECK(r.distance == doctest::Approx(1.25));
    REQUIRE(r.argmin.size() == 2);
    CHECK(r.argmin[0] == Point2{-1, 0});
    CHECK(r.argmin[1] == Point2{1, 0});

    auto rect = gen_rectangle_example();
    r = distance_and_projection(rect, {3, 0.5});
    CHECK(r.distance == doctest::Approx(0.5));
    REQUIRE(r.argmin.size() == 2);
    CHECK(r.argmin[0] == Point2{3, 0});
    CHECK(r.argmin[1] == Point2{3, 1});

    r = distance_and_projection(rect, {2.5, 0.5});
    CHECK(r.distance == doctest::Approx(0.5));
    REQUIRE(r.argmin.size() == 2);
    CHECK(r.argmin[0].x == doctest::Approx(2.5));
    CHECK(r.argmin[0].y == 0.0);
    CHECK(r.argmin[1].y == 1.0);

    CHECK_THROWS(distance_and_projection(SetSpec{}, {0, 0}));
}

TEST_CASE("projection: distances agree with dense scan, argmin at distance") {
    auto spec = gen_fat_cantor(2);
    for (double x = -0.5; x <= 1.5; x += 0.173)
        for (double y = -0.4; y <= 1.4; y += 0.191) {
            auto r = distance_and_projection(spec, {x, y});
            double brute = INFINITY;
            for (const auto& prim : spec.primitives) {
                auto s = std::get<SegmentPrim>(prim);
                brute = std::min(brute, seg_dist(s.a, s.b, {x, y}));
            }
            CHECK(r.distance <= brute + 1e-12);
            CHECK(r.distance >= brute - 1e-3);
            for (auto p : r.argmin) CHECK(std::abs(distance(p, {x, y}) - r.distance) <= 1e-10);
        }
}

TEST_CASE("projection reflects with the rectangle's symmetry") {
    auto rect = gen_rectangle_example();
    for (double x = 1.3; x <= 3.7; x += 0.29)
        for (double y = -0.6; y <= 1.6; y += 0.23) {
            auto r = distance_and_projection(rect, {x, y});
            auto m = distance_and_projection(rect, {x, 1.0 - y});
            CHECK(r.distance == doctest::Approx(m.distance).epsilon(1e-12));
            REQUIRE(r.argmin.size() == m.argmin.size());
            std::vector<Point2> refl;
            for (auto p : r.argmin) refl.push_back({p.x, 1.0 - p.y});
            std::sort(refl.begin(), refl.end(), lex_less);
            for (std::size_t i = 0; i < refl.size(); ++i) {
                CHECK(refl[i].x == doctest::Approx(m.argmin[i].x));
                CHECK(refl[i].y == doctest::Approx(m.argmin[i].y));
            }
        }
}

TEST_CASE("finite_approximating_set examples") {
    auto a = finite_approximating_set(points({{0.3, 0.7}}), 4, 4.0);
    REQUIRE(a.points.size() == 1);
    CHECK(a.points[0] == Point2{0.3, 0.7});
    CHECK(a.cell_size == 1.0 / 16);

    auto seg = finite_approximating_set(segment({0, 0}, {1, 0}), 3, 4.0);
    CHECK(seg.points.size() == brute_cells({0, 0}, {1, 0}, 0.125).size());
    CHECK(seg.points.size() == 9);

    auto rect = gen_rectangle_example();
    auto r = finite_approximating_set(rect, 3, 4.0);
    for (auto p : r.points) {
        bool on = (p.y == 0.0 || p.y == 1.0) && p.x >= 2.0 && p.x <= 3.0;
        CHECK(on);
    }
}

TEST_CASE("level threshold") {
    CHECK(min_level(1.0) == 3);
    CHECK(min_level(0.5) == 4);
    CHECK_THROWS_WITH(finite_approximating_set(points({{0, 0}}), 3, 1.0), "level below threshold");
    CHECK_NOTHROW(finite_approximating_set(points({{0, 0}}), 4, 1.0));
}

TEST_CASE("approximating set: cell membership, one per cell, matches brute cells") {
    struct Case {
        Point2 a, b;
    };
    std::vector<Case> cases{{{0.1, 0.2}, {0.9, 0.75}}, {{-0.3, 0.5}, {0.6, -0.45}},
                            {{0, 0}, {0.5, 0.5}}, {{0.25, 0}, {0.25, 1}}};
    for (auto c : cases) {
        auto spec = segment(c.a, c.b);
        for (int n = 2; n <= 6; ++n) {
            double h = std::ldexp(1.0, -n);
            auto A = grid_representatives(spec, n);
            auto expect = brute_cells(c.a, c.b, h);
            std::set<std::pair<long, long>> got;
            for (auto p : A.points) {
                got.insert({long(std::floor(p.x / h)), long(std::floor(p.y / h))});
                CHECK(primitive_distance(spec.primitives[0], p) <= 1e-12);
            }
            CHECK(got.size() == A.points.size());
            CHECK(got == expect);
        }
    }
}

TEST_CASE("approximating sets are nested") {
    std::vector<SetSpec> specs{gen_fat_cantor(3), gen_rectangle_example(), gen_random_cloud(5, 40, 0, 2),
                               segment({0.123, 0.456}, {1.789, 1.01})};
    for (const auto& spec : specs) {
        auto prev = grid_representatives(spec, 1);
        for (int n = 2; n <= 9; ++n) {
            auto cur = grid_representatives(spec, n);
            std::set<std::pair<double, double>> have;
            for (auto p : cur.points) have.insert({p.x, p.y});
            for (auto p : prev.points) CHECK(have.count({p.x, p.y}) == 1);
            prev = std::move(cur);
        }
    }
}

TEST_CASE("approximating set representative is nearest to lower-left corner") {
    auto spec = segment({0.1, 0.9}, {0.9, 0.1});
    auto A = grid_representatives(spec, 2);
    // cell [0.25,0.5)x[0.5,0.75): the segment x+y=1 enters at (0.25,0.75) (excluded edge)
    // and leaves at (0.5,0.5) (excluded x edge); interior points approach either end.
    for (auto p : A.points) CHECK(p.x + p.y == doctest::Approx(1.0));
}

TEST_CASE("fat cantor") {
    auto k0 = gen_fat_cantor(0);
    REQUIRE(k0.primitives.size() == 2);
    auto k1 = gen_fat_cantor(1);
    REQUIRE(k1.primitives.size() == 4);
    auto s0 = std::get<SegmentPrim>(k1.primitives[0]);
    auto s1 = std::get<SegmentPrim>(k1.primitives[1]);
    CHECK(s0.a.x == 0.0);
    CHECK(s0.b.x == 3.0 / 8);
    CHECK(s1.a.x == 5.0 / 8);
    CHECK(s1.b.x == 1.0);
    CHECK(std::get<SegmentPrim>(k1.primitives[2]).a.y == 1.0);
    auto k2 = gen_fat_cantor(2);
    REQUIRE(k2.primitives.size() == 8);
    CHECK(std::get<SegmentPrim>(k2.primitives[0]).b.x == 5.0 / 32);
    for (int k = 0; k <= 12; ++k) {
        auto s = gen_fat_cantor(k);
        CHECK(s.primitives.size() == std::size_t(2) << k);
        double len = 0.0;
        for (std::size_t i = 0; i < s.primitives.size() / 2; ++i) {
            auto g = std::get<SegmentPrim>(s.primitives[i]);
            len += g.b.x - g.a.x;
        }
        double expect = 1.0;
        for (int j = 1; j <= k; ++j) expect -= std::ldexp(1.0, j - 1) * std::ldexp(1.0, -2 * j);
        CHECK(len == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK_THROWS(gen_fat_cantor(13));
    CHECK_THROWS(gen_fat_cantor(-1));
}

TEST_CASE("rectangle example") {
    auto r = gen_rectangle_example();
    auto first = std::get<SegmentPrim>(r.primitives[0]);
    CHECK(first.a == Point2{2, 0});
    CHECK(first.b == Point2{3, 0});
    auto box = r.bbox();
    CHECK(box.lo == Point2{2, 0});
    CHECK(box.hi == Point2{3, 1});
}

TEST_CASE("rational enumeration") {
    auto q = enumerate_rationals(7);
    std::vector<std::pair<int, int>> expect{{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}, {1, 5}, {2, 5}};
    REQUIRE(q.size() == expect.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(q[i].p == expect[i].first);
        CHECK(q[i].q == expect[i].second);
    }
}

TEST_CASE("jump integral") {
    const double eps = 0.25;
    auto zero = gen_jump_integral(0, eps);
    for (const auto& prim : zero.primitives) {
        auto p = std::get<PointPrim>(prim).p;
        CHECK(p.y == doctest::Approx(-eps));
    }
    CHECK(zero.primitives.size() == 257);

    // one term: alpha jumps by 1/2 at 1/2
    auto J = make_jump_integral(1);
    CHECK(J.alpha(0.5) - J.alpha_left(0.5) == 0.5);
    auto one = gen_jump_integral(1, eps);
    std::vector<Point2> at_half;
    for (const auto& prim : one.primitives) {
        auto p = std::get<PointPrim>(prim).p;
        // contributors of x(1/2) = (1/2, 0)
        if (std::abs(distance(p, {0.5, 0.0}) - eps) < 1e-12 && p.x >= 0.5 - 1e-12) at_half.push_back(p);
    }
    REQUIRE(at_half.size() >= 2);
    CHECK(distance(at_half.front(), at_half.back()) > 0.05);

    for (int m : {1, 3, 8, 20}) {
        auto JJ = make_jump_integral(m);
        auto spec = gen_jump_integral(m, eps);
        // every point is eps from some graph point (s, I(s)) with s on the node set
        std::vector<double> s_nodes;
        for (int i = 0; i <= 256; ++i) s_nodes.push_back(i / 256.0);
        s_nodes.insert(s_nodes.end(), JJ.q.begin(), JJ.q.end());
        for (const auto& prim : spec.primitives) {
            auto p = std::get<PointPrim>(prim).p;
            double best = INFINITY;
            for (double s : s_nodes) best = std::min(best, std::abs(distance(p, {s, JJ.integral(s)}) - eps));
            CHECK(best <= 1e-9);
        }
    }
}

TEST_CASE("jump integral is exact piecewise linear") {
    auto J = make_jump_integral(5);
    // trapezoid integration of alpha on a fine grid as an independent oracle
    const int N = 1 << 16;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        double s0 = double(i) / N, s1 = double(i + 1) / N;
        acc += 0.5 * (J.alpha(s0) + J.alpha_left(s1)) * (s1 - s0);
    }
    CHECK(J.integral(1.0) == doctest::Approx(acc).epsilon(1e-4));
}
