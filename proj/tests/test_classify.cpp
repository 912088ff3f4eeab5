#include "doctest.h"
#include "epsb/classify.hpp"

using namespace epsb;

namespace {

SetSpec points_spec(std::vector<Point2> pts) {
    SetSpec s;
    for (auto p : pts) s.primitives.push_back(PointPrim{p});
    return s;
}

const SingularityRecord* find_near(const Inventory& inv, Point2 p, double tol) {
    for (const auto& r : inv.records)
        if (distance(r.point, p) <= tol) return &r;
    return nullptr;
}

}  // namespace

TEST_CASE("single point: all S0") {
    auto inv = classify_boundary(points_spec({{0, 0}}), 1.0, 8);
    CHECK(inv.records.size() == 629);
    CHECK(inv.count(Label::S0) == int(inv.records.size()));
    for (int l = 1; l < kNumLabels; ++l) CHECK(inv.counts[std::size_t(l)] == 0);
    CHECK(verify_partition(inv).ok);
}

TEST_CASE("two-disk wedge: two S1 records") {
    auto inv = classify_boundary(points_spec({{-1, 0}, {1, 0}}), 1.25, 8);
    CHECK(inv.count(Label::S1) == 2);
    CHECK(inv.count(Label::S0) == int(inv.records.size()) - 2);
    for (double y : {0.75, -0.75}) {
        auto* r = find_near(inv, {0, y}, 1e-8);
        REQUIRE(r);
        CHECK(r->label == Label::S1);
        REQUIRE(r->angle);
        CHECK(std::abs(*r->angle - 1.2870022176) <= 1e-6);
        CHECK(r->contributors.size() == 2);
    }
    CHECK(verify_partition(inv).ok);
}

TEST_CASE("tangent disks: S3 with strictly negative alpha on both sides") {
    auto inv = classify_boundary(points_spec({{-1, 0}, {1, 0}}), 1.0, 8);
    auto* r = find_near(inv, {0, 0}, 1e-9);
    REQUIRE(r);
    CHECK(r->label == Label::S3);
    REQUIRE(r->directions.size() == 2);
    for (const auto& d : r->directions) {
        CHECK(d.verdict == Verdict::sharp);
        double mx = -INFINITY;
        for (const auto& p : d.profile)
            if (p.s > 0) mx = std::max(mx, p.alpha);
        CHECK(mx <= -1e-6);
    }
    CHECK(inv.count(Label::S3) == 1);
    CHECK(verify_partition(inv).ok);
}

TEST_CASE("rectangle example: interior-limit points are pruned") {
    auto inv = classify_boundary(gen_rectangle_example(), 0.5, 8);
    for (const auto& r : inv.records) {
        bool on_segment = r.point.x > 2.0 + 1e-9 && r.point.x < 3.0 - 1e-9 && std::abs(r.point.y - 0.5) < 0.05;
        CHECK_MESSAGE(!on_segment, "record at " << r.point.x << "," << r.point.y << " " << std::string(to_string(r.label)));
    }
    CHECK(inv.pruned > 0);
    auto* right = find_near(inv, {3, 0.5}, 1e-9);
    REQUIRE(right);
    CHECK(right->label == Label::S2);
    CHECK(right->arc.kind == ArcKind::singleton);
    CHECK(angle_between(right->arc.a, UnitDir::make(1, 0)) <= 1e-12);
    REQUIRE(right->contributors.size() == 2);
    CHECK(right->contributors[0] == Point2{3, 0});
    CHECK(right->contributors[1] == Point2{3, 1});
    auto* left = find_near(inv, {2, 0.5}, 1e-9);
    REQUIRE(left);
    CHECK(left->label == Label::S2);
    CHECK(angle_between(left->arc.a, UnitDir::make(-1, 0)) <= 1e-12);
    CHECK(inv.count(Label::S2) == 2);
    CHECK(verify_partition(inv).ok);
}

TEST_CASE("verify_partition negative and vacuous cases") {
    Inventory empty;
    CHECK(verify_partition(empty).ok);

    Inventory bad;
    SingularityRecord r;
    r.label = Label::S2;
    r.arc = geodesic_arc(UnitDir::make(1, 0), UnitDir::make(0, 1));
    bad.records.push_back(r);
    bad.recount();
    auto rep = verify_partition(bad);
    CHECK(!rep.ok);
    REQUIRE(!rep.violations.empty());
    CHECK(rep.violations[0].find("kind mismatch") != std::string::npos);

    Inventory dup;
    SingularityRecord s;
    s.label = Label::S0;
    s.arc = {UnitDir::make(1, 0), UnitDir::make(-1, 0), ArcKind::half_circle};
    s.contributors = {{0, -1}};
    dup.records = {s, s};
    dup.recount();
    CHECK(!verify_partition(dup).ok);

    Inventory miscount = dup;
    miscount.records.pop_back();
    CHECK(!verify_partition(miscount).ok);
}

TEST_CASE("partition holds on random clouds") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto spec = gen_random_cloud(seed, 30, 0.0, 3.0);
        double eps = 0.3 + 0.2 * double(seed);
        auto inv = classify_boundary(spec, eps, min_level(eps) + 4, {0.02});
        auto rep = verify_partition(inv);
        CHECK(rep.ok);
        for (const auto& v : rep.violations) MESSAGE(v);
        // random point clouds have only wedge vertices
        CHECK(inv.count(Label::S1) > 0);
        CHECK(inv.count(Label::Unresolved) == 0);
    }
}

TEST_CASE("counts are stable across levels for polygonal sets") {
    auto rep = count_stability(gen_rectangle_example(), 0.5, 6, 8);
    CHECK(rep.stable());
    CHECK(rep.n_stable == 6);
    SetSpec seg;
    seg.primitives.push_back(SegmentPrim{{0, 0}, {1, 0}});
    auto rs = count_stability(seg, 0.5, 6, 8);
    CHECK(rs.stable());
    CHECK(rs.counts.back()[std::size_t(Label::S1)] == 0);
}

TEST_CASE("label names round-trip") {
    for (int i = 0; i < kNumLabels; ++i) CHECK(label_from_string(to_string(Label(i))) == Label(i));
    CHECK_THROWS(label_from_string("S9"));
    CHECK(is_chain(Label::S7));
    CHECK(!is_chain(Label::S3));
}
