#include "epsb/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "epsb/parallel.hpp"
#include "epsb/spatial_hash.hpp"

namespace epsb {

namespace {

constexpr double kWedgeTol = 1e-3;

const char* const kLabelNames[kNumLabels] = {"S0", "S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "Unresolved"};

double spec_distance(const SetSpec& spec, Point2 p) {
    double d = INFINITY;
    for (const auto& prim : spec.primitives) d = std::min(d, primitive_distance(prim, p));
    return d;
}

// unit perpendicular to v on the side of xi
Point2 perp_toward(Point2 v, UnitDir xi) {
    Point2 p{-v.y, v.x};
    p = p * (1.0 / norm(p));
    return dot(p, xi.vec()) < 0.0 ? -p : p;
}

DirectionEvidence direction_evidence(const ClassifyContext& cc, Point2 x, UnitDir xi, Point2 y1, Point2 y2) {
    const auto& ctx = *cc.approx;
    const double eps = cc.eps;
    LocalRepEval e1(ctx, x, {UnitDir::normalized(perp_toward(y1 - x, xi)), y1});
    LocalRepEval e2(ctx, x, {UnitDir::normalized(perp_toward(y2 - x, xi)), y2});
    auto alpha = [&](double s) {
        LocalSample a = e1.at(s), b = e2.at(s);
        return (a.defined() && b.defined()) ? a.f + b.f : -INFINITY;
    };

    DirectionEvidence ev;
    ev.xi = xi;
    const auto grid = uniform_grid(eps, cc.opt.num_samples);
    for (double s : grid) ev.profile.push_back({s, alpha(s)});

    const double tol = cc.alpha_tol();
    const double h = std::ldexp(1.0, -cc.level);
    const double s_c = h;
    const double r = cc.inspection_radius();
    const double s_max = std::min(r, 0.5 * eps);

    // h/4 steps up to 4h resolve the run at s ~ 0 below the coarse grid step
    std::vector<AlphaPoint> seq{{0.0, ev.profile[0].alpha}};
    for (int j = 1; j <= 16 && j * 0.25 * h <= s_max; ++j) seq.push_back({j * 0.25 * h, alpha(j * 0.25 * h)});
    for (const auto& p : ev.profile)
        if (p.s > seq.back().s && p.s <= s_max) seq.push_back(p);

    ev.alpha_max = -INFINITY;
    double init_end = 0.0;  // end of the run of touches starting at s = 0
    bool initial = true;
    std::size_t i = 1;
    const std::size_t m = seq.size();
    while (i < m) {
        const auto& p = seq[i];
        if (p.s > s_c) ev.alpha_max = std::max(ev.alpha_max, p.alpha);
        if (p.alpha < -tol) {
            initial = false;
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < m && seq[j + 1].alpha >= -tol) {
            ++j;
            if (seq[j].s > s_c) ev.alpha_max = std::max(ev.alpha_max, seq[j].alpha);
        }
        if (initial) {
            init_end = seq[j].s;
            initial = false;
        } else if (seq[j].s > s_c) {
            // locate the top of the run on an 8x finer local grid
            double lo = seq[i - 1].s;
            double hi = seq[std::min(j + 1, m - 1)].s;
            double best_s = seq[i].s, best = -INFINITY;
            const int k = 8 * int(j - i + 2);
            for (int q = 0; q <= k; ++q) {
                double sq = lo + (hi - lo) * q / k;
                double a = alpha(sq);
                if (a > best) {
                    best = a;
                    best_s = sq;
                }
            }
            ev.touches.push_back(best_s);
        }
        i = j + 1;
    }

    // alpha ~ 0 from the start: both sides of the boundary coincide along xi up to init_end
    const double t = std::min(cc.probe_radius(), 0.5 * init_end);
    ev.probe_covered = spec_distance(*cc.spec, x + xi.vec() * (init_end > s_c ? t : cc.probe_radius())) <= eps;
    ev.flat_until = init_end;
    if (init_end > s_c) ev.verdict = ev.probe_covered ? Verdict::collapsed : Verdict::unresolved;
    else if (ev.touches.empty()) ev.verdict = Verdict::sharp;
    else if (ev.touches.size() >= 2 && ev.touches.front() < 0.25 * r) ev.verdict = Verdict::chain;
    else ev.verdict = Verdict::unresolved;
    return ev;
}

std::pair<Point2, Point2> most_opposing(Point2 x, const std::vector<Point2>& g) {
    std::pair<Point2, Point2> best{g[0], g[1]};
    double b = INFINITY;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            double v = norm((g[i] - x) + (g[j] - x));
            if (v < b) {
                b = v;
                best = {g[i], g[j]};
            }
        }
    return best;
}

GeodesicArc singleton_arc(UnitDir u) { return {u, u, ArcKind::singleton}; }

}  // namespace

const char* to_string(Label l) { return kLabelNames[int(l)]; }

Label label_from_string(const std::string& s) {
    for (int i = 0; i < kNumLabels; ++i)
        if (s == kLabelNames[i]) return Label(i);
    throw Error("unknown label: " + s);
}

bool is_chain(Label l) { return l == Label::S6 || l == Label::S7 || l == Label::S8; }

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::sharp: return "sharp";
        case Verdict::chain: return "chain";
        case Verdict::collapsed: return "collapsed";
        case Verdict::unresolved: return "unresolved";
    }
    return "?";
}

double ClassifyContext::cell_diag() const { return std::sqrt(2.0) * std::ldexp(1.0, -level); }

double ClassifyContext::alpha_tol() const {
    const double h = std::ldexp(1.0, -level);
    return 1.1 * h * h / (2.0 * eps * eps);
}

std::optional<SingularityRecord> classify_point(const ClassifyContext& cc, const Candidate& c) {
    const double eps = cc.eps;
    const Point2 x = c.x;
    SingularityRecord rec;
    rec.point = x;
    rec.vertex = c.vertex;
    rec.generators = c.generators;
    rec.level = cc.level;
    rec.inspection_radius = cc.inspection_radius();
    rec.contributors = distance_and_projection(*cc.spec, x).argmin;
    const double rho = cc.probe_radius();
    auto covered = [&](UnitDir u) { return spec_distance(*cc.spec, x + u.vec() * rho) <= eps; };

    bool unp = !c.vertex || rec.contributors.size() < 2;
    OutwardArc oa;
    if (!unp) {
        ContributorSet g;
        g.point = x;
        g.eps = eps;
        g.members = c.generators;
        try {
            oa = outward_arc(x, g, 1e-7);
        } catch (const Error&) {
            // generators surround x: vertices from disks above and below merged
            // within the vertex tolerance, the sliver between them is below resolution
            return std::nullopt;
        }
        if (oa.arc.kind == ArcKind::proper_arc && oa.arc.width() >= kPi - kWedgeTol) unp = true;
    }

    if (unp) {
        Point2 nsum{0, 0};
        for (auto y : c.generators) nsum = nsum + (x - y) * (1.0 / norm(x - y));
        UnitDir nrm = UnitDir::normalized(nsum);
        bool all_in = true;
        for (double deg : {-75.0, -40.0, 0.0, 40.0, 75.0})
            if (!covered(nrm.rotated(deg * kPi / 180.0))) all_in = false;
        if (all_in) return std::nullopt;
        rec.arc = {nrm.rotated(-0.5 * kPi), nrm.rotated(0.5 * kPi), ArcKind::half_circle};
        // a tie that the arrangement resolved as smooth: no honest label at this level
        rec.label = rec.contributors.size() == 1 ? Label::S0 : Label::Unresolved;
        return rec;
    }

    std::vector<UnitDir> probes;
    if (oa.arc.kind == ArcKind::proper_arc) {
        for (double t : {0.05, 0.25, 0.5, 0.75, 0.95}) probes.push_back(oa.arc.a.rotated(t * oa.arc.width()));
    } else {
        probes.push_back(oa.xi1);
        if (oa.arc.kind == ArcKind::antipodal_pair) probes.push_back(oa.xi2);
    }
    if (std::all_of(probes.begin(), probes.end(), covered)) return std::nullopt;

    if (oa.arc.kind == ArcKind::proper_arc && oa.arc.width() > kWedgeTol) {
        rec.label = Label::S1;
        rec.arc = oa.arc;
        rec.angle = oa.arc.width();
        return rec;
    }

    auto [y1, y2] = most_opposing(x, c.generators);
    if (oa.arc.kind != ArcKind::antipodal_pair) {
        UnitDir xi = oa.arc.kind == ArcKind::proper_arc ? oa.arc.midpoint() : oa.xi1;
        auto ev = direction_evidence(cc, x, xi, y1, y2);
        rec.arc = singleton_arc(xi);
        Verdict v = ev.verdict;
        rec.directions.push_back(std::move(ev));
        switch (v) {
            case Verdict::sharp: rec.label = Label::S2; break;
            case Verdict::chain: rec.label = Label::S6; break;
            case Verdict::collapsed: return std::nullopt;
            case Verdict::unresolved: rec.label = Label::Unresolved; break;
        }
        return rec;
    }

    rec.directions.push_back(direction_evidence(cc, x, oa.xi1, y1, y2));
    rec.directions.push_back(direction_evidence(cc, x, oa.xi2, y1, y2));
    const Verdict v1 = rec.directions[0].verdict, v2 = rec.directions[1].verdict;
    const bool c1 = v1 == Verdict::collapsed, c2 = v2 == Verdict::collapsed;
    if (c1 && c2) return std::nullopt;
    if (c1 || c2) {
        // the collapsed side is interior to the limit set; one outward direction survives
        const auto& live = c1 ? rec.directions[1] : rec.directions[0];
        rec.arc = singleton_arc(live.xi);
        rec.label = live.verdict == Verdict::sharp   ? Label::S2
                    : live.verdict == Verdict::chain ? Label::S6
                                                     : Label::Unresolved;
        return rec;
    }
    rec.arc = oa.arc;
    const bool s1 = v1 == Verdict::sharp, s2 = v2 == Verdict::sharp;
    const bool h1 = v1 == Verdict::chain, h2 = v2 == Verdict::chain;
    if (s1 && s2) rec.label = Label::S3;
    else if (h1 && h2) rec.label = Label::S7;
    else if ((s1 && h2) || (h1 && s2)) rec.label = Label::S8;
    else rec.label = Label::Unresolved;
    return rec;
}

void resolve_shallow(std::vector<SingularityRecord>& recs, double radius) {
    std::vector<Point2> multi;
    for (const auto& r : recs)
        if (r.contributors.size() >= 2 && r.label != Label::S0 && r.label != Label::S4 && r.label != Label::S5)
            multi.push_back(r.point);
    if (multi.empty()) return;
    PointGrid grid(multi, radius);
    for (auto& r : recs) {
        if (r.label != Label::S0) continue;
        const Point2 t = r.arc.a.vec();  // a tangent of the smooth side
        int n[2] = {0, 0};
        double inner[2] = {INFINITY, INFINITY};
        grid.for_each_within(r.point, radius, [&](std::size_t k) {
            Point2 v = multi[k] - r.point;
            double d = norm(v);
            if (d == 0.0) return;
            int side = dot(v, t) >= 0.0 ? 0 : 1;
            ++n[side];
            inner[side] = std::min(inner[side], d);
        });
        r.unp_left = n[1];
        r.unp_right = n[0];
        bool a0 = n[0] >= 2 && inner[0] < 0.25 * radius;
        bool a1 = n[1] >= 2 && inner[1] < 0.25 * radius;
        if (a0 && a1) r.label = Label::S5;
        else if (a0 || a1) r.label = Label::S4;
    }
}

void Inventory::recount() {
    counts.fill(0);
    for (const auto& r : records) ++counts[std::size_t(r.label)];
}

Inventory classify_boundary(const SetSpec& spec, double eps, int n, const ClassifyOptions& opt) {
    if (!(opt.spacing > 0.0)) throw Error("spacing must be positive");
    if (opt.num_samples < 2) throw Error("need at least 2 samples");
    const ApproxSet D = finite_approximating_set(spec, n, eps);
    const ApproxContext ctx(D.points, eps, n);
    ArrangementOptions aopt;
    aopt.threads = opt.threads;
    const BoundaryArcSet bas = disk_union_boundary(ctx.points, eps, aopt);

    std::vector<Candidate> cands;
    for (const auto& v : bas.vertices) {
        Candidate c{v.p, true, {}};
        for (auto k : v.centers) c.generators.push_back(bas.centers[k]);
        cands.push_back(std::move(c));
    }
    for (const auto& s : sample_boundary(bas, opt.spacing)) {
        const auto& arc = bas.arcs[s.arc_id].arc;
        if (!s.closed && (s.position == arc.start() || s.position == arc.end())) continue;
        cands.push_back({s.position, false, {s.generating_center}});
    }

    ClassifyContext cc;
    cc.spec = &spec;
    cc.approx = &ctx;
    cc.eps = eps;
    cc.level = n;
    cc.opt = opt;
    std::vector<std::optional<SingularityRecord>> out(cands.size());
    parallel_for(cands.size(), resolve_threads(opt.threads), [&](std::size_t i) { out[i] = classify_point(cc, cands[i]); });

    Inventory inv;
    inv.eps = eps;
    inv.level = n;
    inv.spacing = opt.spacing;
    inv.candidates = cands.size();
    for (auto& r : out) {
        if (r) inv.records.push_back(std::move(*r));
        else ++inv.pruned;
    }
    resolve_shallow(inv.records, cc.inspection_radius());
    inv.recount();
    return inv;
}

PartitionReport verify_partition(const Inventory& inv) {
    PartitionReport rep;
    auto fail = [&](std::size_t i, const std::string& what) {
        rep.ok = false;
        rep.violations.push_back("record " + std::to_string(i) + ": " + what);
    };
    std::array<int, kNumLabels> counts{};
    for (std::size_t i = 0; i < inv.records.size(); ++i) {
        const auto& r = inv.records[i];
        const int l = int(r.label);
        if (l < 0 || l >= kNumLabels) {
            fail(i, "invalid label");
            continue;
        }
        ++counts[std::size_t(l)];
        const ArcKind k = r.arc.kind;
        switch (r.label) {
            case Label::S1:
                if (k != ArcKind::proper_arc) fail(i, "kind mismatch");
                else if (!r.angle || !(*r.angle > kWedgeTol && *r.angle < kPi - kWedgeTol))
                    fail(i, "wedge angle out of range");
                break;
            case Label::S2:
            case Label::S6:
                if (k != ArcKind::singleton) fail(i, "kind mismatch");
                break;
            case Label::S3:
            case Label::S7:
            case Label::S8:
                if (k != ArcKind::antipodal_pair) fail(i, "kind mismatch");
                break;
            case Label::S0:
            case Label::S4:
            case Label::S5:
                if (k != ArcKind::half_circle) fail(i, "kind mismatch");
                else if (r.contributors.size() != 1) fail(i, "multiplicity mismatch");
                break;
            case Label::Unresolved: break;
        }
    }
    if (counts != inv.counts) {
        rep.ok = false;
        rep.violations.push_back("counts do not match records");
    }
    // one label per point
    std::vector<std::size_t> idx(inv.records.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(inv.records[a].point, inv.records[b].point); });
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (inv.records[idx[k]].point == inv.records[idx[k - 1]].point) fail(idx[k], "duplicate point");
    return rep;
}

StabilityReport count_stability(const SetSpec& spec, double eps, int n_lo, int n_hi, const ClassifyOptions& opt) {
    if (n_lo >= n_hi) throw Error("n_lo must be below n_hi");
    StabilityReport rep;
    for (int n = n_lo; n <= n_hi; ++n) {
        rep.levels.push_back(n);
        rep.counts.push_back(classify_boundary(spec, eps, n, opt).counts);
    }
    const Label tracked[] = {Label::S1, Label::S2, Label::S3, Label::S4, Label::S6, Label::S8};
    auto same = [&](std::size_t a, std::size_t b) {
        for (Label l : tracked)
            if (rep.counts[a][std::size_t(l)] != rep.counts[b][std::size_t(l)]) return false;
        return true;
    };
    std::size_t k = rep.counts.size() - 1;
    while (k > 0 && same(k - 1, k)) --k;
    rep.n_stable = k == rep.counts.size() - 1 ? -1 : rep.levels[k];
    return rep;
}

}  // namespace epsb
