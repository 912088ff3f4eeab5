#include "epsb/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace epsb {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

Json pt(Point2 p) { return Json::array({p.x, p.y}); }
Json dir(UnitDir u) { return Json::array({u.ux(), u.uy()}); }

Point2 to_pt(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
UnitDir to_dir(const Json& j) { return UnitDir::make(j.at(0).get<double>(), j.at(1).get<double>()); }

// -inf (undefined) has no JSON spelling
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
double from_num(const Json& j) { return j.is_null() ? -INFINITY : j.get<double>(); }

ArcKind kind_from_string(const std::string& s) {
    for (auto k : {ArcKind::proper_arc, ArcKind::singleton, ArcKind::antipodal_pair, ArcKind::half_circle,
                   ArcKind::full_circle})
        if (s == to_string(k)) return k;
    throw Error("unknown arc kind '" + s + "'");
}

Verdict verdict_from_string(const std::string& s) {
    for (auto v : {Verdict::sharp, Verdict::chain, Verdict::collapsed, Verdict::unresolved})
        if (s == to_string(v)) return v;
    throw Error("unknown verdict '" + s + "'");
}

Json arc_json(const GeodesicArc& a) { return {{"kind", to_string(a.kind)}, {"a", dir(a.a)}, {"b", dir(a.b)}}; }

GeodesicArc arc_from(const Json& j) {
    GeodesicArc a;
    a.kind = kind_from_string(j.at("kind").get<std::string>());
    a.a = to_dir(j.at("a"));
    a.b = to_dir(j.at("b"));
    return a;
}

}  // namespace

SetSpec spec_from_json(const Json& j) {
    SetSpec s;
    try {
        if (!j.is_object()) throw Error("invalid spec: expected an object");
        s.label = j.value("label", "");
        for (const auto& p : j.at("primitives")) {
            auto type = p.at("type").get<std::string>();
            if (type == "point")
                s.primitives.push_back(PointPrim{{p.at("x").get<double>(), p.at("y").get<double>()}});
            else if (type == "segment")
                s.primitives.push_back(SegmentPrim{{p.at("ax").get<double>(), p.at("ay").get<double>()},
                                                   {p.at("bx").get<double>(), p.at("by").get<double>()}});
            else
                throw Error("invalid spec: unknown primitive type '" + type + "'");
        }
    } catch (const Json::exception& e) {
        throw Error(std::string("invalid spec: ") + e.what());
    }
    s.validate();
    return s;
}

Json spec_to_json(const SetSpec& spec) {
    Json prims = Json::array();
    for (const auto& p : spec.primitives) {
        if (auto* q = std::get_if<PointPrim>(&p))
            prims.push_back({{"type", "point"}, {"x", q->p.x}, {"y", q->p.y}});
        else {
            const auto& s = std::get<SegmentPrim>(p);
            prims.push_back({{"type", "segment"}, {"ax", s.a.x}, {"ay", s.a.y}, {"bx", s.b.x}, {"by", s.b.y}});
        }
    }
    return {{"label", spec.label}, {"primitives", prims}};
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

SetSpec read_spec_file(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text(path));
    } catch (const Json::exception& e) {
        throw Error(std::string("invalid spec: ") + e.what());
    }
    return spec_from_json(j);
}

Json record_to_json(const SingularityRecord& r, bool profiles) {
    Json j;
    j["point"] = pt(r.point);
    j["label"] = to_string(r.label);
    j["vertex"] = r.vertex;
    j["arc"] = arc_json(r.arc);
    j["angle"] = r.angle ? Json(*r.angle) : Json(nullptr);
    Json c = Json::array(), g = Json::array();
    for (auto p : r.contributors) c.push_back(pt(p));
    for (auto p : r.generators) g.push_back(pt(p));
    j["contributors"] = c;
    j["generators"] = g;
    Json dirs = Json::array();
    for (const auto& d : r.directions) {
        Json e{{"xi", dir(d.xi)},
               {"verdict", to_string(d.verdict)},
               {"alpha_max", num(d.alpha_max)},
               {"flat_until", d.flat_until},
               {"touches", d.touches},
               {"probe_covered", d.probe_covered}};
        if (profiles) {
            Json pr = Json::array();
            for (const auto& a : d.profile) pr.push_back(Json::array({a.s, num(a.alpha)}));
            e["profile"] = pr;
        }
        dirs.push_back(e);
    }
    j["directions"] = dirs;
    j["unp_left"] = r.unp_left;
    j["unp_right"] = r.unp_right;
    j["inspection_radius"] = r.inspection_radius;
    j["level"] = r.level;
    return j;
}

SingularityRecord record_from_json(const Json& j) {
    SingularityRecord r;
    r.point = to_pt(j.at("point"));
    r.label = label_from_string(j.at("label").get<std::string>());
    r.vertex = j.value("vertex", false);
    r.arc = arc_from(j.at("arc"));
    if (j.contains("angle") && !j.at("angle").is_null()) r.angle = j.at("angle").get<double>();
    for (const auto& p : j.value("contributors", Json::array())) r.contributors.push_back(to_pt(p));
    for (const auto& p : j.value("generators", Json::array())) r.generators.push_back(to_pt(p));
    for (const auto& e : j.value("directions", Json::array())) {
        DirectionEvidence d;
        d.xi = to_dir(e.at("xi"));
        d.verdict = verdict_from_string(e.at("verdict").get<std::string>());
        d.alpha_max = from_num(e.at("alpha_max"));
        d.flat_until = e.value("flat_until", 0.0);
        d.touches = e.value("touches", std::vector<double>{});
        d.probe_covered = e.value("probe_covered", false);
        if (e.contains("profile"))
            for (const auto& a : e.at("profile")) d.profile.push_back({a.at(0).get<double>(), from_num(a.at(1))});
        r.directions.push_back(std::move(d));
    }
    r.unp_left = j.value("unp_left", 0);
    r.unp_right = j.value("unp_right", 0);
    r.inspection_radius = j.value("inspection_radius", 0.0);
    r.level = j.value("level", 0);
    return r;
}

Json inventory_to_json(const Inventory& inv, bool profiles) {
    Json counts;
    for (int l = 0; l < kNumLabels; ++l) counts[to_string(Label(l))] = inv.counts[std::size_t(l)];
    Json recs = Json::array();
    for (const auto& r : inv.records) recs.push_back(record_to_json(r, profiles));
    return {{"schema", "epsb.inventory"},
            {"schema_version", kInventorySchema},
            {"eps", inv.eps},
            {"level", inv.level},
            {"spacing", inv.spacing},
            {"candidates", inv.candidates},
            {"pruned", inv.pruned},
            {"counts", counts},
            {"records", recs}};
}

Inventory inventory_from_json(const Json& j) {
    try {
        if (j.value("schema", "") != "epsb.inventory") throw Error("not an inventory");
        int v = j.at("schema_version").get<int>();
        if (v != kInventorySchema) throw Error("unsupported inventory schema_version " + std::to_string(v));
        Inventory inv;
        inv.eps = j.at("eps").get<double>();
        inv.level = j.at("level").get<int>();
        inv.spacing = j.at("spacing").get<double>();
        inv.candidates = j.value("candidates", std::size_t(0));
        inv.pruned = j.value("pruned", std::size_t(0));
        for (const auto& r : j.at("records")) inv.records.push_back(record_from_json(r));
        const auto& c = j.at("counts");
        for (int l = 0; l < kNumLabels; ++l) inv.counts[std::size_t(l)] = c.value(to_string(Label(l)), 0);
        return inv;
    } catch (const Json::exception& e) {
        throw Error(std::string("invalid inventory: ") + e.what());
    }
}

std::string counts_csv(const Inventory& inv) {
    std::string out = "label,count\n";
    for (int l = 0; l < kNumLabels; ++l)
        out += std::string(to_string(Label(l))) + "," + std::to_string(inv.counts[std::size_t(l)]) + "\n";
    return out;
}

std::string arcs_csv(const BoundaryArcSet& bas) {
    std::string out = "arc_id,center_x,center_y,radius,theta_start,theta_end,start_vertex,end_vertex\n";
    for (std::size_t i = 0; i < bas.arcs.size(); ++i) {
        const auto& a = bas.arcs[i];
        out += std::to_string(i) + "," + fmt17(a.arc.center.x) + "," + fmt17(a.arc.center.y) + "," +
               fmt17(a.arc.radius) + "," + fmt17(a.arc.theta_start) + "," + fmt17(a.arc.theta_end) + "," +
               std::to_string(a.start_vertex) + "," + std::to_string(a.end_vertex) + "\n";
    }
    return out;
}

std::string vertices_csv(const BoundaryArcSet& bas) {
    std::string out = "vertex_id,x,y,multiplicity\n";
    for (std::size_t i = 0; i < bas.vertices.size(); ++i) {
        const auto& v = bas.vertices[i];
        out += std::to_string(i) + "," + fmt17(v.p.x) + "," + fmt17(v.p.y) + "," + std::to_string(v.centers.size()) +
               "\n";
    }
    return out;
}

std::string samples_csv(const std::vector<BoundarySample>& samples) {
    std::string out = "x,y,center_x,center_y,arc_id,s\n";
    for (const auto& s : samples)
        out += fmt17(s.position.x) + "," + fmt17(s.position.y) + "," + fmt17(s.generating_center.x) + "," +
               fmt17(s.generating_center.y) + "," + std::to_string(s.arc_id) + "," + fmt17(s.s) + "\n";
    return out;
}

const char* label_color(Label l) {
    static const char* const c[kNumLabels] = {"#9e9e9e", "#d62728", "#ff7f0e", "#8c564b", "#2ca02c",
                                               "#17becf", "#1f77b4", "#9467bd", "#e377c2", "#000000"};
    return c[int(l)];
}

// Coordinates are written in the math frame (y up). A single group transform
// scale(s, -s) flips them for display, so arc sweep flag 1 stays counter-clockwise.
std::string boundary_svg(const BoundaryArcSet& bas, const std::vector<SvgMark>& marks) {
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const auto& c : bas.centers) {
        x0 = std::min(x0, c.x - bas.eps);
        y0 = std::min(y0, c.y - bas.eps);
        x1 = std::max(x1, c.x + bas.eps);
        y1 = std::max(y1, c.y + bas.eps);
    }
    if (!std::isfinite(x0)) x0 = y0 = 0, x1 = y1 = 1;
    const double size = 800.0, margin = 10.0;
    const double scale = (size - 2 * margin) / std::max({x1 - x0, y1 - y0, 1e-12});
    const double w = (x1 - x0) * scale + 2 * margin, h = (y1 - y0) * scale + 2 * margin;
    std::ostringstream os;
    os.precision(17);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<!-- math coordinates, y up; the group transform flips y for display -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
       << w << " " << h << "\">\n";
    os << "<g transform=\"translate(" << margin - x0 * scale << "," << margin + y1 * scale << ") scale(" << scale
       << "," << -scale << ")\">\n";
    for (std::size_t i = 0; i < bas.arcs.size(); ++i) {
        const auto& a = bas.arcs[i].arc;
        os << "<path id=\"arc" << i << "\" fill=\"none\" stroke=\"#222\" stroke-width=\"1\" "
           << "vector-effect=\"non-scaling-stroke\" d=\"";
        Point2 s = a.start();
        os << "M " << s.x << " " << s.y;
        // a full circle needs two pieces
        int pieces = a.is_full() ? 2 : 1;
        for (int k = 1; k <= pieces; ++k) {
            Point2 e = a.point_at(a.theta_start + a.sweep() * k / pieces);
            int large = a.sweep() / pieces > kPi ? 1 : 0;
            os << " A " << a.radius << " " << a.radius << " 0 " << large << " 1 " << e.x << " " << e.y;
        }
        os << "\"/>\n";
    }
    const double r = 3.0 / scale;
    for (const auto& m : marks) {
        os << "<circle cx=\"" << m.p.x << "\" cy=\"" << m.p.y << "\" r=\"" << r << "\" fill=\"" << m.color << "\">";
        if (!m.title.empty()) os << "<title>" << m.title << "</title>";
        os << "</circle>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string components_pgm(const ComponentMap& map) {
    int maxval = std::max<int>(1, int(map.components.size()));
    if (maxval > 65535) throw Error("too many components for PGM");
    std::ostringstream os;
    os << "P2\n" << map.nx << " " << map.ny << "\n" << maxval << "\n";
    for (std::int64_t iy = map.ny - 1; iy >= 0; --iy) {
        for (std::int64_t ix = 0; ix < map.nx; ++ix) {
            if (ix) os << ' ';
            os << map.label[std::size_t(iy * map.nx + ix)] + 1;
        }
        os << '\n';
    }
    return os.str();
}

Json components_to_json(const ComponentMap& map) {
    Json comps = Json::array();
    for (const auto& c : map.components)
        comps.push_back({{"id", c.id},
                         {"bounded", c.bounded},
                         {"cells", c.cells.size()},
                         {"bbox", Json::array({pt(c.bbox.lo), pt(c.bbox.hi)})},
                         {"diameter", c.diameter},
                         {"boundary_arc_ids", c.boundary_arc_ids}});
    return {{"h", map.h},
            {"eps", map.eps},
            {"origin", pt(map.lo)},
            {"nx", map.nx},
            {"ny", map.ny},
            {"components", map.components.size()},
            {"bounded", map.bounded_count()},
            {"list", comps}};
}

Json chain_evidence_to_json(const ChainEvidence& ev) {
    Json pins = Json::array();
    for (auto p : ev.pinch_points) pins.push_back(pt(p));
    return {{"target", pt(ev.target)},
            {"component_ids", ev.component_ids},
            {"hausdorff_seq", ev.hausdorff_seq},
            {"error_bar", ev.error_bar},
            {"pinch_points", pins},
            {"adjacent_component", ev.adjacent_component ? Json(*ev.adjacent_component) : Json(nullptr)}};
}

Json check_to_json(const CheckResult& c) {
    return {{"name", c.name}, {"ok", c.ok},           {"checked", c.checked},
            {"skipped", c.skipped}, {"worst", num(c.worst)}, {"failures", c.failures}};
}

Json analysis_to_json(const SetSpec& spec, const ApproxContext& ctx, Point2 x, double tol, int num_samples) {
    Json j;
    j["point"] = pt(x);
    auto pi = contributors(spec, x, ctx.eps, tol);
    auto oa = outward_arc(x, pi);
    flag_extremal(pi, oa);
    Json mem = Json::array();
    for (std::size_t i = 0; i < pi.members.size(); ++i)
        mem.push_back({{"y", pt(pi.members[i])}, {"extremal", bool(pi.extremal[i])}});
    j["contributors"] = mem;
    j["outward_arc"] = arc_json(oa.arc);
    j["xi1"] = dir(oa.xi1);
    j["xi2"] = dir(oa.xi2);
    Json pairs = Json::array();
    for (const auto& p : extremal_pairs(x, pi, oa)) {
        auto rep = local_rep(ctx, x, p, num_samples);
        Json s = Json::array();
        for (const auto& q : rep.samples) s.push_back(Json::array({q.s, num(q.f)}));
        pairs.push_back({{"xi", dir(p.xi)}, {"y", pt(p.y)}, {"radius", rep.radius}, {"f", s}});
    }
    j["extremal_pairs"] = pairs;
    return j;
}

}  // namespace epsb
