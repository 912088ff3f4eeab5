// epsb: boundary, analysis, classification and complement topology of
// eps-neighbourhoods of planar compact sets.
//
// exit codes: 0 ok, 1 invariant failure, 2 usage or input error

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"

#include "epsb/analysis.hpp"
#include "epsb/arrangement.hpp"
#include "epsb/classify.hpp"
#include "epsb/invariants.hpp"
#include "epsb/io.hpp"
#include "epsb/parallel.hpp"
#include "epsb/topology.hpp"

namespace fs = std::filesystem;
using namespace epsb;

namespace {

struct RunConfig {
    std::string input;
    std::string gen;
    int depth = 3;
    std::uint64_t seed = 1;
    int count = 20;
    int terms = 8;
    double eps = 1.0;
    int level = -1;  // -1: max(8, threshold + 1)
    double spacing = 0.01;
    double raster_h = 0.0;  // 0: eps / 64
    std::string out_dir = ".";
    std::vector<std::string> emit{"json", "csv", "svg", "pgm"};
    unsigned threads = 0;
    std::vector<double> anchor;
    std::vector<double> target;
    std::vector<double> points;
    std::string replay;
    bool profiles = false;
    std::string out;

    bool emits(const std::string& k) const { return std::find(emit.begin(), emit.end(), k) != emit.end(); }
};

struct UsageError : Error {
    using Error::Error;
};

SetSpec generate(const RunConfig& c) {
    const std::string& g = c.gen;
    SetSpec s;
    if (g == "point") {
        s.label = "point";
        s.primitives.push_back(PointPrim{{0, 0}});
    } else if (g == "point-pair") {
        s.label = "point_pair";
        s.primitives = {PointPrim{{-1, 0}}, PointPrim{{1, 0}}};
    } else if (g == "segment") {
        s.label = "segment";
        s.primitives.push_back(SegmentPrim{{0, 0}, {1, 0}});
    } else if (g == "rectangle") {
        s = gen_rectangle_example();
    } else if (g == "fat-cantor") {
        s = gen_fat_cantor(c.depth);
    } else if (g == "random") {
        s = gen_random_cloud(c.seed, c.count, 0.0, 3.0);
    } else if (g == "jump-integral") {
        s = gen_jump_integral(c.terms, c.eps);
    } else {
        throw UsageError("unknown generator '" + g + "'");
    }
    return s;
}

SetSpec load(const RunConfig& c) {
    if (c.input.empty() == c.gen.empty()) throw UsageError("give exactly one of --input or --gen");
    return c.input.empty() ? generate(c) : read_spec_file(c.input);
}

int level_of(const RunConfig& c) {
    int lo = min_level(c.eps) + 1;
    if (c.level < 0) return std::max(8, lo);
    if (c.level < lo) throw UsageError("level " + std::to_string(c.level) + " is below the threshold " + std::to_string(lo));
    return c.level;
}

void check_config(const RunConfig& c) {
    if (!(c.eps > 0.0) || !std::isfinite(c.eps)) throw UsageError("eps must be positive");
    if (!(c.spacing > 0.0)) throw UsageError("spacing must be positive");
    if (c.raster_h < 0.0) throw UsageError("raster-h must be positive");
    for (const auto& e : c.emit)
        if (e != "json" && e != "csv" && e != "svg" && e != "pgm") throw UsageError("unknown emit kind '" + e + "'");
}

std::string out_path(const RunConfig& c, const std::string& name) {
    fs::create_directories(c.out_dir);
    return (fs::path(c.out_dir) / name).string();
}

std::optional<Point2> opt_point(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    return Point2{v[0], v[1]};
}

// fat Cantor lenses are thinner than a cell: keep a centre row on y = 1/2 and
// the columns at odd multiples of h/2 from the padded left edge
std::optional<Point2> anchor_for(const RunConfig& c, const std::vector<Point2>& centers, double h) {
    if (auto a = opt_point(c.anchor)) return a;
    if (c.gen != "fat-cantor" || centers.empty()) return std::nullopt;
    double x0 = centers[0].x;
    for (auto p : centers) x0 = std::min(x0, p.x);
    return Point2{x0 - 2.0 * c.eps + 0.5 * h, 0.5};
}

void add_common(CLI::App* app, RunConfig& c) {
    app->add_option("--input", c.input, "set spec JSON file");
    app->add_option("--gen", c.gen, "generator: point, point-pair, segment, rectangle, fat-cantor, random, jump-integral");
    app->add_option("--depth", c.depth, "fat-cantor depth");
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--count", c.count, "random point count");
    app->add_option("--terms", c.terms, "jump-integral terms");
    app->add_option("--eps", c.eps, "neighbourhood radius");
    app->add_option("--level", c.level, "dyadic level n");
    app->add_option("--spacing", c.spacing, "boundary sample spacing");
    app->add_option("--raster-h", c.raster_h, "complement raster step (default eps/64)");
    app->add_option("--out-dir", c.out_dir, "output directory");
    app->add_option("--emit", c.emit, "output kinds: json csv svg pgm")->delimiter(',');
    app->add_option("--threads", c.threads, "worker threads (EPSB_THREADS overrides)");
}

void print_counts(const Inventory& inv) {
    for (int l = 0; l < kNumLabels; ++l) std::printf("%s: %d\n", to_string(Label(l)), inv.counts[std::size_t(l)]);
}

// ---- subcommands ----

int cmd_gen(const RunConfig& c) {
    auto s = generate(c);
    std::string text = spec_to_json(s).dump(2) + "\n";
    if (c.out.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_text(c.out, text);
    return 0;
}

int cmd_boundary(const RunConfig& c) {
    check_config(c);
    auto spec = load(c);
    int n = level_of(c);
    auto D = finite_approximating_set(spec, n, c.eps);
    ArrangementOptions ao;
    ao.threads = resolve_threads(c.threads);
    auto bas = disk_union_boundary(D.points, c.eps, ao);
    auto samples = sample_boundary(bas, c.spacing);
    if (c.emits("csv")) {
        write_text(out_path(c, "arcs.csv"), arcs_csv(bas));
        write_text(out_path(c, "vertices.csv"), vertices_csv(bas));
        write_text(out_path(c, "samples.csv"), samples_csv(samples));
    }
    if (c.emits("svg")) write_text(out_path(c, "boundary.svg"), boundary_svg(bas));
    std::printf("level: %d\ncenters: %zu\narcs: %zu\nvertices: %zu\nsamples: %zu\n", n, bas.centers.size(),
                bas.arcs.size(), bas.vertices.size(), samples.size());
    return 0;
}

int cmd_analyze(const RunConfig& c) {
    check_config(c);
    auto spec = load(c);
    int n = level_of(c);
    auto ctx = ApproxContext::build(spec, c.eps, n);
    std::vector<Point2> pts;
    if (c.points.size() % 2) throw UsageError("--point takes x y pairs");
    for (std::size_t i = 0; i + 1 < c.points.size(); i += 2) pts.push_back({c.points[i], c.points[i + 1]});
    if (pts.empty()) {
        auto bas = disk_union_boundary(ctx.points, c.eps);
        for (const auto& v : bas.vertices) pts.push_back(v.p);
        if (pts.empty())
            for (const auto& s : sample_boundary(bas, c.spacing)) {
                pts.push_back(s.position);
                if (pts.size() >= 8) break;
            }
    }
    // level-n points sit within a cell diagonal of the true boundary
    const double tol = std::sqrt(2.0) * std::ldexp(1.0, -n) + 1e-9 * c.eps;
    Json out = Json::array();
    int failed = 0;
    for (auto p : pts) {
        try {
            out.push_back(analysis_to_json(spec, ctx, p, tol, 256));
        } catch (const Error& e) {
            out.push_back({{"point", Json::array({p.x, p.y})}, {"error", e.what()}});
            ++failed;
        }
    }
    Json doc{{"eps", c.eps}, {"level", n}, {"tol", tol}, {"points", out}};
    if (c.emits("json")) write_text(out_path(c, "analysis.json"), doc.dump(1) + "\n");
    std::printf("points: %zu\nerrors: %d\n", pts.size(), failed);
    return 0;
}

Json regression_block(const SetSpec& spec, const Inventory& inv) {
    // the rectangle's interior-limit segment (2,3) x {1/2}
    int on_segment = 0;
    for (const auto& r : inv.records)
        if (r.point.x > 2.0 + 1e-9 && r.point.x < 3.0 - 1e-9 && std::abs(r.point.y - 0.5) < inv.spacing) ++on_segment;
    Json j{{"records_on_open_segment", on_segment}};
    for (const auto& r : inv.records)
        if (distance(r.point, {3, 0.5}) <= 1e-9) {
            j["right_end"] = record_to_json(r);
        }
    (void)spec;
    return j;
}

int cmd_classify(const RunConfig& c) {
    check_config(c);
    auto spec = load(c);
    int n = level_of(c);
    ClassifyOptions opt;
    opt.spacing = c.spacing;
    opt.threads = c.threads;
    auto inv = classify_boundary(spec, c.eps, n, opt);
    auto part = verify_partition(inv);
    if (c.emits("json")) {
        Json j = inventory_to_json(inv, c.profiles);
        j["spec"] = spec_to_json(spec);
        j["partition_ok"] = part.ok;
        if (spec.label == "rectangle") j["regression"] = regression_block(spec, inv);
        write_text(out_path(c, "inventory.json"), j.dump(1) + "\n");
    }
    if (c.emits("csv")) write_text(out_path(c, "counts.csv"), counts_csv(inv));
    if (c.emits("svg")) {
        auto D = finite_approximating_set(spec, n, c.eps);
        auto bas = disk_union_boundary(D.points, c.eps);
        std::vector<SvgMark> marks;
        for (const auto& r : inv.records)
            if (r.label != Label::S0) marks.push_back({r.point, label_color(r.label), to_string(r.label)});
        write_text(out_path(c, "classify.svg"), boundary_svg(bas, marks));
    }
    std::printf("level: %d\nrecords: %zu\npruned: %zu\n", n, inv.records.size(), inv.pruned);
    print_counts(inv);
    std::printf("partition: %s\n", part.ok ? "ok" : "VIOLATED");
    for (const auto& v : part.violations) std::fprintf(stderr, "violation: %s\n", v.c_str());
    return part.ok ? 0 : 1;
}

int cmd_components(const RunConfig& c) {
    check_config(c);
    auto spec = load(c);
    int n = level_of(c);
    double h = c.raster_h > 0.0 ? c.raster_h : c.eps / 64.0;
    auto D = finite_approximating_set(spec, n, c.eps);
    auto map = complement_components(D.points, c.eps, raster_bbox(D.points, c.eps, h, anchor_for(c, D.points, h)),
                                     h, c.threads);
    attach_boundary_arcs(map, disk_union_boundary(D.points, c.eps));
    Json j = components_to_json(map);
    if (auto t = opt_point(c.target)) {
        auto ev = chain_evidence(*t, map);
        j["chain_evidence"] = ev ? chain_evidence_to_json(*ev) : Json(nullptr);
        std::printf("chain links: %zu\n", ev ? ev->component_ids.size() : std::size_t(0));
    }
    if (c.emits("json")) write_text(out_path(c, "components.json"), j.dump(1) + "\n");
    if (c.emits("pgm")) write_text(out_path(c, "components.pgm"), components_pgm(map));
    std::printf("level: %d\nh: %s\ncomponents: %zu\nbounded: %d\n", n, fmt17(h).c_str(), map.components.size(),
                map.bounded_count());
    return 0;
}

int cmd_verify(const RunConfig& c) {
    std::vector<CheckResult> checks;
    Json doc;
    if (!c.replay.empty()) {
        Inventory inv;
        try {
            inv = inventory_from_json(Json::parse(read_text(c.replay)));
        } catch (const Json::exception& e) {
            throw UsageError(std::string("invalid inventory: ") + e.what());
        }
        checks.push_back(check_partition(inv));
        doc["replay"] = c.replay;
    } else {
        check_config(c);
        auto spec = load(c);
        int n = level_of(c);
        ClassifyOptions opt;
        opt.spacing = c.spacing;
        opt.threads = c.threads;
        double h = c.raster_h > 0.0 ? c.raster_h : c.eps / 64.0;
        checks.push_back(check_lipschitz(spec, c.eps, n, c.spacing));
        checks.push_back(check_orientation(spec, c.eps, n, c.spacing));
        // tangent agreement only where smooth samples exist
        auto tg = check_tangents(spec, c.eps, n, c.spacing);
        if (tg.checked > 0 || !tg.failures.empty()) checks.push_back(tg);
        checks.push_back(check_partition(classify_boundary(spec, c.eps, n, opt)));
        auto D = finite_approximating_set(spec, n, c.eps).points;
        checks.push_back(check_raster(D, c.eps, h, anchor_for(c, D, h)));
        doc["eps"] = c.eps;
        doc["level"] = n;
    }
    bool ok = true;
    Json arr = Json::array();
    for (const auto& r : checks) {
        ok = ok && r.ok;
        arr.push_back(check_to_json(r));
        std::printf("%s %s (checked %zu)\n", r.ok ? "PASS" : "FAIL", r.name.c_str(), r.checked);
        for (const auto& f : r.failures) std::fprintf(stderr, "  %s: %s\n", r.name.c_str(), f.c_str());
    }
    doc["ok"] = ok;
    doc["checks"] = arr;
    if (c.emits("json")) write_text(out_path(c, "verify.json"), doc.dump(1) + "\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eps-neighbourhood boundary toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* gen = app.add_subcommand("gen", "write a generated set spec as JSON");
    gen->add_option("name", cfg.gen, "generator name")->required();
    gen->add_option("--depth", cfg.depth);
    gen->add_option("--seed", cfg.seed);
    gen->add_option("--count", cfg.count);
    gen->add_option("--terms", cfg.terms);
    gen->add_option("--eps", cfg.eps, "jump-integral eps");
    gen->add_option("-o,--out", cfg.out, "output file (default stdout)");

    auto* boundary = app.add_subcommand("boundary", "boundary arcs of the level-n neighbourhood");
    add_common(boundary, cfg);
    auto* analyze = app.add_subcommand("analyze", "contributors, outward arcs and local representations");
    add_common(analyze, cfg);
    analyze->add_option("--point", cfg.points, "x y (repeatable)")->expected(2)->allow_extra_args()->take_all();
    auto* classify = app.add_subcommand("classify", "label boundary points S0..S8");
    add_common(classify, cfg);
    classify->add_flag("--profiles", cfg.profiles, "include alpha profiles in the JSON");
    auto* components = app.add_subcommand("components", "connected components of the complement");
    add_common(components, cfg);
    components->add_option("--anchor", cfg.anchor, "x y made a raster cell centre")->expected(2);
    components->add_option("--target", cfg.target, "x y for chain evidence")->expected(2);
    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    add_common(verify, cfg);
    verify->add_option("--anchor", cfg.anchor, "x y made a raster cell centre")->expected(2);
    verify->add_option("--replay", cfg.replay, "check a stored inventory instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (*gen) return cmd_gen(cfg);
        if (*boundary) return cmd_boundary(cfg);
        if (*analyze) return cmd_analyze(cfg);
        if (*classify) return cmd_classify(cfg);
        if (*components) return cmd_components(cfg);
        if (*verify) return cmd_verify(cfg);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
