#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "epsb/analysis.hpp"
#include "epsb/arrangement.hpp"
#include "epsb/classify.hpp"
#include "epsb/invariants.hpp"
#include "epsb/setmodel.hpp"
#include "epsb/topology.hpp"

namespace epsb {

using Json = nlohmann::ordered_json;

constexpr int kInventorySchema = 1;

/// %.17g
std::string fmt17(double v);

// set specs: {"label", "primitives": [{"type":"point","x","y"} | {"type":"segment","ax","ay","bx","by"}]}
SetSpec spec_from_json(const Json& j);
Json spec_to_json(const SetSpec& spec);
SetSpec read_spec_file(const std::string& path);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

Json record_to_json(const SingularityRecord& r, bool profiles = false);
SingularityRecord record_from_json(const Json& j);
Json inventory_to_json(const Inventory& inv, bool profiles = false);
/// Inverse of inventory_to_json; counts are read back as stored, not recounted.
Inventory inventory_from_json(const Json& j);

std::string counts_csv(const Inventory& inv);
std::string arcs_csv(const BoundaryArcSet& bas);
std::string vertices_csv(const BoundaryArcSet& bas);
std::string samples_csv(const std::vector<BoundarySample>& samples);

struct SvgMark {
    Point2 p;
    std::string color;
    std::string title;
};

/// Arcs as stroke-only paths, one per arc, plus optional point marks.
std::string boundary_svg(const BoundaryArcSet& bas, const std::vector<SvgMark>& marks = {});
const char* label_color(Label l);

/// P2, one value per cell: 0 inside the union, id + 1 otherwise; top row is max y.
std::string components_pgm(const ComponentMap& map);
Json components_to_json(const ComponentMap& map);

Json chain_evidence_to_json(const ChainEvidence& ev);
Json check_to_json(const CheckResult& c);

/// Per-point analysis dump: contributors, outward arc, extremal pairs, f samples.
Json analysis_to_json(const SetSpec& spec, const ApproxContext& ctx, Point2 x, double tol, int num_samples);

}  // namespace epsb
