#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "epsb/analysis.hpp"
#include "epsb/arrangement.hpp"
#include "epsb/geometry.hpp"
#include "epsb/setmodel.hpp"

namespace epsb {

enum class Label { S0, S1, S2, S3, S4, S5, S6, S7, S8, Unresolved };
constexpr int kNumLabels = 10;

const char* to_string(Label l);
Label label_from_string(const std::string& s);
bool is_chain(Label l);  // S6, S7, S8

enum class Verdict { sharp, chain, collapsed, unresolved };
const char* to_string(Verdict v);

// alpha evidence along one outward direction
struct DirectionEvidence {
    UnitDir xi;
    Verdict verdict = Verdict::unresolved;
    double alpha_max = 0.0;           // max alpha over (s_c, s_max]
    double flat_until = 0.0;          // end of the alpha >= -tol run that starts at s = 0
    std::vector<double> touches;      // later alpha >= -tol runs (refined maxima)
    bool probe_covered = false;       // probe along xi lies within the limit set
    std::vector<AlphaPoint> profile;  // full alpha on the sample grid
};

struct SingularityRecord {
    Point2 point;
    Label label = Label::Unresolved;
    bool vertex = false;
    GeodesicArc arc;                  // outward directions after pruning
    std::optional<double> angle;      // S1 only
    std::vector<Point2> contributors; // argmin over E at x
    std::vector<Point2> generators;   // D^n centres at distance eps
    std::vector<DirectionEvidence> directions;
    int unp_left = 0, unp_right = 0;  // non-Unp records within the inspection radius, per side
    double inspection_radius = 0.0;
    int level = 0;
};

struct ClassifyOptions {
    double spacing = 0.01;
    unsigned threads = 0;
    int num_samples = 256;
    double inspect_factor = 8.0;  // inspection radius = factor * spacing
};

// one analysed boundary point before labelling
struct Candidate {
    Point2 x;
    bool vertex = false;
    std::vector<Point2> generators;
};

struct ClassifyContext {
    const SetSpec* spec = nullptr;
    const ApproxContext* approx = nullptr;
    double eps = 0.0;
    int level = 0;
    ClassifyOptions opt;

    double cell_diag() const;
    double probe_radius() const { return 2.0 * cell_diag(); }
    double inspection_radius() const { return opt.inspect_factor * opt.spacing; }
    // alpha tolerance: twice the scallop depth of neighbouring D^n disks
    double alpha_tol() const;
};

/// Labels one point. nullopt: the point lies inside the limit set (every
/// outward probe is covered) and is not part of the boundary. Unp points come
/// back as S0; resolve_shallow upgrades them.
std::optional<SingularityRecord> classify_point(const ClassifyContext& cc, const Candidate& c);

/// S4/S5 from non-Unp records accumulating on one or both sides.
void resolve_shallow(std::vector<SingularityRecord>& recs, double radius);

struct Inventory {
    std::vector<SingularityRecord> records;
    std::array<int, kNumLabels> counts{};
    double eps = 0.0;
    int level = 0;
    double spacing = 0.0;
    std::size_t candidates = 0;
    std::size_t pruned = 0;

    void recount();
    int count(Label l) const { return counts[std::size_t(l)]; }
};

Inventory classify_boundary(const SetSpec& spec, double eps, int n, const ClassifyOptions& opt = {});

struct PartitionReport {
    bool ok = true;
    std::vector<std::string> violations;
};

PartitionReport verify_partition(const Inventory& inv);

struct StabilityReport {
    std::vector<int> levels;
    std::vector<std::array<int, kNumLabels>> counts;
    int n_stable = -1;  // -1: counts still change at the last pair
    bool stable() const { return n_stable >= 0; }
};

/// Counts of S1, S2, S3, S4, S6, S8 across levels n_lo..n_hi.
StabilityReport count_stability(const SetSpec& spec, double eps, int n_lo, int n_hi, const ClassifyOptions& opt = {});

}  // namespace epsb
