#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "epsb/classify.hpp"
#include "epsb/setmodel.hpp"
#include "epsb/topology.hpp"

namespace epsb {

struct CheckResult {
    std::string name;
    bool ok = true;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    double worst = 0.0;  // check-specific: max ratio or error
    std::vector<std::string> failures;

    void fail(std::string msg);
};

/// Level-n boundary samples used by the point checks, thinned to at most
/// max_points evenly over the sample list.
std::vector<BoundarySample> check_samples(const SetSpec& spec, double eps, int n, double spacing,
                                          std::size_t max_points, BoundaryArcSet* bas_out = nullptr);

/// |f(s)-f(t)| <= L |s-t| with L = 1/(sqrt3 eps) + 1e-3 on each local rep's
/// radius, and curve steps within (2/sqrt3 + 1e-3) |s-t|. worst = max slope * sqrt3 eps.
CheckResult check_lipschitz(const SetSpec& spec, double eps, int n, double spacing, std::size_t max_points = 200);

/// Every direction of the outward arc points away from every contributor.
CheckResult check_orientation(const SetSpec& spec, double eps, int n, double spacing, std::size_t max_points = 400);

/// Secant tangents against the extremal directions at smooth samples.
/// worst = largest angular error.
CheckResult check_tangents(const SetSpec& spec, double eps, int n, double spacing, double tol = 0.05);

CheckResult check_partition(const Inventory& inv);

CheckResult check_raster(const std::vector<Point2>& centers, double eps, double h, std::optional<Point2> anchor = {});

}  // namespace epsb
