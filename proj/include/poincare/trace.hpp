#pragma once

#include <functional>
#include <string>
#include <vector>

#include "poincare/domain_spec.hpp"
#include "poincare/raster.hpp"
#include "poincare/types.hpp"

namespace poincare {

// Boundary of the interior mask: polyline pieces (2D), triangles (3D) or
// points (1D). Topology comes from the mask; each vertex is placed on the
// segment between an interior center and an exterior center by bisection on
// membership (a center beyond the grid is replaced by the grid face).
struct BoundaryMesh {
  int dim = 0;
  std::vector<std::vector<Point>> pieces;  // 1, 2 or 3 vertices each
  double measure() const;                 // counting measure, length or area
};

BoundaryMesh extract_boundary(const Fiber& fiber, const RasterDomain& raster);

struct TraceFunction {
  std::string name;
  std::function<double(const Point&)> f;
};

// Smooth ambient test functions. The bump battery is supported in balls
// around the deepest interior point of `raster`, so its members vanish near
// the boundary.
std::vector<TraceFunction> trace_battery(const std::string& battery, const RasterDomain& raster,
                                         const BoundaryMesh& boundary);

struct TraceValue {
  double boundary_norm = 0.0;  // L^p(boundary, H^{n-1})
  double lp_norm = 0.0;        // L^p over interior cells, no zero extension
  double w_norm = 0.0;         // W^{1,p} with one-sided interior differences
  double ratio = 0.0;          // boundary / (lp^{1-1/p} w^{1/p})
};

TraceValue trace_ratio(const TraceFunction& phi, const RasterDomain& raster, const BoundaryMesh& boundary, double p);

struct TraceFunctionResult {
  std::string name;
  TraceValue coarse;
  TraceValue fine;
  bool stable = false;
};

struct TraceReport {
  std::string battery;
  double p = 2.0;
  int resolution = 0;  // coarse; see fine_resolution()
  std::size_t pieces = 0;
  std::size_t pieces_fine = 0;
  double boundary_measure = 0.0;
  double boundary_measure_fine = 0.0;
  std::vector<TraceFunctionResult> functions;
  double sup = 0.0;
  double sup_fine = 0.0;
  bool stable = false;  // sup changes by <= 10%, or both sups <= 1e-3
};

// Doubling keeps the parity of the resolution, so grid lines of cell centers
// that lie on the coarse grid (slits) stay on the fine one.
int fine_resolution(int resolution);

// Runs the battery at `resolution` and fine_resolution() with the same
// functions. Throws DegenerateBoundary when no boundary piece is found and
// EmptyFiber for an empty raster.
TraceReport trace_ratio_battery(const DomainSpec& spec, const ParamVector& t, int resolution, double p,
                                const std::string& battery);

bool stable_pair(double a, double b);

}  // namespace poincare
