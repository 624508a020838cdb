#pragma once

#include "poincare/domain_spec.hpp"
#include "poincare/raster.hpp"
#include "poincare/types.hpp"

namespace poincare {

// Segment {start + s*direction : 0 < s < length} contained in the fiber.
struct Chord {
  Point start{0.0, 0.0, 0.0};
  Direction direction;
  double length = 0.0;
};

struct ThicknessResult {
  double value = 0.0;  // kInfinity when some chord leaves the box inside the fiber
  bool unbounded = false;
  Chord longest;
  std::size_t seeds = 0;
};

// Directional thickness |Omega_t|_lambda: the longest open segment parallel
// to lambda inside the fiber. Seeds are the interior cell centers of a
// raster at seed_resolution plus the midpoints of boundary-adjacent faces;
// from each seed the fiber is marched with `step` in both directions and the
// exit points are bisected down to step/64.
ThicknessResult thickness(const DomainSpec& spec, const ParamVector& t, const Direction& lambda, double step,
                          int seed_resolution);

// Same, reusing an existing raster of the fiber as seed set.
ThicknessResult thickness(const Fiber& fiber, const RasterDomain& seeds, const Direction& lambda, double step);

}  // namespace poincare
