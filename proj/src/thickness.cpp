#include "poincare/thickness.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace poincare {

namespace {

// Largest s >= 0 with x + s*dir still inside the closed bounding box, and
// that point with the blocking coordinate snapped onto the box face.
std::pair<double, Point> box_exit(const Fiber& fiber, const Point& x, const Point& dir) {
  double s_max = kInfinity;
  int axis = -1;
  double face = 0.0;
  for (int a = 0; a < fiber.dim(); ++a) {
    const auto& b = fiber.spec().bounding_box[a];
    if (dir[a] == 0.0) continue;
    const double wall = dir[a] > 0.0 ? b.hi : b.lo;
    const double s = (wall - x[a]) / dir[a];
    if (s < s_max) {
      s_max = s;
      axis = a;
      face = wall;
    }
  }
  s_max = std::max(0.0, s_max);
  Point p = x + s_max * dir;
  if (axis >= 0) p[axis] = face;
  return {s_max, p};
}

// Distance from x (inside) to the first exit along dir; kInfinity when the
// walk reaches the box boundary without leaving the fiber.
double march(const Fiber& fiber, const Point& x, const Point& dir, double step) {
  const auto [s_box, exit_point] = box_exit(fiber, x, dir);
  const double tol = step / 64.0;
  double inside = 0.0;
  double outside = -1.0;
  while (true) {
    double s = inside + step;
    if (s >= s_box) {
      if (fiber.contains(exit_point)) return kInfinity;
      outside = s_box;
      break;
    }
    if (!fiber.contains(x + s * dir)) {
      outside = s;
      break;
    }
    inside = s;
  }
  while (outside - inside > tol) {
    const double mid = 0.5 * (inside + outside);
    if (fiber.contains(x + mid * dir)) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return 0.5 * (inside + outside);
}

int aligned_axis(const Direction& d) {
  for (int a = 0; a < d.dim(); ++a) {
    if (std::abs(d[a]) == 1.0) return a;
  }
  return -1;
}

}  // namespace

ThicknessResult thickness(const Fiber& fiber, const RasterDomain& seeds, const Direction& lambda, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("thickness step must be positive");
  if (lambda.dim() != fiber.dim()) throw std::invalid_argument("direction dimension does not match the domain");
  ThicknessResult result;
  result.longest.direction = lambda;
  const Point fwd = lambda.vec();
  const Point back = lambda.flipped().vec();

  // Returns false once an unbounded chord is found.
  auto consider = [&](const Point& x, double& b, double& f) -> bool {
    ++result.seeds;
    f = march(fiber, x, fwd, step);
    b = march(fiber, x, back, step);
    const double len = f + b;
    if (std::isinf(len)) {
      result.unbounded = true;
      result.value = kInfinity;
      result.longest.start = x;
      result.longest.length = kInfinity;
      return false;
    }
    if (len > result.value) {
      result.value = len;
      result.longest.start = x + b * back;
      result.longest.length = len;
    }
    return true;
  };

  // Along a grid axis all seeds of one grid line share chords; skip seeds
  // already covered by the previous chord on the same line.
  const int axis = aligned_axis(lambda);
  std::vector<std::pair<double, double>> covered;
  if (axis >= 0) covered.assign(seeds.cell_count(), {0.0, 0.0});
  double b = 0.0;
  double f = 0.0;
  for (std::size_t c : seeds.interior_cells) {
    const Point x = seeds.center(c);
    if (axis < 0) {
      if (!consider(x, b, f)) return result;
      continue;
    }
    auto ijk = seeds.coords(c);
    ijk[axis] = 0;
    auto& [lo, hi] = covered[seeds.index(ijk)];
    if (x[axis] > lo && x[axis] < hi) continue;
    if (!consider(x, b, f)) return result;
    const double s = lambda[axis];
    lo = std::min(x[axis] - b * s, x[axis] + f * s);
    hi = std::max(x[axis] - b * s, x[axis] + f * s);
  }
  for (std::size_t c : seeds.interior_cells) {
    if (seeds.state[c] != CellState::BoundaryAdjacent) continue;
    const auto ijk = seeds.coords(c);
    const Point center = seeds.center(ijk);
    for (int a = 0; a < seeds.dim; ++a) {
      for (int off : {-1, 1}) {
        if (seeds.interior_neighbor(ijk, a, off)) continue;
        Point mid = center;
        mid[a] += 0.5 * off * seeds.h;
        if (!fiber.in_box(mid) || !fiber.contains(mid)) continue;
        if (!consider(mid, b, f)) return result;
      }
    }
  }
  return result;
}

ThicknessResult thickness(const DomainSpec& spec, const ParamVector& t, const Direction& lambda, double step,
                          int seed_resolution) {
  const Fiber fiber(spec, t);
  const RasterDomain seeds = rasterize(spec, t, seed_resolution);
  return thickness(fiber, seeds, lambda, step);
}

}  // namespace poincare
