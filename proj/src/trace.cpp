#include "poincare/trace.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "poincare/error.hpp"

namespace poincare {

namespace {

constexpr int kBisections = 48;

Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

class Extractor {
 public:
  Extractor(const Fiber& fiber, const RasterDomain& raster) : fiber_(fiber), r_(raster) {}

  bool inside(const std::array<int, 3>& ijk) const { return r_.in_grid(ijk) && r_.is_interior(r_.index(ijk)); }

  // Crossing between an inside and an outside center.
  Point crossing(const std::array<int, 3>& in, const std::array<int, 3>& out) const {
    const Point a = r_.center(in);
    Point b = r_.center(out);
    if (!r_.in_grid(out)) b = 0.5 * (a + b);
    double lo = 0.0;
    double hi = 1.0;
    for (int k = 0; k < kBisections; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (fiber_.contains(a + mid * (b - a))) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return a + (0.5 * (lo + hi)) * (b - a);
  }

  Point edge_point(const std::array<int, 3>& u, const std::array<int, 3>& v) const {
    return inside(u) ? crossing(u, v) : crossing(v, u);
  }

 private:
  const Fiber& fiber_;
  const RasterDomain& r_;
};

std::array<int, 3> shift(std::array<int, 3> c, int dx, int dy, int dz) {
  c[0] += dx;
  c[1] += dy;
  c[2] += dz;
  return c;
}

void extract_1d(const Extractor& ex, const RasterDomain& r, BoundaryMesh& mesh) {
  for (int i = -1; i < r.counts[0]; ++i) {
    const std::array<int, 3> a{i, 0, 0};
    const std::array<int, 3> b{i + 1, 0, 0};
    if (ex.inside(a) != ex.inside(b)) mesh.pieces.push_back({ex.edge_point(a, b)});
  }
}

void extract_2d(const Extractor& ex, const RasterDomain& r, BoundaryMesh& mesh) {
  for (int j = -1; j < r.counts[1]; ++j) {
    for (int i = -1; i < r.counts[0]; ++i) {
      const std::array<int, 3> c[4] = {{i, j, 0}, {i + 1, j, 0}, {i + 1, j + 1, 0}, {i, j + 1, 0}};
      bool in[4];
      int count = 0;
      for (int k = 0; k < 4; ++k) count += in[k] = ex.inside(c[k]);
      if (count == 0 || count == 4) continue;
      auto edge = [&](int e) { return ex.edge_point(c[e], c[(e + 1) % 4]); };
      if (count == 2 && in[0] == in[2]) {
        // Saddle: diagonal interior centers are not face-connected, so each
        // is cut off on its own.
        if (in[0]) {
          mesh.pieces.push_back({edge(3), edge(0)});
          mesh.pieces.push_back({edge(1), edge(2)});
        } else {
          mesh.pieces.push_back({edge(0), edge(1)});
          mesh.pieces.push_back({edge(2), edge(3)});
        }
        continue;
      }
      std::vector<Point> seg;
      for (int e = 0; e < 4; ++e)
        if (in[e] != in[(e + 1) % 4]) seg.push_back(edge(e));
      mesh.pieces.push_back(std::move(seg));
    }
  }
}

void extract_3d(const Extractor& ex, const RasterDomain& r, BoundaryMesh& mesh) {
  static constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7}, {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};
  for (int k = -1; k < r.counts[2]; ++k) {
    for (int j = -1; j < r.counts[1]; ++j) {
      for (int i = -1; i < r.counts[0]; ++i) {
        std::array<int, 3> c[8];
        bool in[8];
        int count = 0;
        for (int b = 0; b < 8; ++b) {
          c[b] = shift({i, j, k}, b & 1, (b >> 1) & 1, (b >> 2) & 1);
          count += in[b] = ex.inside(c[b]);
        }
        if (count == 0 || count == 8) continue;
        for (const auto& tet : kTets) {
          std::vector<int> ins;
          std::vector<int> outs;
          for (int v : tet) (in[v] ? ins : outs).push_back(v);
          if (ins.empty() || outs.empty()) continue;
          if (ins.size() == 1 || outs.size() == 1) {
            const int apex = ins.size() == 1 ? ins[0] : outs[0];
            const auto& rest = ins.size() == 1 ? outs : ins;
            mesh.pieces.push_back(
                {ex.edge_point(c[apex], c[rest[0]]), ex.edge_point(c[apex], c[rest[1]]), ex.edge_point(c[apex], c[rest[2]])});
          } else {
            const Point p0 = ex.edge_point(c[ins[0]], c[outs[0]]);
            const Point p1 = ex.edge_point(c[ins[0]], c[outs[1]]);
            const Point p2 = ex.edge_point(c[ins[1]], c[outs[1]]);
            const Point p3 = ex.edge_point(c[ins[1]], c[outs[0]]);
            mesh.pieces.push_back({p0, p1, p2});
            mesh.pieces.push_back({p0, p2, p3});
          }
        }
      }
    }
  }
}

double piece_measure(const std::vector<Point>& piece) {
  if (piece.size() == 1) return 1.0;
  if (piece.size() == 2) return norm(piece[1] - piece[0]);
  return 0.5 * norm(cross(piece[1] - piece[0], piece[2] - piece[0]));
}

double bump(const Point& x, const Point& c, double radius) {
  const double s2 = dot(x - c, x - c) / (radius * radius);
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

// Deepest interior center: largest 4/6-neighbour step distance to a
// non-interior cell, refined by the euclidean distance to the boundary mesh.
std::pair<Point, double> deepest_point(const RasterDomain& r, const BoundaryMesh& boundary) {
  std::vector<int> depth(r.cell_count(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t cell = 0; cell < r.cell_count(); ++cell) {
    if (!r.is_interior(cell)) continue;
    const auto ijk = r.coords(cell);
    bool edge = false;
    for (int a = 0; a < r.dim && !edge; ++a)
      edge = !r.interior_neighbor(ijk, a, 1) || !r.interior_neighbor(ijk, a, -1);
    if (edge) {
      depth[cell] = 0;
      queue.push_back(cell);
    }
  }
  std::size_t best = r.interior_cells.front();
  while (!queue.empty()) {
    const std::size_t cell = queue.front();
    queue.pop_front();
    if (depth[cell] > depth[best]) best = cell;
    const auto ijk = r.coords(cell);
    for (int a = 0; a < r.dim; ++a)
      for (int o : {-1, 1}) {
        if (!r.interior_neighbor(ijk, a, o)) continue;
        auto n = ijk;
        n[a] += o;
        const std::size_t ni = r.index(n);
        if (depth[ni] >= 0) continue;
        depth[ni] = depth[cell] + 1;
        queue.push_back(ni);
      }
  }
  const Point c = r.center(best);
  double d = kInfinity;
  for (const auto& piece : boundary.pieces)
    for (const auto& v : piece) d = std::min(d, norm(v - c));
  return {c, d};
}

}  // namespace

double BoundaryMesh::measure() const {
  double m = 0.0;
  for (const auto& piece : pieces) m += piece_measure(piece);
  return m;
}

BoundaryMesh extract_boundary(const Fiber& fiber, const RasterDomain& raster) {
  BoundaryMesh mesh;
  mesh.dim = raster.dim;
  const Extractor ex(fiber, raster);
  if (raster.dim == 1) extract_1d(ex, raster, mesh);
  if (raster.dim == 2) extract_2d(ex, raster, mesh);
  if (raster.dim == 3) extract_3d(ex, raster, mesh);
  return mesh;
}

std::vector<TraceFunction> trace_battery(const std::string& battery, const RasterDomain& raster,
                                         const BoundaryMesh& boundary) {
  if (raster.empty()) throw EmptyFiber("trace battery on an empty raster");
  Point centroid{0.0, 0.0, 0.0};
  for (std::size_t cell : raster.interior_cells) centroid = centroid + raster.center(cell);
  centroid = (1.0 / static_cast<double>(raster.interior_count())) * centroid;
  double scale = 0.0;
  for (int a = 0; a < raster.dim; ++a) scale = std::max(scale, 0.5 * raster.counts[a] * raster.h);
  auto xi = [centroid, scale](const Point& x) { return (1.0 / scale) * (x - centroid); };

  std::vector<TraceFunction> out;
  if (battery == "polynomial") {
    out.push_back({"one", [](const Point&) { return 1.0; }});
    out.push_back({"1+x", [xi](const Point& x) { return 1.0 + xi(x)[0]; }});
    out.push_back({"|x|^2", [xi](const Point& x) { return dot(xi(x), xi(x)); }});
    out.push_back({"1+xy+y^3", [xi](const Point& x) {
                     const Point z = xi(x);
                     return 1.0 + z[0] * z[1] + z[1] * z[1] * z[1];
                   }});
  } else if (battery == "trigonometric") {
    using std::numbers::pi;
    out.push_back({"cos(pi x)", [xi](const Point& x) { return std::cos(pi * xi(x)[0]); }});
    out.push_back({"sin(pi x + 0.3) cos(pi y)", [xi](const Point& x) {
                     const Point z = xi(x);
                     return std::sin(pi * z[0] + 0.3) * std::cos(pi * z[1]);
                   }});
    out.push_back({"cos(2 pi (x+y+z))", [xi](const Point& x) {
                     const Point z = xi(x);
                     return std::cos(2.0 * pi * (z[0] + z[1] + z[2]));
                   }});
  } else if (battery == "bump") {
    if (boundary.pieces.empty()) throw DegenerateBoundary("no boundary pieces extracted");
    const auto [c, depth] = deepest_point(raster, boundary);
    for (double f : {0.5, 0.8}) {
      const double radius = f * depth;
      out.push_back({"bump(" + std::to_string(f).substr(0, 3) + ")", [c, radius](const Point& x) { return bump(x, c, radius); }});
    }
    const double radius = 0.8 * depth;
    out.push_back({"bump(0.8)*(1+x)", [c, radius, xi](const Point& x) { return bump(x, c, radius) * (1.0 + xi(x)[0]); }});
  } else {
    throw std::invalid_argument("unknown battery '" + battery + "' (polynomial, trigonometric, bump)");
  }
  return out;
}

TraceValue trace_ratio(const TraceFunction& phi, const RasterDomain& raster, const BoundaryMesh& boundary, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  TraceValue v;
  const double hn = std::pow(raster.h, raster.dim);
  double sum_u = 0.0;
  double sum_du = 0.0;
  for (std::size_t cell : raster.interior_cells) {
    const auto ijk = raster.coords(cell);
    const double u = phi.f(raster.center(ijk));
    sum_u += std::pow(std::abs(u), p) * hn;
    double g2 = 0.0;
    for (int a = 0; a < raster.dim; ++a) {
      double d = 0.0;
      if (raster.interior_neighbor(ijk, a, 1)) {
        auto n = ijk;
        ++n[a];
        d = (phi.f(raster.center(n)) - u) / raster.h;
      } else if (raster.interior_neighbor(ijk, a, -1)) {
        auto n = ijk;
        --n[a];
        d = (u - phi.f(raster.center(n))) / raster.h;
      }
      g2 += d * d;
    }
    sum_du += std::pow(g2, 0.5 * p) * hn;
  }
  double sum_b = 0.0;
  for (const auto& piece : boundary.pieces) {
    double mean = 0.0;
    for (const auto& x : piece) mean += std::pow(std::abs(phi.f(x)), p);
    sum_b += piece_measure(piece) * mean / static_cast<double>(piece.size());
  }
  v.lp_norm = std::pow(sum_u, 1.0 / p);
  v.w_norm = std::pow(sum_u + sum_du, 1.0 / p);
  v.boundary_norm = std::pow(sum_b, 1.0 / p);
  const double denom = std::pow(v.lp_norm, 1.0 - 1.0 / p) * std::pow(v.w_norm, 1.0 / p);
  v.ratio = denom > 0.0 ? v.boundary_norm / denom : 0.0;
  return v;
}

int fine_resolution(int resolution) { return 2 * resolution + resolution % 2; }

bool stable_pair(double a, double b) {
  if (a <= 1e-3 && b <= 1e-3) return true;
  return std::abs(b - a) <= 0.1 * std::max(a, b);
}

TraceReport trace_ratio_battery(const DomainSpec& spec, const ParamVector& t, int resolution, double p,
                                const std::string& battery) {
  const Fiber fiber(spec, t);
  const RasterDomain coarse = rasterize(spec, t, resolution);
  const RasterDomain fine = rasterize(spec, t, fine_resolution(resolution));
  if (coarse.empty() || fine.empty()) throw EmptyFiber("trace battery on an empty fiber");
  const BoundaryMesh bc = extract_boundary(fiber, coarse);
  const BoundaryMesh bf = extract_boundary(fiber, fine);
  if (bc.pieces.empty() || bf.pieces.empty()) throw DegenerateBoundary("no boundary pieces extracted from the mask");

  TraceReport rep;
  rep.battery = battery;
  rep.p = p;
  rep.resolution = resolution;
  rep.pieces = bc.pieces.size();
  rep.pieces_fine = bf.pieces.size();
  rep.boundary_measure = bc.measure();
  rep.boundary_measure_fine = bf.measure();
  for (const auto& phi : trace_battery(battery, coarse, bc)) {
    TraceFunctionResult r;
    r.name = phi.name;
    r.coarse = trace_ratio(phi, coarse, bc, p);
    r.fine = trace_ratio(phi, fine, bf, p);
    r.stable = stable_pair(r.coarse.ratio, r.fine.ratio);
    rep.sup = std::max(rep.sup, r.coarse.ratio);
    rep.sup_fine = std::max(rep.sup_fine, r.fine.ratio);
    rep.functions.push_back(std::move(r));
  }
  rep.stable = stable_pair(rep.sup, rep.sup_fine);
  return rep;
}

}  // namespace poincare
