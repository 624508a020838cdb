#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "poincare/cells.hpp"
#include "poincare/error.hpp"
#include "poincare/raster.hpp"
#include "poincare/report.hpp"
#include "support.hpp"

using namespace poincare;

namespace {

int inside_graph_count(const CellComplex2D& c) {
  int n = 0;
  for (const auto& col : c.columns)
    for (const auto& cell : col.cells) n += cell.kind == StackCell::Kind::Graph && cell.label == CellLabel::Inside;
  return n;
}

double bound_at(const CellComplex2D& c, const Column& col, const StackCell& cell, bool upper, double x) {
  if (upper && cell.upper_on_box) return c.y_box.hi;
  if (!upper && cell.lower_on_box) return c.y_box.lo;
  return interpolate_bound(col, upper ? cell.upper : cell.lower, x);
}

// y-roots of every curve at x, computed from the raw coefficients.
std::vector<double> curve_roots(const CellComplex2D& c, double x) {
  std::vector<double> out;
  for (const auto& curve : c.curves)
    for (double y : real_roots_in(curve.in_y(x), c.y_box.lo, c.y_box.hi)) out.push_back(y);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("univariate root finders") {
  // (x - 0.3)(x + 0.5)(x - 0.9) = x^3 - 0.7 x^2 - 0.33 x + 0.135
  const std::vector<double> coeffs{0.135, -0.33, -0.7, 1.0};
  const auto r = real_roots_in(coeffs, -1, 1);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(real_roots_in(coeffs, 0, 0.5).size() == 1);
  const auto cheb = chebyshev_roots([](double x) { return (x - 0.3) * (x + 0.5) * (x - 0.9); }, -1, 1, 3);
  REQUIRE(cheb.roots.size() == 3);
  CHECK(cheb.roots[1] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(chebyshev_roots([](double) { return 0.0; }, 0, 1, 4, 1e-12).identically_zero);
}

TEST_CASE("inside cell counts") {
  const CellComplex2D disk = cell_decompose_2d(testing::corpus("disk"), {}, 32);
  CHECK(disk.inside_band_count() == 1);
  REQUIRE(disk.criticals.size() == 2);
  CHECK(disk.criticals[0].x == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(disk.criticals[1].x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(disk.columns.size() == 5);

  CHECK(cell_decompose_2d(testing::corpus("two_disks"), {}, 32).inside_band_count() == 2);

  const CellComplex2D annulus = cell_decompose_2d(testing::corpus("annulus"), {}, 32);
  CHECK(annulus.inside_band_count() == 4);
  std::vector<double> xs;
  for (const auto& c : annulus.criticals) xs.push_back(c.x);
  REQUIRE(xs.size() == 4);
  const double expect[] = {-1.0, -0.5, 0.5, 1.0};
  for (int i = 0; i < 4; ++i) CHECK(xs[i] == doctest::Approx(expect[i]).epsilon(1e-9));
}

TEST_CASE("vertical merge undoes a spurious split") {
  const DomainSpec s = testing::corpus("disk");
  const Polynomial y = Polynomial::variable(2, 1);
  const CellComplex2D split = cell_decompose_2d(s, {}, 32, {y});
  CHECK(split.inside_band_count() == 2);
  CHECK(inside_graph_count(split) >= 1);
  const CellComplex2D merged = merge_vertical(split);
  CHECK(merged.inside_band_count() == 1);
  CHECK(inside_graph_count(merged) == 0);

  const CellComplex2D annulus = cell_decompose_2d(testing::corpus("annulus"), {}, 32);
  const CellComplex2D same = merge_vertical(annulus);
  CHECK(same.inside_band_count() == 4);
  for (std::size_t i = 0; i < annulus.columns.size(); ++i)
    CHECK(same.columns[i].cells.size() == annulus.columns[i].cells.size());

  const DomainSpec empty = parse_domain("dim 2\nbox [-1,1]x[-1,1]\nset: x^2 + y^2 + 1 < 0\n");
  const CellComplex2D none = cell_decompose_2d(empty, {}, 16);
  CHECK(none.inside_band_count() == 0);
  CHECK(merge_vertical(none).columns.size() == none.columns.size());
}

TEST_CASE("slit disk: the slit is a genuine boundary graph") {
  const CellComplex2D c = cell_decompose_2d(testing::corpus("slit_disk"), {}, 32);
  // y = 0 splits the left half spuriously and the right half for real.
  CHECK(c.inside_band_count() == 4);
  CHECK(merge_vertical(c).inside_band_count() == 3);
}

TEST_CASE("property: sampled points fall into exactly one cell") {
  auto rng = testing::rng_for(40);
  for (const char* name : {"disk", "annulus", "two_disks", "cusp", "ellipse"}) {
    const DomainSpec s = testing::corpus(std::string(name));
    const ParamVector t = s.param_count() ? ParamVector{0.7} : ParamVector{};
    const CellComplex2D c = cell_decompose_2d(s, t, 32);
    int checked = 0;
    for (int k = 0; k < 10000; ++k) {
      const double x = uniform(rng, c.x_box.lo, c.x_box.hi), y = uniform(rng, c.y_box.lo, c.y_box.hi);
      std::size_t ci = c.columns.size();
      for (std::size_t i = 0; i < c.columns.size(); ++i)
        if (!c.columns[i].section && c.columns[i].x_lo < x && x < c.columns[i].x_hi) ci = i;
      REQUIRE(ci < c.columns.size());
      const Column& col = c.columns[ci];
      // Interpolated bounds are least accurate next to vertical tangents;
      // stay clear of curves and column ends by 1e-3.
      const auto roots = curve_roots(c, x);
      bool near = x - col.x_lo < 1e-3 || col.x_hi - x < 1e-3;
      for (double r : roots) near = near || std::abs(r - y) < 1e-3;
      if (near) continue;
      int hits = 0;
      std::size_t hit = 0;
      for (std::size_t j = 0; j < col.cells.size(); ++j) {
        const auto& cell = col.cells[j];
        if (cell.kind != StackCell::Kind::Band) continue;
        if (bound_at(c, col, cell, false, x) < y && y < bound_at(c, col, cell, true, x)) {
          ++hits;
          hit = j;
        }
      }
      CAPTURE(name);
      CAPTURE(x);
      CAPTURE(y);
      CHECK(hits == 1);
      const auto [lc, lk] = locate(c, x, y);
      CHECK(lc == ci);
      CHECK(lk == hit);
      ++checked;
    }
    CHECK(checked > 5000);
  }
}

TEST_CASE("property: cell labels agree with membership") {
  auto rng = testing::rng_for(41);
  for (const std::string name : {"disk", "annulus", "two_disks", "cusp", "slit_disk", "bars"}) {
    const DomainSpec s = testing::corpus(std::string(name));
    const ParamVector t = s.param_count() ? ParamVector{0.6} : ParamVector{};
    const std::vector<Polynomial> extra =
        s.param_count() ? std::vector<Polynomial>{} : std::vector<Polynomial>{Polynomial::variable(2, 1)};
    const CellComplex2D c = cell_decompose_2d(s, t, 32, extra);
    const Fiber f(s, t);
    for (const auto& col : c.columns) {
      if (col.section) continue;
      for (int k = 0; k < 32; ++k) {
        const double x = col.x_lo + (0.02 + 0.96 * unit_double(rng)) * (col.x_hi - col.x_lo);
        // Stack bounds recomputed from the curves at x; the stored samples
        // only pin them at the column abscissae.
        std::vector<double> roots;
        for (double r : curve_roots(c, x))
          if (roots.empty() || r - roots.back() > 1e-9) roots.push_back(r);
        CAPTURE(name);
        CAPTURE(x);
        REQUIRE(col.cells.size() == 2 * roots.size() + 1);
        for (std::size_t j = 0; j < col.cells.size(); ++j) {
          const auto& cell = col.cells[j];
          if (cell.kind == StackCell::Kind::Band) {
            const double lo = j == 0 ? c.y_box.lo : roots[j / 2 - 1];
            const double hi = j + 1 == col.cells.size() ? c.y_box.hi : roots[j / 2];
            const double y = lo + (0.02 + 0.96 * unit_double(rng)) * (hi - lo);
            CAPTURE(y);
            CHECK(f.contains({x, y, 0}) == (cell.label == CellLabel::Inside));
          } else {
            const double y = roots[j / 2];
            CAPTURE(y);
            if (cell.label == CellLabel::Inside) {
              CHECK(f.contains({x, y, 0}));
            } else if (cell.label == CellLabel::Outside) {
              CHECK_FALSE(f.contains({x, y, 0}));
            } else {
              bool on_atom = false;
              for (std::size_t i = 0; i < f.atom_count(); ++i) on_atom = on_atom || std::abs(f.atom_value(i, {x, y, 0})) < 1e-9;
              CHECK(on_atom);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("property: band integral matches the raster volume") {
  for (const char* name : {"disk", "annulus", "two_disks", "cusp", "ellipse", "bars", "square"}) {
    const DomainSpec s = testing::corpus(std::string(name));
    for (double tv : {0.3, 1.0}) {
      const ParamVector t = s.param_count() ? ParamVector{std::max(tv, s.param_box[0].lo)} : ParamVector{};
      const CellComplex2D c = cell_decompose_2d(s, t, 32);
      const double v = volume(rasterize(s, t, 512));
      CAPTURE(name);
      CHECK(band_integral(c) == doctest::Approx(v).epsilon(0.03));
    }
  }
}

TEST_CASE("property: tallest band matches the discrete e2 thickness") {
  for (const char* name : {"disk", "annulus", "two_disks", "cusp", "ellipse", "bars"}) {
    const DomainSpec s = testing::corpus(std::string(name));
    const ParamVector t = s.param_count() ? ParamVector{0.9} : ParamVector{};
    const RasterDomain r = rasterize(s, t, 256);
    const CellComplex2D c = merge_vertical(cell_decompose_2d(s, t, 32));
    CAPTURE(name);
    CHECK(std::abs(max_band_height(c) - thickness_discrete(r, 1)) <= 3 * r.h);
  }
}

TEST_CASE("exports") {
  const CellComplex2D c = cell_decompose_2d(testing::corpus("annulus"), {}, 16);
  std::ostringstream js;
  write_cells_json(c, js);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["criticals"].size() == 4);
  CHECK(j["inside_bands"] == 4);
  CHECK(j["c1_certified"] == false);
  CHECK(j["columns"].size() == c.columns.size());
  std::ostringstream dot;
  write_cells_dot(c, dot);
  CHECK(dot.str().rfind("graph", 0) == 0);
  CHECK(dot.str().find("palegreen") != std::string::npos);
}
