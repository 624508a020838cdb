#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "poincare/error.hpp"
#include "poincare/raster.hpp"
#include "poincare/thickness.hpp"
#include "support.hpp"

using namespace poincare;

namespace {

// Per-cell membership count straight from member(), independent of the raster.
std::size_t brute_force_count(const DomainSpec& s, const ParamVector& t, int resolution) {
  double longest = 0.0;
  for (const auto& b : s.bounding_box) longest = std::max(longest, b.width());
  const double h = longest / resolution;
  std::array<int, 3> n{1, 1, 1};
  for (int a = 0; a < s.ambient_dim; ++a) n[a] = static_cast<int>(std::ceil(s.bounding_box[a].width() / h - 1e-9));
  std::size_t count = 0;
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) {
        const int ijk[3] = {i, j, k};
        Point x{0, 0, 0};
        for (int a = 0; a < s.ambient_dim; ++a) x[a] = s.bounding_box[a].lo + (ijk[a] + 0.5) * h;
        if (member(s, t, x)) ++count;
      }
  return count;
}

// Ellipse x^2/4 + y^2 < 1 rotated by theta: x is inside iff R(-theta) x is
// inside the axis-aligned ellipse. Written out as a quadratic form.
DomainSpec rotated_ellipse(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double a = c * c / 4 + s * s, b = -1.5 * c * s, d = s * s / 4 + c * c;
  char buf[256];
  std::snprintf(buf, sizeof buf, "dim 2\nbox [-2.5,2.5]x[-2.5,2.5]\nset: %.12f*x^2 %c %.12f*x*y + %.12f*y^2 - 1 < 0\n", a,
                b < 0 ? '-' : '+', std::abs(b), d);
  return parse_domain(buf);
}

}  // namespace

TEST_CASE("disk raster matches the per-cell oracle") {
  const DomainSpec s = testing::corpus("disk");
  for (int r : {8, 9, 31, 64}) {
    const RasterDomain raster = rasterize(s, {}, r);
    CHECK(raster.interior_count() == brute_force_count(s, {}, r));
  }
}

TEST_CASE("property: raster counts match the oracle on every corpus member") {
  auto rng = testing::rng_for(10);
  for (const char* name : {"square", "annulus", "cusp", "slit_disk", "two_disks", "ellipse", "bars", "ball"}) {
    const DomainSpec s = testing::corpus(name);
    for (int k = 0; k < 3; ++k) {
      ParamVector t;
      for (const auto& b : s.param_box) t.push_back(uniform(rng, b.lo, b.hi));
      const int r = 5 + static_cast<int>(rng() % 20);
      CAPTURE(name);
      CAPTURE(r);
      CHECK(rasterize(s, t, r).interior_count() == brute_force_count(s, t, r));
    }
  }
}

TEST_CASE("boundary-adjacent cells have a non-interior face neighbor") {
  const RasterDomain r = rasterize(testing::corpus("annulus"), {}, 40);
  for (std::size_t c = 0; c < r.cell_count(); ++c) {
    if (!r.is_interior(c)) continue;
    const auto ijk = r.coords(c);
    bool open_face = false;
    for (int a = 0; a < 2; ++a)
      for (int o : {-1, 1}) open_face = open_face || !r.interior_neighbor(ijk, a, o);
    CHECK((r.state[c] == CellState::BoundaryAdjacent) == open_face);
  }
}

TEST_CASE("volumes") {
  CHECK(volume(rasterize(testing::corpus("disk"), {}, 512)) == doctest::Approx(std::numbers::pi).epsilon(0.01));
  const RasterDomain sq = rasterize(testing::corpus("square"), {}, 64);
  CHECK(std::abs(volume(sq) - 1.0) <= 2 * sq.h * 4);
  CHECK(volume(rasterize(testing::corpus("cusp"), {0.3}, 1024)) == doctest::Approx(0.1).epsilon(0.03));
}

TEST_CASE("thin cusp fibers are empty, not errors") {
  const DomainSpec s = testing::corpus("cusp");
  const RasterDomain r = rasterize(s, {0.05}, 8);
  CHECK(r.empty());
  CHECK(thickness_discrete(r, 0) == 0.0);
  CHECK(thickness_discrete(r, 1) == 0.0);
}

// Center sampling is not monotone under refinement (a cell can stick out of
// the set while its center is inside), so the property checked is the
// first-order error bound: |vol - exact| <= perimeter * h / 2.
TEST_CASE("property: volume error is bounded by perimeter times h") {
  struct Case {
    const char* name;
    double t;
    double area;
    double perimeter;
  };
  const double pi = std::numbers::pi;
  // Ellipse t = 1.3: semi-axes 1.3 and 1/1.3; Ramanujan's perimeter.
  const double a = 1.3, b = 1 / 1.3;
  const double ellipse_perimeter = pi * (3 * (a + b) - std::sqrt((3 * a + b) * (a + 3 * b)));
  const Case cases[] = {{"square", 0, 1, 4}, {"disk", 0, pi, 2 * pi}, {"ellipse", 1.3, pi, ellipse_perimeter},
                        {"annulus", 0, 0.75 * pi, 3 * pi}};
  for (const auto& c : cases) {
    const DomainSpec s = testing::corpus(c.name);
    const ParamVector t = s.param_count() ? ParamVector{c.t} : ParamVector{};
    for (int r : {16, 32, 64, 128, 256}) {
      const RasterDomain raster = rasterize(s, t, r);
      CAPTURE(c.name);
      CAPTURE(r);
      CHECK(std::abs(volume(raster) - c.area) <= c.perimeter * raster.h / 2);
    }
  }
}

TEST_CASE("thickness oracles") {
  SUBCASE("disk, several directions") {
    const DomainSpec s = testing::corpus("disk");
    for (double theta : {0.0, 0.3, 1.0, std::numbers::pi / 2, 2.5}) {
      const Direction d({std::cos(theta), std::sin(theta), 0}, 2);
      const ThicknessResult r = thickness(s, {}, d, 3.0 / 256 / 4, 256);
      CHECK_FALSE(r.unbounded);
      CHECK(std::abs(r.value - 2.0) <= 1e-3);
    }
  }
  SUBCASE("annulus along e1") {
    const ThicknessResult r = thickness(testing::corpus("annulus"), {}, Direction::axis(0, 2), 3.0 / 256 / 4, 256);
    CHECK(std::abs(r.value - std::sqrt(3.0)) <= 1e-2);
  }
  SUBCASE("rectangle along e2") {
    const ThicknessResult r = thickness(testing::corpus("rectangle"), {}, Direction::axis(1, 2), 2.0 / 128 / 4, 128);
    CHECK(std::abs(r.value - 1.0) <= 1e-3);
  }
  SUBCASE("strip is unbounded along e1") {
    const ThicknessResult r = thickness(testing::corpus("strip"), {}, Direction::axis(0, 2), 4.0 / 64 / 4, 64);
    CHECK(r.unbounded);
    CHECK(std::isinf(r.value));
  }
  SUBCASE("the chord stays inside") {
    const DomainSpec s = testing::corpus("annulus");
    const Fiber f(s, {});
    const ThicknessResult r = thickness(s, {}, Direction({1, 1, 0}, 2), 3.0 / 128 / 4, 128);
    for (int k = 1; k < 100; ++k) {
      const Point x = r.longest.start + (r.longest.length * k / 100.0) * r.longest.direction.vec();
      CHECK(f.contains(x));
    }
  }
}

TEST_CASE("cusp thickness along e2 is t") {
  const DomainSpec s = testing::corpus("cusp");
  for (double t : {0.1, 0.5, 1.0}) {
    const int res = 256;
    const double h = 1.0 / res;
    const ThicknessResult r = thickness(s, {t}, Direction::axis(1, 2), h / 4, res);
    CHECK(std::abs(r.value - t) <= 2 * h);
  }
}

TEST_CASE("property: thickness is invariant under rotation of coordinates") {
  // Along angle phi the ellipse x^2/4 + y^2 < 1 has its longest chord through
  // the center, of length 2 / sqrt(cos^2(phi)/4 + sin^2(phi)).
  auto rng = testing::rng_for(11);
  const int res = 200;
  const double step = 5.0 / res / 4;
  for (int k = 0; k < 4; ++k) {
    const double theta = uniform(rng, 0.0, std::numbers::pi);
    const double phi = uniform(rng, 0.0, std::numbers::pi);
    const DomainSpec base = rotated_ellipse(0.0);
    const DomainSpec rotated = rotated_ellipse(theta);
    const double a = thickness(base, {}, Direction({std::cos(phi), std::sin(phi), 0}, 2), step, res).value;
    const double b =
        thickness(rotated, {}, Direction({std::cos(phi + theta), std::sin(phi + theta), 0}, 2), step, res).value;
    const double exact = 2.0 / std::sqrt(std::cos(phi) * std::cos(phi) / 4 + std::sin(phi) * std::sin(phi));
    CAPTURE(theta);
    CAPTURE(phi);
    CHECK(std::abs(a - b) <= 2 * step);
    CHECK(std::abs(a - exact) <= 2 * step);
  }
}

TEST_CASE("discrete thickness") {
  const RasterDomain sq = rasterize(testing::corpus("square"), {}, 50);
  CHECK(thickness_discrete(sq, 0) == doctest::Approx(1.0));
  CHECK(thickness_discrete(sq, 1) == doctest::Approx(1.0));
  const RasterDomain bars = rasterize(testing::corpus("bars"), {}, 100);
  CHECK(std::abs(thickness_discrete(bars, 1) - 0.2) <= bars.h);
  CHECK(thickness_discrete(bars, 0) == doctest::Approx(1.0));
}

TEST_CASE("property: discrete thickness never exceeds the continuous one by more than 2h") {
  auto rng = testing::rng_for(12);
  for (const char* name : {"square", "disk", "annulus", "cusp", "two_disks", "bars", "ellipse", "slit_disk"}) {
    const DomainSpec s = testing::corpus(name);
    ParamVector t;
    for (const auto& b : s.param_box) t.push_back(uniform(rng, b.lo, b.hi));
    const int res = 65;
    const RasterDomain r = rasterize(s, t, res);
    for (int axis = 0; axis < 2; ++axis) {
      const double cont = thickness(Fiber(s, t), r, Direction::axis(axis, 2), r.h / 4).value;
      CAPTURE(name);
      CAPTURE(axis);
      CHECK(thickness_discrete(r, axis) <= cont + 2 * r.h);
    }
  }
}

TEST_CASE("local components") {
  const RasterDomain disk = rasterize(testing::corpus("disk"), {}, 301);
  CHECK(local_components(disk, {1, 0, 0}, 0.2) == 1);
  CHECK(local_components(disk, {5, 5, 0}, 0.2) == 0);
  const RasterDomain slit = rasterize(testing::corpus("slit_disk"), {}, 301);
  CHECK(local_components(slit, {0.5, 0, 0}, 0.1) == 2);
  CHECK(local_components(slit, {-0.5, 0, 0}, 0.1) == 1);
  const RasterDomain cusp = rasterize(testing::corpus("cusp"), {1.0}, 512);
  CHECK(local_components(cusp, {0.1, 0.0, 0}, 0.05) == 1);
}

TEST_CASE("mask and graymap dumps") {
  const RasterDomain r = rasterize(testing::corpus("disk"), {}, 16);
  const auto dir = std::filesystem::temp_directory_path() / "poincare_test_raster";
  std::filesystem::create_directories(dir);
  write_pgm(r, dir / "m.pgm");
  write_mask(r, dir / "m.bin", dir / "m.json");
  CHECK(std::filesystem::file_size(dir / "m.bin") == r.cell_count());
  std::ifstream pgm(dir / "m.pgm", std::ios::binary);
  std::string magic;
  int w = 0, h = 0, maxv = 0;
  pgm >> magic >> w >> h >> maxv;
  CHECK(magic == "P5");
  CHECK(w == r.counts[0]);
  CHECK(h == r.counts[1]);
  CHECK(maxv == 255);
  pgm.get();
  std::vector<unsigned char> pix(static_cast<std::size_t>(w) * h);
  pgm.read(reinterpret_cast<char*>(pix.data()), static_cast<std::streamsize>(pix.size()));
  std::size_t nonzero = 0;
  for (auto v : pix) nonzero += v != 0;
  CHECK(nonzero == r.interior_count());
}
