#include <doctest.h>

#include <cmath>
#include <numbers>

#include "poincare/error.hpp"
#include "poincare/raster.hpp"
#include "poincare/trace.hpp"
#include "support.hpp"

using namespace poincare;

namespace {

constexpr double kPi = std::numbers::pi;

struct Setup {
  DomainSpec spec;
  RasterDomain raster;
  BoundaryMesh mesh;
};

Setup setup(const char* name, int res, ParamVector t = {}) {
  Setup s{testing::corpus(name), {}, {}};
  s.raster = rasterize(s.spec, t, res);
  s.mesh = extract_boundary(Fiber(s.spec, t), s.raster);
  return s;
}

}  // namespace

TEST_CASE("boundary measures") {
  CHECK(setup("disk", 256).mesh.measure() == doctest::Approx(2 * kPi).epsilon(0.01));
  CHECK(setup("square", 128).mesh.measure() == doctest::Approx(4.0).epsilon(0.01));
  CHECK(setup("annulus", 256).mesh.measure() == doctest::Approx(3 * kPi).epsilon(0.01));
  CHECK(setup("interval", 64).mesh.measure() == doctest::Approx(2.0));
  CHECK(setup("ball", 48).mesh.measure() == doctest::Approx(4 * kPi).epsilon(0.03));
  // The slit counts from both sides.
  CHECK(setup("slit_disk", 257).mesh.measure() == doctest::Approx(2 * kPi + 2).epsilon(0.01));
}

TEST_CASE("boundary vertices sit on the boundary") {
  const Setup s = setup("disk", 64);
  for (const auto& piece : s.mesh.pieces)
    for (const auto& v : piece) CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("constant function on the disk") {
  const Setup s = setup("disk", 256);
  const TraceValue v = trace_ratio({"one", [](const Point&) { return 1.0; }}, s.raster, s.mesh, 2.0);
  CHECK(v.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.03));
  CHECK(v.w_norm == doctest::Approx(v.lp_norm));
}

TEST_CASE("affine function against closed-form integrals") {
  // phi = 1 + x on the unit disk, p = 2: boundary integral 3 pi, L^2 integral
  // 5 pi / 4, gradient integral pi.
  const Setup s = setup("disk", 256);
  const TraceValue v = trace_ratio({"1+x", [](const Point& x) { return 1.0 + x[0]; }}, s.raster, s.mesh, 2.0);
  CHECK(v.boundary_norm == doctest::Approx(std::sqrt(3 * kPi)).epsilon(0.01));
  CHECK(v.lp_norm == doctest::Approx(std::sqrt(5 * kPi / 4)).epsilon(0.01));
  CHECK(v.w_norm == doctest::Approx(std::sqrt(9 * kPi / 4)).epsilon(0.01));
  const double expect = std::sqrt(3 * kPi) / (std::pow(5 * kPi / 4, 0.25) * std::pow(9 * kPi / 4, 0.25));
  CHECK(v.ratio == doctest::Approx(expect).epsilon(0.03));
}

TEST_CASE("constant on the interval") {
  const Setup s = setup("interval", 512);
  for (double p : {1.0, 2.0, 3.0}) {
    const TraceValue v = trace_ratio({"one", [](const Point&) { return 1.0; }}, s.raster, s.mesh, p);
    CHECK(v.ratio == doctest::Approx(std::pow(2.0, 1 / p)).epsilon(0.01));
  }
}

TEST_CASE("property: the ratio is invariant under scaling") {
  const Setup s = setup("annulus", 96);
  auto rng = testing::rng_for(50);
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    const double a = uniform(rng, -1, 1), b = uniform(rng, -1, 1);
    auto phi = [a, b](const Point& x) { return std::cos(a * x[0]) + b * x[1] * x[1]; };
    const double base = trace_ratio({"phi", phi}, s.raster, s.mesh, p).ratio;
    for (int i = 2; i <= 5; ++i) {
      const double scaled = trace_ratio({"phi/i", [&](const Point& x) { return phi(x) / i; }}, s.raster, s.mesh, p).ratio;
      CHECK(scaled == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("bumps vanish on the boundary") {
  for (const char* name : {"disk", "annulus", "square", "ball"}) {
    const Setup s = setup(name, name == std::string("ball") ? 32 : 128);
    for (const auto& f : trace_battery("bump", s.raster, s.mesh)) {
      const TraceValue v = trace_ratio(f, s.raster, s.mesh, 2.0);
      CAPTURE(name);
      CAPTURE(f.name);
      CHECK(v.lp_norm > 0.0);
      CHECK(v.boundary_norm <= 1e-3 * v.lp_norm);
    }
  }
}

TEST_CASE("battery reports are stable under doubling") {
  for (const char* battery : {"polynomial", "trigonometric", "bump"}) {
    const TraceReport r = trace_ratio_battery(testing::corpus("disk"), {}, 128, 2.0, battery);
    CAPTURE(battery);
    CHECK(r.stable);
    CHECK(stable_pair(r.sup, r.sup_fine));
    CHECK(r.resolution == 128);
    CHECK(fine_resolution(128) == 256);
    for (const auto& f : r.functions) CHECK(f.stable);
  }
  const TraceReport slit = trace_ratio_battery(testing::corpus("slit_disk"), {}, 129, 2.0, "polynomial");
  CHECK(fine_resolution(129) % 2 == 1);
  CHECK(slit.stable);
  CHECK(slit.boundary_measure_fine == doctest::Approx(2 * kPi + 2).epsilon(0.01));
}

TEST_CASE("stability rule") {
  CHECK(stable_pair(1.0, 1.09));
  CHECK_FALSE(stable_pair(1.0, 1.2));
  CHECK(stable_pair(1e-4, 5e-4));
  CHECK_FALSE(stable_pair(1e-4, 5e-2));
}

TEST_CASE("empty fibers are refused") {
  CHECK_THROWS_AS(trace_ratio_battery(testing::corpus("cusp"), {0.05}, 8, 2.0, "polynomial"), EmptyFiber);
}
