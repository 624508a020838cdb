// Acceptance suite: one line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "poincare/cells.hpp"
#include "poincare/cli.hpp"
#include "poincare/error.hpp"
#include "poincare/harness.hpp"
#include "poincare/raster.hpp"
#include "poincare/sobolev.hpp"
#include "poincare/tangent.hpp"
#include "poincare/thickness.hpp"
#include "poincare/trace.hpp"

using namespace poincare;
namespace fs = std::filesystem;

namespace tol {
// Criterion 1
constexpr double interval_c2 = 0.01;
constexpr double square_c2 = 0.01;
constexpr double disk_c2 = 0.02;
constexpr double seconds_per_solve = 60.0;
// Criterion 4
constexpr double disk_thickness = 1e-3;
constexpr double annulus_thickness = 1e-2;
constexpr double cusp_thickness_cells = 2.0;  // in units of h
// Criterion 5
constexpr double circle_margin = 1e-2;
constexpr double cusp_margin = 1e-3;
// Criterion 7
constexpr double uniform_change = 0.10;
// Criterion 8
constexpr double band_volume = 0.03;
// Criterion 9
constexpr double disk_constant_ratio = 0.03;
constexpr double bump_leak = 1e-3;
constexpr double doubling = 0.10;
}  // namespace tol

namespace {

constexpr double kJ01 = 2.404825557695773;

DomainSpec corpus(const std::string& name) { return load_domain(std::string(CORPUS_DIR) + "/" + name + ".dom"); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void eigenvalue_targets(Outcome& o) {
  struct Case {
    const char* name;
    int res;
    double target;
    double tolerance;
  };
  const Case cases[] = {{"interval", 2048, 1 / std::numbers::pi, tol::interval_c2},
                        {"square", 512, 1 / (std::numbers::pi * std::sqrt(2.0)), tol::square_c2},
                        {"disk", 512, 1 / kJ01, tol::disk_c2}};
  for (const auto& c : cases) {
    const RasterDomain r = rasterize(corpus(c.name), {}, c.res);
    const auto t0 = std::chrono::steady_clock::now();
    const PoincareEstimate e = poincare_p2(r, 1e-8);
    const double secs = seconds_since(t0);
    const double rel = std::abs(e.constant - c.target) / c.target;
    o.detail << c.name << "@" << c.res << " C2=" << fmt("%.5f", e.constant) << " rel=" << fmt("%.2e", rel)
             << " t=" << fmt("%.1fs", secs) << "; ";
    o.require(rel <= c.tolerance, std::string(c.name) + " within tolerance");
    o.require(secs <= tol::seconds_per_solve, std::string(c.name) + " within time budget");
  }
}

void theorem_per_fiber(Outcome& o) {
  struct Case {
    const char* name;
    ParamVector t;
    int res;
  };
  const Case cases[] = {{"square", {}, 128},    {"disk", {}, 128},      {"annulus", {}, 128},  {"cusp", {0.1}, 128},
                        {"cusp", {0.5}, 128},   {"cusp", {1.0}, 128},   {"slit_disk", {}, 129}};
  int checks = 0, failures = 0;
  double worst = 0.0;
  for (const auto& c : cases) {
    const DomainSpec s = corpus(c.name);
    const RasterDomain r = rasterize(s, c.t, c.res);
    for (double p : {1.0, 2.0, 3.0}) {
      const PoincareEstimate est = poincare_constant(r, p, 1e-8, 0);
      for (int axis = 0; axis < 2; ++axis) {
        const CheckRecord rec = verify_theorem_p1(s, c.t, r, est, Direction::axis(axis, 2));
        ++checks;
        worst = std::max(worst, rec.constant / rec.bound);
        if (!rec.pass) {
          ++failures;
          o.detail << c.name << (c.t.empty() ? "" : fmt(" t=%g", c.t[0])) << " p=" << p << " axis=" << axis
                   << " C=" << rec.constant << " B=" << rec.bound << "; ";
        }
      }
    }
  }
  o.detail << checks << " checks, " << failures << " failures, worst C/B=" << fmt("%.4f", worst);
  o.require(failures == 0, "zero failures");
}

void exact_discrete(Outcome& o) {
  const char* names[] = {"interval", "square", "rectangle", "disk", "circle", "annulus", "cusp", "slit_disk",
                         "two_disks", "ellipse", "strip", "strips", "bars", "ball"};
  int checks = 0, failures = 0;
  double worst = 0.0;
  for (const char* name : names) {
    const DomainSpec s = corpus(name);
    std::vector<ParamVector> ts{{}};
    if (s.param_count() == 1) ts = {{s.param_box[0].lo}, {0.5 * (s.param_box[0].lo + s.param_box[0].hi)}, {s.param_box[0].hi}};
    for (const auto& t : ts) {
      const RasterDomain r = rasterize(s, t, s.ambient_dim == 3 ? 24 : std::string(name) == "slit_disk" ? 65 : 64);
      if (r.empty()) continue;
      for (int axis = 0; axis < s.ambient_dim; ++axis)
        for (double p : {1.0, 1.5, 2.0, 4.0}) {
          const CheckRecord rec = discrete_p1_exact(r, axis, p, 100, 0);
          ++checks;
          worst = std::max(worst, rec.constant);
          if (!rec.pass || rec.constant > 1.0) {
            ++failures;
            o.detail << name << " axis=" << axis << " p=" << p << " ratio=" << rec.constant << "; ";
          }
        }
    }
  }
  o.detail << checks << " raster/axis/p combinations x 100 fields, worst ratio=" << fmt("%.6f", worst);
  o.require(failures == 0, "worst ratio <= 1 everywhere");
}

void thickness_oracles(Outcome& o) {
  const DomainSpec disk = corpus("disk");
  const int res = 256;
  double worst_disk = 0.0;
  for (int k = 0; k < 12; ++k) {
    const double a = std::numbers::pi * k / 12 + 0.01;
    const double v = thickness(disk, {}, Direction({std::cos(a), std::sin(a), 0}, 2), 3.0 / res / 4, res).value;
    worst_disk = std::max(worst_disk, std::abs(v - 2.0));
  }
  o.detail << "disk max|T-2|=" << fmt("%.2e", worst_disk);
  o.require(worst_disk <= tol::disk_thickness, "disk");

  const double ann = thickness(corpus("annulus"), {}, Direction::axis(0, 2), 3.0 / res / 4, res).value;
  o.detail << "; annulus e1 T=" << fmt("%.5f", ann);
  o.require(std::abs(ann - std::sqrt(3.0)) <= tol::annulus_thickness, "annulus");

  const DomainSpec cusp = corpus("cusp");
  const double h = 1.0 / res;
  double worst_cusp = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double t = 0.1 * k;
    const double v = thickness(cusp, {t}, Direction::axis(1, 2), h / 4, res).value;
    worst_cusp = std::max(worst_cusp, std::abs(v - t) / h);
  }
  o.detail << "; cusp e2 max|T-t|/h=" << fmt("%.3f", worst_cusp);
  o.require(worst_cusp <= tol::cusp_thickness_cells, "cusp");
}

void regular_directions(Outcome& o) {
  const auto circle = sample_boundary(corpus("circle"), {}, 4096, 0);
  double worst = 0.0;
  const auto dirs = candidate_directions(2, 512, 0);
  for (const auto& d : dirs) worst = std::max(worst, margin(circle.samples, d));
  o.detail << "circle: max margin over " << dirs.size() << " candidates=" << fmt("%.2e", worst);
  o.require(worst < tol::circle_margin, "circle margin");

  const auto cusp = sample_boundary(corpus("cusp"), {1.0}, 4096, 0);
  std::vector<BoundarySample> graph;
  for (const auto& b : cusp.samples)
    if (b.atom == 3 && b.x[0] > 0 && b.x[0] < 1) graph.push_back(b);
  const double m = margin(graph, Direction::axis(1, 2));
  o.detail << "; cusp t=1 graph along e2=" << fmt("%.5f", m) << " (" << graph.size() << " samples)";
  o.require(std::abs(m - 1 / std::sqrt(5.0)) <= tol::cusp_margin, "cusp margin");
}

struct FamilyRuns {
  SweepReport coarse;
  SweepReport fine;
};

FamilyRuns family(const std::string& name, const std::vector<ParamVector>& grid) {
  return {sweep(corpus(name), 2.0, grid, 256, std::nullopt), sweep(corpus(name), 2.0, grid, 512, std::nullopt)};
}

void lemma_check(Outcome& o, const std::vector<std::pair<std::string, const FamilyRuns*>>& runs) {
  for (const auto& [name, f] : runs) {
    const SweepReport& r = f->coarse;
    const double kp = lemma_constant(r.alpha, r.dim);
    const LemmaResult l = verify_lemma_bound(r, kp);
    o.detail << name << ": alpha=" << fmt("%.4g", l.alpha) << " K*=" << fmt("%.4f", l.k_star)
             << " K_paper=" << fmt("%.4g", l.k_paper) << (l.no_regular_direction ? " (alpha still shrinking)" : "")
             << "; ";
    o.require(l.pass && l.within_paper, name + " K* <= 4 L^(1-1/n)");
  }
}

void uniform_trend(Outcome& o, const std::vector<std::pair<std::string, const FamilyRuns*>>& runs) {
  for (const auto& [name, f] : runs) {
    const UniformTrend tr = verify_main_uniform({f->coarse, f->fine});
    o.detail << name << ": sup C2/vol^(1/2) " << fmt("%.5f", tr.empirical[0]) << " -> " << fmt("%.5f", tr.empirical[1])
             << " change=" << fmt("%+.2f%%", 100 * tr.last_change) << " failures=" << f->fine.failures + f->coarse.failures
             << "; ";
    o.require(tr.bounded && std::abs(tr.last_change) <= tol::uniform_change, name + " change within 10%");
    o.require(f->coarse.errors + f->fine.errors == 0, name + " no fiber errors");
  }
}

void cells(Outcome& o) {
  const std::pair<const char*, int> expect[] = {{"disk", 1}, {"two_disks", 2}, {"annulus", 4}};
  for (const auto& [name, n] : expect) {
    const DomainSpec s = corpus(name);
    const CellComplex2D c = cell_decompose_2d(s, {}, 32);
    const double bands = band_integral(c);
    const double vol = volume(rasterize(s, {}, 512));
    const double rel = std::abs(bands - vol) / vol;
    o.detail << name << ": cells=" << c.inside_band_count() << " volume rel diff=" << fmt("%.2e", rel) << "; ";
    o.require(c.inside_band_count() == n, std::string(name) + " count");
    o.require(rel <= tol::band_volume, std::string(name) + " volume");
  }
}

void trace(Outcome& o) {
  const TraceReport poly = trace_ratio_battery(corpus("disk"), {}, 256, 2.0, "polynomial");
  double one = 0.0;
  for (const auto& f : poly.functions)
    if (f.name == "one") one = f.coarse.ratio;
  o.detail << "disk constant ratio=" << fmt("%.5f", one);
  o.require(std::abs(one - std::sqrt(2.0)) <= tol::disk_constant_ratio * std::sqrt(2.0), "constant ratio");

  double leak = 0.0;
  for (const char* name : {"disk", "annulus", "cusp"}) {
    const ParamVector t = std::string(name) == "cusp" ? ParamVector{1.0} : ParamVector{};
    const TraceReport bump = trace_ratio_battery(corpus(name), t, 128, 2.0, "bump");
    for (const auto& f : bump.functions)
      for (const TraceValue* v : {&f.coarse, &f.fine}) leak = std::max(leak, v->boundary_norm / v->lp_norm);
  }
  o.detail << "; worst bump boundary/interior=" << fmt("%.2e", leak);
  o.require(leak <= tol::bump_leak, "bump leak");

  double drift = 0.0;
  for (const auto& [name, res] : std::vector<std::pair<const char*, int>>{{"disk", 128}, {"annulus", 128}, {"slit_disk", 129}}) {
    for (const char* battery : {"polynomial", "trigonometric", "bump"}) {
      const TraceReport r = trace_ratio_battery(corpus(name), {}, res, 2.0, battery);
      if (r.sup > 1e-3 || r.sup_fine > 1e-3) drift = std::max(drift, std::abs(r.sup_fine - r.sup) / std::max(r.sup, r.sup_fine));
      o.require(r.stable, std::string(name) + " " + battery + " stable");
    }
  }
  o.detail << "; worst sup drift under doubling=" << fmt("%.2f%%", 100 * drift);
  o.require(drift <= tol::doubling, "doubling");
}

void determinism(Outcome& o) {
  const std::string dir = CORPUS_DIR;
  const std::vector<std::vector<std::string>> runs = {
      {"check", "--spec", dir + "/cusp.dom", "--t", "0.5", "--res", "64", "--p", "1.5", "--dir", "e2"},
      {"sweep", "--spec", dir + "/ellipse.dom", "--grid", "3", "--res", "48"},
      {"lemma", "--spec", dir + "/cusp.dom", "--grid", "3", "--res", "48"},
      {"uniform", "--spec", dir + "/cusp.dom", "--grid", "3", "--res", "32,64"},
      {"thickness", "--spec", dir + "/annulus.dom", "--res", "64"},
      {"regdir", "--spec", dir + "/cusp.dom"},
      {"cells", "--spec", dir + "/annulus.dom"},
      {"trace", "--spec", dir + "/disk.dom", "--res", "64"},
      {"raster", "--spec", dir + "/slit_disk.dom", "--res", "65"},
  };
  for (const auto& base : runs) {
    std::string bytes[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = fs::temp_directory_path() / ("poincare_acceptance_" + base[0] + std::to_string(k));
      fs::remove_all(out);
      auto args = base;
      for (const char* extra : {"--seed", "0", "--jobs", "1", "--out"}) args.push_back(extra);
      args.push_back(out.string());
      std::ostringstream sink;
      run(args, sink, sink);
      std::ifstream f(out / "report.json", std::ios::binary);
      std::ostringstream s;
      s << f.rdbuf();
      bytes[k] = s.str();
    }
    const bool same = !bytes[0].empty() && bytes[0] == bytes[1];
    o.detail << base[0] << (same ? " identical" : " DIFFERENT") << "; ";
    o.require(same, base[0] + " byte-identical");
  }
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " " << title << " (" << fmt("%.1fs", seconds_since(t0))
              << "): " << o.detail.str() << std::endl;
  };

  FamilyRuns cusp, ellipse;
  bool families_ok = true;
  std::string family_error;
  try {
    std::vector<ParamVector> cusp_grid;
    for (int k = 1; k <= 10; ++k) cusp_grid.push_back({0.1 * k});
    cusp = family("cusp", cusp_grid);
    ellipse = family("ellipse", parameter_grid(corpus("ellipse"), {7}));
  } catch (const std::exception& e) {
    families_ok = false;
    family_error = e.what();
  }
  const std::vector<std::pair<std::string, const FamilyRuns*>> families{{"cusp", &cusp}, {"ellipse", &ellipse}};
  auto with_families = [&](auto fn) {
    return [&, fn](Outcome& o) {
      if (!families_ok) throw std::runtime_error("family sweeps failed: " + family_error);
      fn(o, families);
    };
  };

  report(1, "eigenvalue targets", eigenvalue_targets);
  report(2, "theorem bound per fiber", theorem_per_fiber);
  report(3, "exact discrete inequality", exact_discrete);
  report(4, "thickness oracles", thickness_oracles);
  report(5, "regular directions", regular_directions);
  report(6, "lemma bound", with_families(lemma_check));
  report(7, "uniform bound trend", with_families(uniform_trend));
  report(8, "cell decomposition", cells);
  report(9, "trace battery", trace);
  report(10, "determinism", determinism);
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
