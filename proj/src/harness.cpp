#include "poincare/harness.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "poincare/error.hpp"
#include "poincare/parallel.hpp"
#include "poincare/raster.hpp"
#include "poincare/sobolev.hpp"

namespace poincare {

double FiberRecord::constant_ratio(int dim) const { return constant / std::pow(volume, 1.0 / dim); }

double FiberRecord::thickness_ratio(int dim) const { return thickness / std::pow(volume, 1.0 / dim); }

std::vector<ParamVector> parameter_grid(const DomainSpec& spec, const std::vector<int>& counts) {
  const std::size_t k = spec.param_box.size();
  if (counts.size() != k) throw std::invalid_argument("need one grid count per parameter");
  std::vector<std::vector<double>> axes(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (counts[i] < 1) throw std::invalid_argument("grid counts must be positive");
    const auto& b = spec.param_box[i];
    if (counts[i] == 1) {
      axes[i].push_back(0.5 * (b.lo + b.hi));
      continue;
    }
    for (int j = 0; j < counts[i]; ++j)
      axes[i].push_back(j == counts[i] - 1 ? b.hi : b.lo + b.width() * j / (counts[i] - 1));
  }
  std::vector<ParamVector> out{{}};
  for (const auto& axis : axes) {
    std::vector<ParamVector> next;
    for (const auto& prefix : out)
      for (double v : axis) {
        auto t = prefix;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<ParamVector> coarse_subgrid(const std::vector<ParamVector>& grid) {
  if (grid.empty() || grid.front().empty()) return grid;
  const std::size_t k = grid.front().size();
  std::vector<std::set<double>> keep(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::set<double> values;
    for (const auto& t : grid) values.insert(t[i]);
    std::vector<double> v(values.begin(), values.end());
    keep[i] = {v.front(), v[v.size() / 2], v.back()};
  }
  std::vector<ParamVector> out;
  for (const auto& t : grid) {
    bool in = true;
    for (std::size_t i = 0; i < k; ++i) in = in && keep[i].count(t[i]) > 0;
    if (in) out.push_back(t);
  }
  return out;
}

namespace {

FiberRecord evaluate_fiber(const DomainSpec& spec, const ParamVector& t, double p, int resolution,
                           const Direction& lambda, const SweepOptions& options) {
  FiberRecord rec;
  rec.t = t;
  try {
    const RasterDomain raster = rasterize(spec, t, resolution);
    if (raster.empty()) {
      rec.empty = true;
      return rec;
    }
    rec.volume = volume(raster);
    const PoincareEstimate est = poincare_constant(raster, p, options.tol, options.seed, 1);
    rec.constant = est.constant;
    rec.method = est.method;
    rec.iterations = est.iterations;
    rec.residual = est.residual;
    rec.restart_spread = est.restart_spread;
    rec.stagnation_warning = est.stagnation_warning;
    const CheckRecord check = verify_theorem_p1(spec, t, raster, est, lambda);
    rec.thickness = check.thickness;
    rec.bound = check.bound;
    rec.slack = check.slack;
    rec.pass = check.pass;
  } catch (const Error& e) {
    rec.error_code = e.code();
    rec.error_message = e.what();
    rec.pass = false;
  }
  return rec;
}

}  // namespace

bool recomputed_pass(const FiberRecord& r) { return r.evaluated() && r.constant <= r.bound * (1.0 + r.slack); }

void aggregate(SweepReport& report) {
  report.sup_constant_ratio = 0.0;
  report.sup_thickness_ratio = 0.0;
  report.sup_constant_t.clear();
  report.sup_thickness_t.clear();
  report.failures = report.errors = report.empties = 0;
  for (const auto& r : report.records) {
    if (r.empty) {
      ++report.empties;
      continue;
    }
    if (!r.error_code.empty()) {
      ++report.errors;
      continue;
    }
    if (!r.pass) ++report.failures;
    const double c = r.constant_ratio(report.dim);
    if (std::isfinite(c) && c > report.sup_constant_ratio) {
      report.sup_constant_ratio = c;
      report.sup_constant_t = r.t;
    }
    const double k = r.thickness_ratio(report.dim);
    if (std::isfinite(k) && k > report.sup_thickness_ratio) {
      report.sup_thickness_ratio = k;
      report.sup_thickness_t = r.t;
    }
  }
}

SweepReport sweep(const DomainSpec& spec, double p, std::vector<ParamVector> grid, int resolution,
                  const std::optional<Direction>& lambda, const SweepOptions& options) {
  if (grid.empty()) throw std::invalid_argument("empty parameter grid");
  for (const auto& t : grid) {
    if (t.size() != spec.param_box.size()) throw std::invalid_argument("parameter vector has the wrong length");
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] < spec.param_box[i].lo || t[i] > spec.param_box[i].hi)
        throw ParameterOutOfRange("parameter " + spec.param_names[i] + " = " + std::to_string(t[i]) +
                                  " outside the parameter box");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  SweepReport rep;
  rep.dim = spec.ambient_dim;
  rep.p = p;
  rep.resolution = resolution;
  rep.grid = grid;
  rep.direction_grid = coarse_subgrid(grid);
  rep.auto_direction = !lambda.has_value();
  auto [fine, coarse] = sample_family(spec, rep.direction_grid, options.samples, options.seed, options.jobs);
  MarginReport margin;
  try {
    margin = lambda ? margin_report(fine, coarse, *lambda)
                    : find_regular_direction(spec.ambient_dim, fine, coarse, options.directions, options.seed, options.jobs);
  } catch (const EmptySamples&) {
    if (!lambda) throw;
    margin.direction = *lambda;
  }
  rep.direction = margin.direction;
  rep.alpha = margin.alpha;
  rep.alpha_coarse = margin.alpha_coarse;
  rep.no_regular_direction = margin.no_regular_direction;

  rep.records.resize(grid.size());
  parallel_for(grid.size(), options.jobs, [&](std::size_t i) {
    rep.records[i] = evaluate_fiber(spec, grid[i], p, resolution, rep.direction, options);
  });
  aggregate(rep);
  return rep;
}

double lemma_constant(double alpha, int dim) {
  const double l = std::sqrt(std::max(0.0, 1.0 - alpha * alpha)) / alpha;
  return 4.0 * std::pow(l, 1.0 - 1.0 / dim) * (1.0 + 1e-6);
}

LemmaResult verify_lemma_bound(const SweepReport& report, double k) {
  if (!(report.alpha > 0.0)) throw NotApplicable("the sweep direction has no positive margin");
  LemmaResult res;
  res.k = k;
  res.alpha = report.alpha;
  res.no_regular_direction = report.no_regular_direction;
  res.lipschitz = std::sqrt(std::max(0.0, 1.0 - report.alpha * report.alpha)) / report.alpha;
  res.k_paper = lemma_constant(report.alpha, report.dim);
  res.k_star = report.sup_thickness_ratio;
  res.worst_t = report.sup_thickness_t;
  res.pass = res.k_star <= k;
  res.within_paper = res.k_star <= res.k_paper;
  return res;
}

UniformTrend verify_main_uniform(const std::vector<SweepReport>& reports) {
  if (reports.size() < 2) throw std::invalid_argument("verify_main_uniform needs at least two resolutions");
  UniformTrend tr;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i > 0 && reports[i].resolution <= reports[i - 1].resolution)
      throw std::invalid_argument("reports must have increasing resolution");
    tr.resolutions.push_back(reports[i].resolution);
    tr.empirical.push_back(reports[i].sup_constant_ratio);
  }
  tr.bounded = std::all_of(tr.empirical.begin(), tr.empirical.end(), [](double c) { return std::isfinite(c) && c > 0.0; });
  const std::size_t n = tr.empirical.size();
  const double c1 = tr.empirical[n - 2];
  const double c2 = tr.empirical[n - 1];
  tr.last_change = (c2 - c1) / c1;
  // Richardson extrapolation in h; the ratio of resolutions at the finest
  // pair sets the refinement factor.
  const double r = static_cast<double>(tr.resolutions[n - 1]) / tr.resolutions[n - 2];
  tr.order = 1.0;
  if (n >= 3) {
    const double c0 = tr.empirical[n - 3];
    const double q = (c1 - c0) / (c2 - c1);
    const double r0 = static_cast<double>(tr.resolutions[n - 2]) / tr.resolutions[n - 3];
    if (std::isfinite(q) && q > 1.0 && std::abs(r0 - r) < 1e-12) tr.order = std::log(q) / std::log(r);
  }
  tr.asymptote = c2 + (c2 - c1) / (std::pow(r, tr.order) - 1.0);
  tr.pass = tr.bounded && std::abs(tr.last_change) <= 0.1;
  tr.status = tr.pass ? "ok" : "InconclusiveRefinement";
  return tr;
}

}  // namespace poincare
