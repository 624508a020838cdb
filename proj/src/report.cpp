#include "poincare/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "poincare/error.hpp"

namespace poincare {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json vec(const Point& p, int dim) {
  Json a = Json::array();
  for (int i = 0; i < dim; ++i) a.push_back(number(p[i]));
  return a;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json to_json(const Direction& d) { return vec(d.vec(), d.dim()); }

Json to_json(const Error& e) { return {{"code", e.code()}, {"message", e.what()}}; }

Json to_json(const BoxAudit& audit) {
  return {{"samples", audit.samples}, {"escapes", audit.escapes}, {"ok", audit.ok()}};
}

Json to_json(const RasterDomain& r) {
  Json j;
  j["dim"] = r.dim;
  j["h"] = number(r.h);
  j["counts"] = Json::array();
  for (int a = 0; a < r.dim; ++a) j["counts"].push_back(r.counts[a]);
  j["origin"] = vec(r.origin, r.dim);
  j["t"] = numbers(r.t);
  j["interior_cells"] = r.interior_count();
  j["volume"] = number(volume(r));
  return j;
}

Json to_json(const ThicknessResult& r) {
  Json j;
  j["value"] = number(r.value);
  j["unbounded"] = r.unbounded;
  j["direction"] = to_json(r.longest.direction);
  j["chord_start"] = vec(r.longest.start, r.longest.direction.dim());
  j["chord_length"] = number(r.longest.length);
  j["seeds"] = r.seeds;
  return j;
}

Json to_json(const PoincareEstimate& e) {
  Json j;
  j["p"] = number(e.p);
  j["constant"] = number(e.constant);
  j["method"] = e.method;
  j["h"] = number(e.h);
  j["residual"] = number(e.residual);
  j["iterations"] = e.iterations;
  if (e.method == "eigensolve") {
    j["eigenvalue"] = number(e.eigenvalue);
  } else {
    j["best_seed"] = e.best_seed;
    j["restart_spread"] = number(e.restart_spread);
    j["stagnation_warning"] = e.stagnation_warning;
  }
  return j;
}

Json to_json(const CheckRecord& r) {
  Json j;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["p"] = number(r.p);
  j["constant"] = number(r.constant);
  j["bound"] = number(r.bound);
  j["slack"] = number(r.slack);
  j["margin"] = number(r.margin);
  j["thickness"] = number(r.thickness);
  if (r.name == "discrete_p1_exact") {
    j["trials"] = r.trials;
    j["worst_raw_ratio"] = number(r.worst_raw_ratio);
  } else {
    j["estimate"] = to_json(r.estimate);
  }
  return j;
}

Json to_json(const MarginReport& r) {
  Json j;
  j["direction"] = to_json(r.direction);
  j["alpha"] = number(r.alpha);
  j["alpha_coarse"] = number(r.alpha_coarse);
  j["no_regular_direction"] = r.no_regular_direction;
  j["candidates"] = r.candidates;
  j["sample_count"] = r.sample_count;
  Json fibers = Json::array();
  for (const auto& f : r.fibers)
    fibers.push_back({{"t", numbers(f.t)},
                      {"margin", number(f.margin)},
                      {"samples", f.samples},
                      {"stratum_too_thin", f.stratum_too_thin}});
  j["fibers"] = std::move(fibers);
  return j;
}

Json to_json(const TraceReport& r) {
  Json j;
  j["battery"] = r.battery;
  j["p"] = number(r.p);
  j["resolution"] = r.resolution;
  j["resolution_fine"] = fine_resolution(r.resolution);
  j["pieces"] = r.pieces;
  j["pieces_fine"] = r.pieces_fine;
  j["boundary_measure"] = number(r.boundary_measure);
  j["boundary_measure_fine"] = number(r.boundary_measure_fine);
  auto value = [](const TraceValue& v) {
    return Json{{"boundary_norm", number(v.boundary_norm)},
                {"lp_norm", number(v.lp_norm)},
                {"w_norm", number(v.w_norm)},
                {"ratio", number(v.ratio)}};
  };
  Json fs = Json::array();
  for (const auto& f : r.functions)
    fs.push_back({{"name", f.name}, {"coarse", value(f.coarse)}, {"fine", value(f.fine)}, {"stable", f.stable}});
  j["functions"] = std::move(fs);
  j["sup"] = number(r.sup);
  j["sup_fine"] = number(r.sup_fine);
  j["stable"] = r.stable;
  return j;
}

Json to_json(const FiberRecord& r) {
  Json j;
  j["t"] = numbers(r.t);
  j["empty"] = r.empty;
  if (!r.error_code.empty()) j["error"] = {{"code", r.error_code}, {"message", r.error_message}};
  if (r.empty) return j;
  j["volume"] = number(r.volume);
  j["thickness"] = number(r.thickness);
  j["constant"] = number(r.constant);
  j["bound"] = number(r.bound);
  j["slack"] = number(r.slack);
  j["pass"] = r.pass;
  j["method"] = r.method;
  j["iterations"] = r.iterations;
  j["residual"] = number(r.residual);
  if (r.method == "rayleigh-descent") {
    j["restart_spread"] = number(r.restart_spread);
    j["stagnation_warning"] = r.stagnation_warning;
  }
  return j;
}

Json to_json(const SweepReport& r) {
  Json j;
  j["dim"] = r.dim;
  j["p"] = number(r.p);
  j["resolution"] = r.resolution;
  j["direction"] = to_json(r.direction);
  j["auto_direction"] = r.auto_direction;
  Json dg = Json::array();
  for (const auto& t : r.direction_grid) dg.push_back(numbers(t));
  j["direction_grid"] = std::move(dg);
  j["alpha"] = number(r.alpha);
  j["alpha_coarse"] = number(r.alpha_coarse);
  j["no_regular_direction"] = r.no_regular_direction;
  Json recs = Json::array();
  for (const auto& f : r.records) recs.push_back(to_json(f));
  j["records"] = std::move(recs);
  j["aggregates"] = {{"sup_constant_ratio", number(r.sup_constant_ratio)},
                     {"sup_constant_t", numbers(r.sup_constant_t)},
                     {"sup_thickness_ratio", number(r.sup_thickness_ratio)},
                     {"sup_thickness_t", numbers(r.sup_thickness_t)},
                     {"failures", r.failures},
                     {"errors", r.errors},
                     {"empties", r.empties}};
  return j;
}

Json to_json(const LemmaResult& r) {
  return {{"K", number(r.k)},
          {"K_star", number(r.k_star)},
          {"worst_t", numbers(r.worst_t)},
          {"alpha", number(r.alpha)},
          {"L", number(r.lipschitz)},
          {"K_paper", number(r.k_paper)},
          {"pass", r.pass},
          {"within_K_paper", r.within_paper},
          {"no_regular_direction", r.no_regular_direction}};
}

Json to_json(const UniformTrend& r) {
  return {{"resolutions", r.resolutions},
          {"empirical", numbers(r.empirical)},
          {"last_change", number(r.last_change)},
          {"asymptote", number(r.asymptote)},
          {"order", number(r.order)},
          {"bounded", r.bounded},
          {"pass", r.pass},
          {"status", r.status}};
}

void write_fibers_csv(const SweepReport& report, std::ostream& out) {
  const std::size_t k = report.grid.empty() ? 0 : report.grid.front().size();
  for (std::size_t i = 0; i < k; ++i) out << "t" << i + 1 << ",";
  out << "empty,volume,thickness,constant,bound,slack,pass,constant_ratio,thickness_ratio,error\n";
  for (const auto& r : report.records) {
    for (double v : r.t) out << fmt(v) << ",";
    out << (r.empty ? 1 : 0) << ",";
    if (r.evaluated()) {
      out << fmt(r.volume) << "," << fmt(r.thickness) << "," << fmt(r.constant) << "," << fmt(r.bound) << ","
          << fmt(r.slack) << "," << (r.pass ? 1 : 0) << "," << fmt(r.constant_ratio(report.dim)) << ","
          << fmt(r.thickness_ratio(report.dim)) << ",";
    } else {
      out << ",,,,,0,,,";
    }
    out << r.error_code << "\n";
  }
}

namespace {

void write_plot(const SweepReport& report, std::ostream& out, bool ratio) {
  out << "# t " << (ratio ? "C_p/vol^(1/n)" : "C_p") << "\n";
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    if (!r.evaluated()) continue;
    const double x = r.t.empty() ? static_cast<double>(i) : r.t.front();
    out << fmt(x) << " " << fmt(ratio ? r.constant_ratio(report.dim) : r.constant) << "\n";
  }
}

}  // namespace

void write_plot_constant(const SweepReport& report, std::ostream& out) { write_plot(report, out, false); }
void write_plot_ratio(const SweepReport& report, std::ostream& out) { write_plot(report, out, true); }

void write_json_file(const Json& j, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << "\n";
}

}  // namespace poincare
