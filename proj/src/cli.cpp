#include "poincare/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "poincare/error.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

namespace {

const char* kCommands[] = {"check", "sweep", "lemma", "uniform", "thickness", "regdir", "cells", "trace", "raster"};

std::vector<double> split_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> split_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : split_doubles(text)) {
    if (v != std::floor(v) || v < 1) throw std::invalid_argument("expected positive integers: '" + text + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string status_for(const Error& e) {
  const std::string& c = e.code();
  if (c == "ParseError" || c == "ParameterOutOfRange") return "usage_error";
  if (c == "SolverDiverged" || c == "DegenerateGeometry" || c == "DegenerateBoundary") return "solver_error";
  return "fail";
}

std::string worst(const std::string& a, const std::string& b) {
  auto rank = [](const std::string& s) {
    if (s == "usage_error") return 3;
    if (s == "solver_error") return 2;
    if (s == "fail") return 1;
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

ParamVector single_t(const RunConfig& cfg, const DomainSpec& spec) {
  if (cfg.t.size() > 1) throw std::invalid_argument("this command takes a single --t");
  if (!cfg.t.empty()) return cfg.t.front();
  ParamVector t;
  for (const auto& b : spec.param_box) t.push_back(0.5 * (b.lo + b.hi));
  return t;
}

void check_t(const DomainSpec& spec, const ParamVector& t) {
  if (t.size() != spec.param_box.size())
    throw std::invalid_argument("expected " + std::to_string(spec.param_box.size()) + " parameter value(s)");
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] < spec.param_box[i].lo || t[i] > spec.param_box[i].hi)
      throw ParameterOutOfRange("parameter " + spec.param_names[i] + " outside its box");
}

std::vector<ParamVector> family_grid(const RunConfig& cfg, const DomainSpec& spec) {
  if (!cfg.t.empty()) {
    for (const auto& t : cfg.t) check_t(spec, t);
    return cfg.t;
  }
  std::vector<int> counts = cfg.grid;
  if (counts.empty()) counts.assign(spec.param_box.size(), Defaults::grid_points);
  if (counts.size() == 1 && spec.param_box.size() > 1) counts.assign(spec.param_box.size(), counts.front());
  return parameter_grid(spec, counts);
}

int resolution(const RunConfig& cfg, int fallback) { return cfg.resolutions.empty() ? fallback : cfg.resolutions.front(); }

SweepOptions sweep_options(const RunConfig& cfg) {
  SweepOptions o;
  o.tol = cfg.tol;
  o.seed = cfg.seed;
  o.jobs = cfg.jobs;
  o.samples = cfg.samples;
  o.directions = cfg.directions;
  return o;
}

std::string sweep_status(const SweepReport& rep) {
  std::string s = "pass";
  for (const auto& r : rep.records) {
    if (!r.error_code.empty()) {
      s = worst(s, r.error_code == "SolverDiverged" ? "solver_error" : "fail");
    } else if (!r.empty && !r.pass) {
      s = worst(s, "fail");
    }
  }
  return s;
}

void write_sweep_artifacts(const SweepReport& rep, const std::filesystem::path& dir, const std::string& suffix) {
  std::ofstream csv(dir / ("fibers" + suffix + ".csv"), std::ios::binary);
  write_fibers_csv(rep, csv);
  std::ofstream pc(dir / ("plot_constant" + suffix + ".dat"), std::ios::binary);
  write_plot_constant(rep, pc);
  std::ofstream pr(dir / ("plot_ratio" + suffix + ".dat"), std::ios::binary);
  write_plot_ratio(rep, pr);
}

Direction direction_or_auto(const RunConfig& cfg, const DomainSpec& spec, const std::vector<ParamVector>& ts, Json& j) {
  if (auto d = parse_direction(cfg.direction, spec.ambient_dim)) return *d;
  const MarginReport m = find_regular_direction(spec, ts, cfg.directions, cfg.seed, cfg.samples, cfg.jobs);
  j["direction_search"] = to_json(m);
  return m.direction;
}

void cmd_check(const RunConfig& cfg, const DomainSpec& spec, Json& j) {
  const ParamVector t = single_t(cfg, spec);
  check_t(spec, t);
  const int res = resolution(cfg, Defaults::resolution);
  const RasterDomain raster = rasterize(spec, t, res);
  j["raster"] = to_json(raster);
  if (raster.empty()) throw EmptyFiber("fiber is empty at this resolution");
  const Direction lambda = direction_or_auto(cfg, spec, {t}, j);
  const PoincareEstimate est = poincare_constant(raster, cfg.p, cfg.tol, cfg.seed, cfg.jobs);
  std::string status = "pass";
  try {
    const CheckRecord p1 = verify_theorem_p1(spec, t, raster, est, lambda);
    j["theorem_p1"] = to_json(p1);
    if (!p1.pass) status = "fail";
  } catch (const Error& e) {
    j["theorem_p1"] = {{"name", "verify_theorem_p1"}, {"pass", false}, {"error", to_json(e)}, {"estimate", to_json(est)}};
    status = worst(status, status_for(e));
  }
  Json exact = Json::array();
  for (int axis = 0; axis < spec.ambient_dim; ++axis) {
    const CheckRecord r = discrete_p1_exact(raster, axis, cfg.p, cfg.trials, cfg.seed);
    Json rj = to_json(r);
    rj["axis"] = axis;
    exact.push_back(std::move(rj));
    if (!r.pass) status = worst(status, "fail");
  }
  j["discrete_p1_exact"] = std::move(exact);
  if (cfg.dump_field) {
    write_cell_values(raster, std::span<const double>(est.minimizer.data(), static_cast<std::size_t>(est.minimizer.size())),
                      cfg.out_dir / "field.bin", cfg.out_dir / "field.json");
  }
  j["status"] = status;
}

void cmd_sweep(const RunConfig& cfg, const DomainSpec& spec, Json& j, bool lemma) {
  const auto grid = family_grid(cfg, spec);
  const auto lambda = parse_direction(cfg.direction, spec.ambient_dim);
  const SweepReport rep = sweep(spec, cfg.p, grid, resolution(cfg, Defaults::resolution), lambda, sweep_options(cfg));
  j["sweep"] = to_json(rep);
  write_sweep_artifacts(rep, cfg.out_dir, "");
  std::string status = sweep_status(rep);
  if (lemma) {
    try {
      const double k = cfg.k ? *cfg.k : (rep.alpha > 0.0 ? lemma_constant(rep.alpha, rep.dim) : 0.0);
      const LemmaResult l = verify_lemma_bound(rep, k);
      j["lemma"] = to_json(l);
      if (!l.pass) status = worst(status, "fail");
    } catch (const Error& e) {
      j["lemma"] = {{"pass", false}, {"error", to_json(e)}};
      status = worst(status, status_for(e));
    }
  }
  j["status"] = status;
}

void cmd_uniform(const RunConfig& cfg, const DomainSpec& spec, Json& j) {
  if (cfg.resolutions.size() < 2) throw std::invalid_argument("uniform needs at least two resolutions (--res 128,256)");
  const auto grid = family_grid(cfg, spec);
  const auto lambda = parse_direction(cfg.direction, spec.ambient_dim);
  std::vector<SweepReport> reps;
  Json sweeps = Json::array();
  std::string status = "pass";
  for (int res : cfg.resolutions) {
    reps.push_back(sweep(spec, cfg.p, grid, res, lambda, sweep_options(cfg)));
    sweeps.push_back(to_json(reps.back()));
    write_sweep_artifacts(reps.back(), cfg.out_dir, "_" + std::to_string(res));
    status = worst(status, sweep_status(reps.back()));
  }
  j["sweeps"] = std::move(sweeps);
  const UniformTrend tr = verify_main_uniform(reps);
  j["uniform"] = to_json(tr);
  if (!tr.pass) status = worst(status, "fail");
  j["status"] = status;
}

void cmd_thickness(const RunConfig& cfg, const DomainSpec& spec, Json& j) {
  const ParamVector t = single_t(cfg, spec);
  check_t(spec, t);
  const int res = resolution(cfg, Defaults::resolution);
  const RasterDomain seeds = rasterize(spec, t, res);
  const double step = cfg.step ? *cfg.step : Defaults::step_fraction * seeds.h;
  j["step"] = number(step);
  std::vector<Direction> dirs;
  if (auto d = parse_direction(cfg.direction, spec.ambient_dim)) {
    dirs.push_back(*d);
  } else {
    for (int a = 0; a < spec.ambient_dim; ++a) dirs.push_back(Direction::axis(a, spec.ambient_dim));
  }
  const Fiber fiber(spec, t);
  Json out = Json::array();
  for (const auto& d : dirs) {
    Json r = to_json(thickness(fiber, seeds, d, step));
    if (spec.ambient_dim <= 3) {
      for (int a = 0; a < spec.ambient_dim; ++a)
        if (std::abs(d[a]) == 1.0) r["discrete"] = number(thickness_discrete(seeds, a));
    }
    out.push_back(std::move(r));
  }
  j["thickness"] = std::move(out);
  j["status"] = "pass";
}

void cmd_regdir(const RunConfig& cfg, const DomainSpec& spec, Json& j) {
  std::vector<ParamVector> ts = cfg.t;
  if (ts.empty()) {
    RunConfig c = cfg;
    if (c.grid.empty()) c.grid.assign(spec.param_box.size(), 3);
    ts = family_grid(c, spec);
  }
  for (const auto& t : ts) check_t(spec, t);
  MarginReport m;
  if (auto d = parse_direction(cfg.direction, spec.ambient_dim)) {
    auto [fine, coarse] = sample_family(spec, ts, cfg.samples, cfg.seed, cfg.jobs);
    m = margin_report(fine, coarse, *d);
  } else {
    m = find_regular_direction(spec, ts, cfg.directions, cfg.seed, cfg.samples, cfg.jobs);
  }
  j["margin"] = to_json(m);
  if (m.no_regular_direction) {
    j["error"] = {{"code", "NoRegularDirection"}, {"message", "the margin keeps shrinking with sampling density"}};
    j["status"] = "fail";
  } else {
    j["status"] = "pass";
  }
}

void cmd_cells(const RunConfig& cfg, const DomainSpec& spec, Json& j) {
  const ParamVector t = single_t(cfg, spec);
  check_t(spec, t);
  const CellComplex2D cx = cell_decompose_2d(spec, t, cfg.samples_per_column);
  const CellComplex2D merged = merge_vertical(cx);
  {
    std::ofstream f(cfg.out_dir / "cells.json", std::ios::binary);
    write_cells_json(cx, f);
    std::ofstream g(cfg.out_dir / "cells.dot", std::ios::binary);
    write_cells_dot(cx, g);
    std::ofstream h(cfg.out_dir / "cells_merged.json", std::ios::binary);
    write_cells_json(merged, h);
  }
  const RasterDomain raster = rasterize(spec, t, resolution(cfg, Defaults::resolution));
  j["criticals"] = cx.criticals.size();
  j["columns"] = cx.columns.size();
  j["inside_bands"] = cx.inside_band_count();
  j["inside_bands_merged"] = merged.inside_band_count();
  j["band_integral"] = number(band_integral(cx));
  j["raster_volume"] = number(volume(raster));
  j["max_band_height"] = number(max_band_height(cx));
  j["status"] = "pass";
}

void cmd_trace(const RunConfig& cfg, const DomainSpec& spec, Json& j) {
  const ParamVector t = single_t(cfg, spec);
  check_t(spec, t);
  std::vector<std::string> batteries{cfg.battery};
  if (cfg.battery == "all") batteries = {"polynomial", "trigonometric", "bump"};
  Json out = Json::array();
  std::string status = "pass";
  for (const auto& b : batteries) {
    const TraceReport r = trace_ratio_battery(spec, t, resolution(cfg, Defaults::trace_resolution), cfg.p, b);
    out.push_back(to_json(r));
    if (!r.stable) status = "fail";
  }
  j["trace"] = std::move(out);
  j["status"] = status;
}

void cmd_raster(const RunConfig& cfg, const DomainSpec& spec, Json& j) {
  const ParamVector t = single_t(cfg, spec);
  check_t(spec, t);
  const RasterDomain raster = rasterize(spec, t, resolution(cfg, Defaults::resolution));
  j["raster"] = to_json(raster);
  write_mask(raster, cfg.out_dir / "mask.bin", cfg.out_dir / "mask.json");
  if (raster.dim == 2) write_pgm(raster, cfg.out_dir / "mask.pgm");
  j["status"] = "pass";
}

}  // namespace

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  j["spec"] = spec_path.generic_string();
  Json ts = Json::array();
  for (const auto& v : t) ts.push_back(v);
  j["t"] = std::move(ts);
  j["grid"] = grid;
  j["p"] = number(p);
  j["resolutions"] = resolutions;
  j["direction"] = direction;
  j["seed"] = seed;
  j["tol"] = number(tol);
  j["step"] = step ? number(*step) : Json(nullptr);
  j["samples"] = samples;
  j["directions"] = directions;
  j["trials"] = trials;
  j["samples_per_column"] = samples_per_column;
  j["battery"] = battery;
  j["K"] = k ? number(*k) : Json(nullptr);
  return j;
}

ExitCode exit_code_for(const Json& report) {
  const std::string s = report.value("status", std::string("usage_error"));
  if (s == "pass") return ExitCode::Pass;
  if (s == "fail") return ExitCode::Fail;
  if (s == "solver_error") return ExitCode::Solver;
  return ExitCode::Usage;
}

std::optional<Direction> parse_direction(const std::string& text, int dim) {
  if (text == "auto" || text == "AUTO") return std::nullopt;
  static const char* names[3][2] = {{"e1", "x"}, {"e2", "y"}, {"e3", "z"}};
  for (int a = 0; a < 3; ++a)
    if (text == names[a][0] || text == names[a][1]) {
      if (a >= dim) throw std::invalid_argument("axis " + text + " does not exist in dimension " + std::to_string(dim));
      return Direction::axis(a, dim);
    }
  const auto v = split_doubles(text);
  if (static_cast<int>(v.size()) != dim) throw std::invalid_argument("direction needs " + std::to_string(dim) + " components");
  Point p{0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) p[i] = v[i];
  return Direction(p, dim);
}

Json execute(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["config"] = cfg.to_json();
  try {
    std::filesystem::create_directories(cfg.out_dir);
  } catch (const std::exception& e) {
    j["status"] = "usage_error";
    j["error"] = {{"code", "OutputDirectory"}, {"message", e.what()}};
    j["exit_code"] = static_cast<int>(exit_code_for(j));
    return j;
  }
  try {
    if (!std::filesystem::is_regular_file(cfg.spec_path))
      throw ParseError(0, 0, "cannot open spec file " + cfg.spec_path.generic_string());
    const DomainSpec spec = load_domain(cfg.spec_path);
    j["spec"] = print_domain(spec);
    j["box_audit"] = to_json(spec.audit);
    if (!spec.audit.ok()) j["warnings"] = Json::array({"bounding box audit found fiber points outside the box"});
    const std::string& c = cfg.command;
    if (c == "check") cmd_check(cfg, spec, j);
    else if (c == "sweep") cmd_sweep(cfg, spec, j, false);
    else if (c == "lemma") cmd_sweep(cfg, spec, j, true);
    else if (c == "uniform") cmd_uniform(cfg, spec, j);
    else if (c == "thickness") cmd_thickness(cfg, spec, j);
    else if (c == "regdir") cmd_regdir(cfg, spec, j);
    else if (c == "cells") cmd_cells(cfg, spec, j);
    else if (c == "trace") cmd_trace(cfg, spec, j);
    else if (c == "raster") cmd_raster(cfg, spec, j);
    else throw std::invalid_argument("unknown command " + c);
  } catch (const Error& e) {
    j["status"] = status_for(e);
    j["error"] = to_json(e);
  } catch (const std::invalid_argument& e) {
    j["status"] = "usage_error";
    j["error"] = {{"code", "InvalidArgument"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    j["status"] = "solver_error";
    j["error"] = {{"code", "InternalError"}, {"message", e.what()}};
  }
  j["exit_code"] = static_cast<int>(exit_code_for(j));
  write_json_file(j, cfg.out_dir / "report.json");
  return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of Poincare inequalities on parametric semialgebraic domain families"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.jobs = default_jobs();
  std::vector<std::string> t_text;
  std::string grid_text;
  std::string res_text;
  std::string spec_text;
  std::string out_text = cfg.out_dir.string();
  double step = 0.0;
  double k = 0.0;

  for (const char* name : kCommands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--spec", spec_text, "domain specification (.dom)")->required();
    sub->add_option("--out", out_text, "output directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--jobs", cfg.jobs, "worker threads (default from POINCARE_LAB_JOBS)")->check(CLI::Range(1, 256));
    sub->add_option("--t", t_text, "parameter vector a[,b...]; repeat for several fibers");
    const std::string c = name;
    const bool fibers = c == "check" || c == "sweep" || c == "lemma" || c == "uniform";
    if (fibers || c == "trace") sub->add_option("--p", cfg.p, "Lebesgue exponent p >= 1")->check(CLI::Range(1.0, 1e6));
    if (c != "regdir")
      sub->add_option("--res", res_text, c == "uniform" ? "resolutions, comma separated" : "cells along the longest box side");
    if (fibers || c == "thickness" || c == "regdir") sub->add_option("--dir", cfg.direction, "auto, e1/e2/e3 or a,b[,c]")->capture_default_str();
    if (fibers) sub->add_option("--tol", cfg.tol, "solver tolerance")->capture_default_str();
    if (c == "sweep" || c == "lemma" || c == "uniform" || c == "regdir")
      sub->add_option("--grid", grid_text, "points per parameter axis, comma separated");
    if (fibers || c == "regdir") {
      sub->add_option("--samples", cfg.samples, "boundary samples per fiber")->capture_default_str();
      sub->add_option("--dirs", cfg.directions, "candidate directions")->capture_default_str();
    }
    if (c == "check") {
      sub->add_option("--trials", cfg.trials, "random fields for the discrete inequality")->capture_default_str();
      sub->add_flag("--dump-field", cfg.dump_field, "write the optimal field as field.bin/field.json");
    }
    if (c == "thickness") sub->add_option("--step", step, "marching step (default h/4)");
    if (c == "lemma") sub->add_option("--K", k, "lemma constant to test (default 4 L^(1-1/n))");
    if (c == "cells") sub->add_option("--samples-per-column", cfg.samples_per_column, "abscissae per column")->capture_default_str();
    if (c == "trace") sub->add_option("--battery", cfg.battery, "polynomial, trigonometric, bump or all")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      cfg.command = sub->get_name();
      if (auto* o = sub->get_option_no_throw("--step"); o && o->count()) cfg.step = step;
      if (auto* o = sub->get_option_no_throw("--K"); o && o->count()) cfg.k = k;
    }
    cfg.spec_path = spec_text;
    cfg.out_dir = out_text;
    for (const auto& s : t_text) cfg.t.push_back(split_doubles(s));
    if (!grid_text.empty()) cfg.grid = split_ints(grid_text);
    if (!res_text.empty()) {
      cfg.resolutions = split_ints(res_text);
    } else if (cfg.command == "uniform") {
      cfg.resolutions = {128, 256};
    } else if (cfg.command == "trace") {
      cfg.resolutions = {Defaults::trace_resolution};
    }
    if (cfg.battery != "all" && cfg.battery != "polynomial" && cfg.battery != "trigonometric" && cfg.battery != "bump")
      throw std::invalid_argument("unknown battery " + cfg.battery);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  }

  const Json report = execute(cfg);
  out << cfg.command << ": " << report.value("status", std::string("?"));
  if (report.contains("error")) out << " (" << report["error"].value("code", std::string()) << ": " << report["error"].value("message", std::string()) << ")";
  out << "\n";
  return report["exit_code"].get<int>();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"poincare_lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace poincare
