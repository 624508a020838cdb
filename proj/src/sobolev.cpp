#include "poincare/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <random>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "poincare/error.hpp"
#include "poincare/parallel.hpp"
#include "poincare/thickness.hpp"

namespace poincare {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

void require_same(std::uint64_t a, std::uint64_t b) {
  if (a != b) throw RasterMismatch("field and operator were built on different rasters");
}

double cell_volume(double h, int dim) { return std::pow(h, dim); }

double power_sum(const double* v, std::size_t cells, int components, double p) {
  double s = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    double a = 0.0;
    if (components == 1) {
      a = std::abs(v[c]);
    } else {
      double sq = 0.0;
      for (int j = 0; j < components; ++j) sq += v[c * components + j] * v[c * components + j];
      a = std::sqrt(sq);
    }
    if (p == 2.0) {
      s += a * a;
    } else if (p == 1.0) {
      s += a;
    } else if (a > 0.0) {
      s += std::pow(a, p);
    }
  }
  return s;
}

double lp_from_sum(double sum, double p, double weight) {
  const double total = sum * weight;
  if (p == 1.0) return total;
  if (p == 2.0) return std::sqrt(total);
  return std::pow(total, 1.0 / p);
}

// Solves with grad^T grad (optionally shifted). Sparse LDL^T when the fill
// stays moderate, Jacobi-preconditioned CG otherwise.
class InnerSolver {
 public:
  InnerSolver(int dim, Eigen::Index n, double cg_tol) : direct_(dim <= 2 ? n <= 400000 : n <= 60000) {
    cg_.setTolerance(cg_tol);
    cg_.setMaxIterations(std::max<Eigen::Index>(1000, 4 * n));
  }
  bool compute(const SpMat& a) {
    if (direct_) {
      if (!analyzed_) {
        ldlt_.analyzePattern(a);
        analyzed_ = true;
      }
      ldlt_.factorize(a);
      ok_ = ldlt_.info() == Eigen::Success;
    } else {
      cg_.compute(a);
      ok_ = cg_.info() == Eigen::Success;
    }
    return ok_;
  }
  // Empty optional on failure.
  std::optional<Eigen::VectorXd> solve(const Eigen::VectorXd& b, const Eigen::VectorXd& guess) const {
    if (!ok_) return std::nullopt;
    Eigen::VectorXd x;
    if (direct_) {
      x = ldlt_.solve(b);
      if (ldlt_.info() != Eigen::Success) return std::nullopt;
    } else {
      x = cg_.solveWithGuess(b, guess);
      if (cg_.info() != Eigen::Success) return std::nullopt;
    }
    if (!x.allFinite()) return std::nullopt;
    return x;
  }
  bool direct() const { return direct_; }

 private:
  bool direct_;
  bool analyzed_ = false;
  bool ok_ = false;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg_;
};

SpMat laplacian(const GradientOperator& op) {
  SpMat g = op.matrix();
  SpMat a = g.transpose() * g;
  a.makeCompressed();
  return a;
}

}  // namespace

DiscreteField make_field(const RasterDomain& raster, Eigen::VectorXd values) {
  if (static_cast<std::size_t>(values.size()) != raster.interior_count())
    throw RasterMismatch("field size does not match the raster interior");
  return {raster.id, raster.dim, std::move(values)};
}

DiscreteField constant_field(const RasterDomain& raster, double value) {
  return make_field(raster, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(raster.interior_count()), value));
}

GradientOperator::GradientOperator(const RasterDomain& raster)
    : dim_(raster.dim), h_(raster.h), raster_id_(raster.id), interior_count_(raster.interior_count()) {
  std::size_t total = 1;
  for (int a = 0; a < dim_; ++a) {
    padded_[a] = raster.counts[a] + 1;
    total *= static_cast<std::size_t>(padded_[a]);
  }
  face_of_padded_.assign(total, -1);
  interior_ijk_.reserve(interior_count_);
  for (std::size_t c : raster.interior_cells) {
    const auto ijk = raster.coords(c);
    interior_ijk_.push_back(ijk);
    face_of_padded_[padded_index(ijk)] = 0;
    for (int j = 0; j < dim_; ++j) {
      auto back = ijk;
      --back[j];
      face_of_padded_[padded_index(back)] = 0;
    }
  }
  // Enumerate in padded x-fastest order so face numbering is canonical.
  for (std::size_t k = 0; k < total; ++k) {
    if (face_of_padded_[k] < 0) continue;
    std::array<int, 3> ijk{0, 0, 0};
    std::size_t rest = k;
    for (int a = 0; a < dim_; ++a) {
      ijk[a] = static_cast<int>(rest % padded_[a]) - 1;
      rest /= padded_[a];
    }
    face_of_padded_[k] = static_cast<std::int64_t>(faces_.size());
    faces_.push_back(ijk);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(faces_.size() * dim_ * 2);
  const double inv_h = 1.0 / h_;
  for (std::size_t e = 0; e < faces_.size(); ++e) {
    const auto& ijk = faces_[e];
    const bool here = raster.in_grid(ijk) && raster.is_interior(raster.index(ijk));
    for (int j = 0; j < dim_; ++j) {
      const auto row = static_cast<Eigen::Index>(e * dim_ + j);
      if (here) triplets.emplace_back(row, raster.interior_id[raster.index(ijk)], -inv_h);
      if (raster.interior_neighbor(ijk, j, +1)) {
        auto n = ijk;
        ++n[j];
        triplets.emplace_back(row, raster.interior_id[raster.index(n)], inv_h);
      }
    }
  }
  g_.resize(static_cast<Eigen::Index>(faces_.size() * dim_), static_cast<Eigen::Index>(interior_count_));
  g_.setFromTriplets(triplets.begin(), triplets.end());
  g_.makeCompressed();
}

std::size_t GradientOperator::padded_index(const std::array<int, 3>& ijk) const {
  std::size_t k = 0;
  std::size_t stride = 1;
  for (int a = 0; a < dim_; ++a) {
    k += static_cast<std::size_t>(ijk[a] + 1) * stride;
    stride *= static_cast<std::size_t>(padded_[a]);
  }
  return k;
}

std::int64_t GradientOperator::face_index(const std::array<int, 3>& ijk) const {
  for (int a = 0; a < dim_; ++a)
    if (ijk[a] < -1 || ijk[a] >= padded_[a] - 1) return -1;
  return face_of_padded_[padded_index(ijk)];
}

VectorField GradientOperator::apply(const DiscreteField& u) const {
  require_same(u.raster_id, raster_id_);
  return {raster_id_, dim_, g_ * u.values};
}

DiscreteField GradientOperator::divergence(const VectorField& w) const {
  require_same(w.raster_id, raster_id_);
  if (static_cast<std::size_t>(w.values.size()) != faces_.size() * dim_)
    throw RasterMismatch("vector field size does not match the operator");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(interior_count_));
  for (std::size_t k = 0; k < interior_count_; ++k) {
    const auto e = static_cast<std::size_t>(face_index(interior_ijk_[k]));
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) {
      auto back = faces_[e];
      --back[j];
      const auto b = static_cast<std::size_t>(face_index(back));
      s += w.values[static_cast<Eigen::Index>(e * dim_ + j)] - w.values[static_cast<Eigen::Index>(b * dim_ + j)];
    }
    out[static_cast<Eigen::Index>(k)] = s / h_;
  }
  return {raster_id_, dim_, std::move(out)};
}

VectorField grad(const GradientOperator& op, const DiscreteField& u) { return op.apply(u); }
DiscreteField div(const GradientOperator& op, const VectorField& w) { return op.divergence(w); }

double lp_norm(const DiscreteField& u, double p, double h) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("lp_norm needs p in [1, inf)");
  return lp_from_sum(power_sum(u.values.data(), static_cast<std::size_t>(u.values.size()), 1, p), p,
                     cell_volume(h, u.dim));
}

double lp_norm(const VectorField& w, double p, double h) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("lp_norm needs p in [1, inf)");
  return lp_from_sum(power_sum(w.values.data(), w.cells(), w.dim, p), p, cell_volume(h, w.dim));
}

PoincareEstimate poincare_p2(const RasterDomain& raster, double tol, int max_iterations) {
  if (raster.empty()) throw EmptyFiber("poincare_p2 on an empty raster");
  const GradientOperator op(raster);
  const SpMat a = laplacian(op);
  const auto n = a.rows();
  const double inner_tol = std::min(1e-10, 1e-2 * tol);

  InnerSolver solver(raster.dim, n, inner_tol);
  solver.compute(a);

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
  double rho = x.dot(a * x);
  double sigma = 0.0;
  PoincareEstimate est;
  est.p = 2.0;
  est.method = "eigensolve";
  est.h = raster.h;
  double change = kInfinity;
  int k = 0;
  for (; k < max_iterations; ++k) {
    auto y = solver.solve(x, x / (rho - sigma));
    if (!y) {
      if (sigma == 0.0) break;
      sigma = 0.0;
      solver.compute(a);
      continue;
    }
    x = y->normalized();
    const double next = x.dot(a * x);
    change = std::abs(next - rho) / next;
    rho = next;
    if (k >= 2 && change < tol) {
      ++k;
      break;
    }
    if (sigma == 0.0 && change < 1e-3) {
      sigma = 0.5 * rho;
      SpMat shifted = a;
      for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
      if (!solver.compute(shifted)) {
        sigma = 0.0;
        solver.compute(a);
      }
    }
  }
  est.iterations = k;
  est.eigenvalue = rho;
  est.constant = 1.0 / std::sqrt(rho);
  if (!(change < tol)) {
    throw SolverDiverged("inverse iteration did not reach the eigenvalue tolerance", est.constant, k);
  }
  if (x.sum() < 0.0) x = -x;
  est.residual = (a * x - rho * x).norm() / rho;
  est.minimizer = std::move(x);
  return est;
}

namespace {

// Smoothed |v|^p functional pieces for the descent.
struct Descent {
  const GradientOperator& op;
  double p;
  double eps;

  // Returns the sum of (|v|^2 + eps^2)^{p/2} and writes its gradient
  // with respect to the entries of v.
  double value_and_grad(const Eigen::VectorXd& v, int components, Eigen::VectorXd* g) const {
    const Eigen::Index cells = v.size() / components;
    double s = 0.0;
    if (g) g->resize(v.size());
    for (Eigen::Index c = 0; c < cells; ++c) {
      double sq = eps * eps;
      for (int j = 0; j < components; ++j) sq += v[c * components + j] * v[c * components + j];
      if (sq == 0.0) {
        if (g)
          for (int j = 0; j < components; ++j) (*g)[c * components + j] = 0.0;
        continue;
      }
      const double a = std::sqrt(sq);
      const double ap = p == 2.0 ? sq : std::pow(a, p);
      s += ap;
      if (g) {
        const double w = p * ap / sq;  // p |v|^{p-2}
        for (int j = 0; j < components; ++j) (*g)[c * components + j] = w * v[c * components + j];
      }
    }
    return s;
  }

  // F = log R = (log D - log N) / p.
  double objective(const Eigen::VectorXd& u, Eigen::VectorXd* grad_f) const {
    Eigen::VectorXd gn;
    Eigen::VectorXd gd;
    const double nsum = value_and_grad(u, 1, grad_f ? &gn : nullptr);
    const Eigen::VectorXd gu = op.matrix() * u;
    const double dsum = value_and_grad(gu, op.dim(), grad_f ? &gd : nullptr);
    if (!(nsum > 0.0) || !(dsum > 0.0)) return kInfinity;
    if (grad_f) *grad_f = ((op.matrix().transpose() * gd) / dsum - gn / nsum) / p;
    return (std::log(dsum) - std::log(nsum)) / p;
  }
};

struct RunResult {
  double r = kInfinity;
  double residual = kInfinity;
  int iterations = 0;
  Eigen::VectorXd u;
};

void normalize_p(Eigen::VectorXd& u, double p) {
  const double s = power_sum(u.data(), static_cast<std::size_t>(u.size()), 1, p);
  u /= lp_from_sum(s, p, 1.0);
}

RunResult descend(const Descent& d, const InnerSolver& pre, Eigen::VectorXd u, double tol, int max_iterations) {
  constexpr int kWindow = 10;
  RunResult out;
  normalize_p(u, d.p);
  Eigen::VectorXd g;
  double f = d.objective(u, &g);
  std::vector<double> history{f};
  double step = 1.0;
  // Polak-Ribiere conjugate directions in the metric of grad^T grad.
  Eigen::VectorXd z_prev;
  Eigen::VectorXd g_prev;
  Eigen::VectorXd dir_prev;
  int k = 0;
  for (; k < max_iterations; ++k) {
    auto solved = pre.solve(g, Eigen::VectorXd::Zero(g.size()));
    if (!solved) break;
    const Eigen::VectorXd z = std::move(*solved);
    Eigen::VectorXd raw = -z;
    if (dir_prev.size() > 0) {
      const double beta = std::max(0.0, z.dot(g - g_prev) / z_prev.dot(g_prev));
      if (std::isfinite(beta)) raw += beta * dir_prev;
      if (!(g.dot(raw) < 0.0)) raw = -z;
    }
    const double dn = raw.norm();
    if (!(dn > 0.0) || !std::isfinite(dn)) break;
    Eigen::VectorXd dir = raw * (u.norm() / dn);
    const double slope = g.dot(dir);
    if (!(slope < 0.0)) break;
    z_prev = z;
    g_prev = g;
    dir_prev = std::move(raw);
    bool accepted = false;
    for (; step > 1e-14; step *= 0.5) {
      Eigen::VectorXd trial = u + step * dir;
      const double ft = d.objective(trial, nullptr);
      if (ft <= f + 1e-4 * step * slope) {
        u = std::move(trial);
        normalize_p(u, d.p);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    f = d.objective(u, &g);
    step = std::min(1.0, 2.0 * step);
    history.push_back(f);
    if (history.size() > kWindow) {
      const double now = std::exp(history.back());
      const double then = std::exp(history[history.size() - 1 - kWindow]);
      if (std::abs(then - now) / now < tol) {
        ++k;
        break;
      }
    }
  }
  out.iterations = k;
  out.r = std::exp(f);
  const std::size_t back = std::min<std::size_t>(kWindow, history.size() - 1);
  out.residual = back == 0 ? 0.0 : std::abs(std::exp(history[history.size() - 1 - back]) - out.r) / out.r;
  out.u = std::move(u);
  return out;
}

// Near p = 1 minimizers are close to indicators and the kinks of |v| stall
// the descent; thresholding the descent result at up to 256 quantiles of its
// values often lands on a better field.
Eigen::VectorXd best_superlevel_set(const Descent& d, const Eigen::VectorXd& u) {
  constexpr std::size_t kLevels = 256;
  Eigen::VectorXd a = u.cwiseAbs();
  std::vector<double> sorted(a.data(), a.data() + a.size());
  std::sort(sorted.begin(), sorted.end());
  Eigen::VectorXd best = a;
  double best_f = d.objective(a, nullptr);
  const std::size_t n = sorted.size();
  const std::size_t stride = std::max<std::size_t>(1, n / kLevels);
  for (std::size_t k = 0; k < n; k += stride) {
    const double s = sorted[k];
    if (k > 0 && s == sorted[k - 1]) continue;
    Eigen::VectorXd ind = (a.array() >= s).cast<double>();
    const double f = d.objective(ind, nullptr);
    if (f < best_f) {
      best_f = f;
      best = std::move(ind);
    }
  }
  return best;
}

}  // namespace

PoincareEstimate poincare_general_p(const RasterDomain& raster, double p, double tol, std::uint64_t seed, int jobs,
                                    int max_iterations) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("p must lie in [1, inf)");
  if (raster.empty()) throw EmptyFiber("poincare_general_p on an empty raster");
  constexpr int kRandomStarts = 8;
  const GradientOperator op(raster);
  const SpMat a = laplacian(op);
  InnerSolver pre(raster.dim, a.rows(), 1e-8);
  pre.compute(a);
  const Descent d{op, p, p < 1.05 ? 1e-9 * raster.h : 0.0};
  const double descent_tol = std::max(tol, 1e-12);
  const auto n = static_cast<Eigen::Index>(raster.interior_count());

  std::vector<Eigen::VectorXd> starts;
  for (int i = 0; i < kRandomStarts; ++i) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i) + 1);
    Eigen::VectorXd u(n);
    for (Eigen::Index k = 0; k < n; ++k) u[k] = unit_double(rng);
    starts.push_back(std::move(u));
  }
  starts.push_back(poincare_p2(raster, std::max(tol, 1e-8)).minimizer);

  std::vector<RunResult> runs(starts.size());
  parallel_for(starts.size(), jobs, [&](std::size_t i) {
    runs[i] = descend(d, pre, starts[i], descent_tol, max_iterations);
    if (p < 1.05) {
      Eigen::VectorXd level = best_superlevel_set(d, runs[i].u);
      if (d.objective(level, nullptr) < std::log(runs[i].r)) {
        const int spent = runs[i].iterations;
        runs[i] = descend(d, pre, std::move(level), descent_tol, max_iterations);
        runs[i].iterations += spent;
      }
    }
  });

  std::size_t best = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].r < runs[best].r) best = i;
    if (std::isfinite(runs[i].r)) worst = std::max(worst, runs[i].r);
  }
  const RunResult& b = runs[best];
  PoincareEstimate est;
  est.p = p;
  est.method = "rayleigh-descent";
  est.h = raster.h;
  est.constant = 1.0 / b.r;
  est.residual = b.residual;
  est.iterations = b.iterations;
  est.best_seed = best;
  est.restart_spread = (worst - b.r) / b.r;
  est.stagnation_warning = est.restart_spread > 0.05;
  if (!std::isfinite(b.r) || !(b.r > 0.0)) throw SolverDiverged("descent produced no finite Rayleigh quotient", 0.0, b.iterations);
  if (b.iterations >= max_iterations && !(b.residual < std::sqrt(descent_tol)))
    throw SolverDiverged("descent did not settle within the iteration limit", est.constant, b.iterations);
  Eigen::VectorXd u = b.u;
  if (u.sum() < 0.0) u = -u;
  est.minimizer = std::move(u);
  return est;
}

PoincareEstimate poincare_constant(const RasterDomain& raster, double p, double tol, std::uint64_t seed, int jobs) {
  if (p == 2.0) return poincare_p2(raster, tol);
  return poincare_general_p(raster, p, tol, seed, jobs);
}

namespace {

double checked_thickness(const DomainSpec& spec, const ParamVector& t, const RasterDomain& raster, const Direction& lambda) {
  if (raster.empty()) throw EmptyFiber("fiber has no interior cells at this resolution");
  if (raster.t != t) throw RasterMismatch("raster was built for a different parameter");
  const Fiber fiber(spec, t);
  const ThicknessResult th = thickness(fiber, raster, lambda, raster.h / 4.0);
  if (th.unbounded) throw Unbounded("fiber is not bounded in the requested direction");
  return th.value;
}

CheckRecord finish_p1(double thick, const RasterDomain& raster, PoincareEstimate estimate) {
  CheckRecord rec;
  rec.name = "theorem_p1";
  rec.p = estimate.p;
  rec.thickness = thick;
  rec.constant = estimate.constant;
  rec.bound = std::pow(2.0, 1.0 / estimate.p) * thick;
  rec.slack = 10.0 * raster.h / thick;
  rec.margin = rec.bound - rec.constant;
  rec.pass = rec.constant <= rec.bound * (1.0 + rec.slack);
  rec.estimate = std::move(estimate);
  return rec;
}

}  // namespace

CheckRecord verify_theorem_p1(const DomainSpec& spec, const ParamVector& t, const RasterDomain& raster, double p,
                              const Direction& lambda, double tol, std::uint64_t seed, int jobs) {
  const double thick = checked_thickness(spec, t, raster, lambda);
  return finish_p1(thick, raster, poincare_constant(raster, p, tol, seed, jobs));
}

CheckRecord verify_theorem_p1(const DomainSpec& spec, const ParamVector& t, const RasterDomain& raster,
                              const PoincareEstimate& estimate, const Direction& lambda) {
  const double thick = checked_thickness(spec, t, raster, lambda);
  return finish_p1(thick, raster, estimate);
}

CheckRecord discrete_p1_exact(const RasterDomain& raster, int axis, double p, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("discrete_p1_exact needs at least one trial");
  if (raster.empty()) throw EmptyFiber("discrete_p1_exact on an empty raster");
  const GradientOperator op(raster);
  const double t_disc = thickness_discrete(raster, axis);
  const auto n = static_cast<Eigen::Index>(raster.interior_count());
  const std::size_t faces = op.face_count();
  CheckRecord rec;
  rec.name = "discrete_p1_exact";
  rec.p = p;
  rec.thickness = t_disc;
  rec.bound = 1.0;
  std::mt19937_64 rng(seed);
  Eigen::VectorXd axis_values(static_cast<Eigen::Index>(faces));
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXd u(n);
    for (Eigen::Index k = 0; k < n; ++k) u[k] = uniform(rng, -1.0, 1.0);
    const DiscreteField field = make_field(raster, std::move(u));
    const VectorField g = op.apply(field);
    for (std::size_t e = 0; e < faces; ++e)
      axis_values[static_cast<Eigen::Index>(e)] = g.values[static_cast<Eigen::Index>(e * raster.dim + axis)];
    const double un = lp_norm(field, p, raster.h);
    const double dn = lp_norm(DiscreteField{raster.id, raster.dim, axis_values}, p, raster.h);
    if (un == 0.0 && dn == 0.0) continue;
    ++rec.trials;
    const double raw = un / dn;
    rec.worst_raw_ratio = std::max(rec.worst_raw_ratio, raw);
    rec.constant = std::max(rec.constant, raw / t_disc);
  }
  rec.margin = rec.bound - rec.constant;
  rec.pass = rec.constant <= 1.0;
  return rec;
}

}  // namespace poincare
