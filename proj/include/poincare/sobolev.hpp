#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "poincare/domain_spec.hpp"
#include "poincare/raster.hpp"
#include "poincare/types.hpp"

namespace poincare {

// Values on the interior cells of one raster; zero everywhere else.
struct DiscreteField {
  std::uint64_t raster_id = 0;
  int dim = 0;
  Eigen::VectorXd values;
};

// n components per face cell, stored [face cell][component].
struct VectorField {
  std::uint64_t raster_id = 0;
  int dim = 0;
  Eigen::VectorXd values;
  std::size_t cells() const { return dim == 0 ? 0 : static_cast<std::size_t>(values.size()) / dim; }
};

DiscreteField make_field(const RasterDomain& raster, Eigen::VectorXd values);
DiscreteField constant_field(const RasterDomain& raster, double value);

// Forward differences (u(c + h e_j) - u(c)) / h with the zero extension.
// Face cells are all grid positions c (including index -1 on each axis)
// where c or some c + e_j is interior; row c*n + j holds component j.
class GradientOperator {
 public:
  explicit GradientOperator(const RasterDomain& raster);

  int dim() const { return dim_; }
  double h() const { return h_; }
  std::uint64_t raster_id() const { return raster_id_; }
  std::size_t interior_count() const { return interior_count_; }
  std::size_t face_count() const { return faces_.size(); }
  const std::array<int, 3>& face(std::size_t e) const { return faces_[e]; }
  // Face-cell index of grid position ijk (coordinates may be -1), or -1.
  std::int64_t face_index(const std::array<int, 3>& ijk) const;

  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  const Matrix& matrix() const { return g_; }

  VectorField apply(const DiscreteField& u) const;
  // Backward-difference divergence on interior cells; the negative adjoint
  // of apply().
  DiscreteField divergence(const VectorField& w) const;

 private:
  std::size_t padded_index(const std::array<int, 3>& ijk) const;

  int dim_;
  double h_;
  std::uint64_t raster_id_;
  std::size_t interior_count_;
  std::array<int, 3> padded_{1, 1, 1};
  std::vector<std::int64_t> face_of_padded_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<std::array<int, 3>> interior_ijk_;
  Matrix g_;
};

VectorField grad(const GradientOperator& op, const DiscreteField& u);
DiscreteField div(const GradientOperator& op, const VectorField& w);

// (sum |v|^p h^n)^(1/p); vector fields use the euclidean norm per cell.
double lp_norm(const DiscreteField& u, double p, double h);
double lp_norm(const VectorField& w, double p, double h);

struct PoincareEstimate {
  double p = 2.0;
  double constant = 0.0;     // C_p
  std::string method;        // "eigensolve" or "rayleigh-descent"
  double h = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double eigenvalue = 0.0;   // p = 2 only: smallest eigenvalue of grad^T grad
  std::uint64_t best_seed = 0;
  double restart_spread = 0.0;  // relative spread of restart results
  bool stagnation_warning = false;
  Eigen::VectorXd minimizer;    // interior values of the optimal field
};

// C_2 = lambda_min^{-1/2} of grad^T grad by inverse iteration with a
// preconditioned conjugate-gradient inner solve. Converged when the
// Rayleigh quotient changes by less than tol (relative).
PoincareEstimate poincare_p2(const RasterDomain& raster, double tol, int max_iterations = 500);

// C_p by minimizing R(u) = ||grad u||_p / ||u||_p from 8 random positive
// fields and the p = 2 eigenvector; the best restart wins (lowest R, then
// lowest seed).
PoincareEstimate poincare_general_p(const RasterDomain& raster, double p, double tol, std::uint64_t seed,
                                    int jobs = 1, int max_iterations = 3000);

// p = 2 goes to the eigensolver, anything else to the descent.
PoincareEstimate poincare_constant(const RasterDomain& raster, double p, double tol, std::uint64_t seed, int jobs = 1);

struct CheckRecord {
  std::string name;
  bool pass = false;
  double p = 2.0;
  double constant = 0.0;  // C_p, or the worst ratio for discrete_p1_exact
  double bound = 0.0;     // B
  double slack = 0.0;     // eta_h
  double margin = 0.0;    // B - C_p
  double thickness = 0.0;
  int trials = 0;
  double worst_raw_ratio = 0.0;
  PoincareEstimate estimate;
};

// C_p <= 2^{1/p} |Omega_t|_lambda (1 + 10h / |Omega_t|_lambda).
// Throws Unbounded or EmptyFiber.
CheckRecord verify_theorem_p1(const DomainSpec& spec, const ParamVector& t, const RasterDomain& raster, double p,
                              const Direction& lambda, double tol = 1e-8, std::uint64_t seed = 0, int jobs = 1);

// Same with a precomputed constant (lets sweeps reuse one solve per fiber).
CheckRecord verify_theorem_p1(const DomainSpec& spec, const ParamVector& t, const RasterDomain& raster,
                              const PoincareEstimate& estimate, const Direction& lambda);

// ||u||_p <= T ||D_axis u||_p for random u, T = thickness_discrete(axis).
// constant holds the worst ratio ||u|| / (T ||D_axis u||); pass iff <= 1.
CheckRecord discrete_p1_exact(const RasterDomain& raster, int axis, double p, int trials, std::uint64_t seed);

}  // namespace poincare
