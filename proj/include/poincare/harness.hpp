#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poincare/domain_spec.hpp"
#include "poincare/tangent.hpp"
#include "poincare/types.hpp"

namespace poincare {

struct FiberRecord {
  ParamVector t;
  bool empty = false;
  double volume = 0.0;
  double thickness = 0.0;  // along the sweep direction
  double constant = 0.0;   // C_p
  double bound = 0.0;      // B = 2^{1/p} |Omega_t|_lambda
  double slack = 0.0;      // 10 h / |Omega_t|_lambda
  bool pass = false;
  std::string method;
  int iterations = 0;
  double residual = 0.0;
  double restart_spread = 0.0;
  bool stagnation_warning = false;
  std::string error_code;  // empty when the fiber was evaluated
  std::string error_message;

  bool evaluated() const { return !empty && error_code.empty(); }
  double constant_ratio(int dim) const;   // C_p / vol^{1/n}
  double thickness_ratio(int dim) const;  // |Omega_t|_lambda / vol^{1/n}
};

struct SweepOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int jobs = 1;
  int samples = 4096;     // boundary samples per fiber for the margin
  int directions = 512;   // candidates for AUTO
};

struct SweepReport {
  int dim = 0;
  double p = 2.0;
  int resolution = 0;
  std::vector<ParamVector> grid;
  Direction direction;
  bool auto_direction = false;
  std::vector<ParamVector> direction_grid;  // parameters the margin was measured on
  double alpha = 0.0;
  double alpha_coarse = 0.0;
  bool no_regular_direction = false;
  std::vector<FiberRecord> records;  // lexicographic in t

  double sup_constant_ratio = 0.0;   // sup_t C_p / vol^{1/n}
  ParamVector sup_constant_t;
  double sup_thickness_ratio = 0.0;  // sup_t |Omega_t|_lambda / vol^{1/n}
  ParamVector sup_thickness_t;
  int failures = 0;  // evaluated fibers with pass == false
  int errors = 0;    // fibers whose evaluation raised an error
  int empties = 0;
};

// counts[i] points per parameter axis, evenly spaced over the parameter box
// (a single point sits at the midpoint); lexicographic order.
std::vector<ParamVector> parameter_grid(const DomainSpec& spec, const std::vector<int>& counts);

// First, middle and last value along every axis of a grid.
std::vector<ParamVector> coarse_subgrid(const std::vector<ParamVector>& grid);

// Evaluates every fiber of the grid. A missing lambda means AUTO: one
// direction from find_regular_direction on the coarse sub-grid, fixed for
// the whole family. Fiber errors land in the fiber's record.
SweepReport sweep(const DomainSpec& spec, double p, std::vector<ParamVector> grid, int resolution,
                  const std::optional<Direction>& lambda, const SweepOptions& options = {});

// Recomputes suprema and counters from the records.
void aggregate(SweepReport& report);

// Pass flag recomputed from the stored constant, bound and slack.
bool recomputed_pass(const FiberRecord& record);

struct LemmaResult {
  double k = 0.0;
  double k_star = 0.0;  // sup_t |Omega_t|_lambda / vol^{1/n}
  ParamVector worst_t;
  double alpha = 0.0;
  double lipschitz = 0.0;  // sqrt(1 - alpha^2) / alpha
  double k_paper = 0.0;    // 4 L^{1 - 1/n} (1 + 1e-6)
  bool pass = false;        // k_star <= k
  bool within_paper = false;  // k_star <= k_paper
  bool no_regular_direction = false;
};

double lemma_constant(double alpha, int dim);

// Throws NotApplicable when the report has no positive margin.
LemmaResult verify_lemma_bound(const SweepReport& report, double k);

struct UniformTrend {
  std::vector<int> resolutions;
  std::vector<double> empirical;  // sup_t C_p / vol^{1/n} per resolution
  double last_change = 0.0;       // relative change at the finest pair
  double asymptote = 0.0;
  double order = 1.0;             // assumed or estimated convergence order
  bool bounded = false;
  bool pass = false;              // bounded and |last_change| <= 10%
  std::string status;             // "ok" or "InconclusiveRefinement"
};

// Reports must be ordered by increasing resolution (at least two).
UniformTrend verify_main_uniform(const std::vector<SweepReport>& reports);

}  // namespace poincare
