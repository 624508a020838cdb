#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "poincare/domain_spec.hpp"
#include "poincare/types.hpp"

namespace poincare {

// A point on a smooth boundary stratum with the unit normal of its single
// active atom.
struct BoundarySample {
  Point x{0.0, 0.0, 0.0};
  Point normal{0.0, 0.0, 0.0};
  std::size_t atom = 0;
};

struct BoundarySampleSet {
  ParamVector t;
  int requested = 0;
  std::vector<BoundarySample> samples;
  bool stratum_too_thin = false;  // fewer than requested/10 samples
};

// Crossings of atom zero sets along jittered axis-parallel lines, refined by
// bisection to 1e-10 and kept when exactly one atom is active there, its
// gradient has norm >= 1e-8, and the point separates the fiber from its
// complement along the normal. At most `count` samples (evenly thinned).
BoundarySampleSet sample_boundary(const DomainSpec& spec, const ParamVector& t, int count, std::uint64_t seed);

// min |<lambda, nu>| over the samples. Throws EmptySamples.
double margin(const std::vector<BoundarySample>& samples, const Direction& lambda);

struct FiberMargin {
  ParamVector t;
  double margin = 0.0;
  int samples = 0;
  bool stratum_too_thin = false;
};

struct MarginReport {
  Direction direction;
  double alpha = 0.0;          // family infimum at `direction`
  double alpha_coarse = 0.0;   // best alpha on samples four times sparser
  bool no_regular_direction = false;
  int candidates = 0;
  int sample_count = 0;
  std::vector<FiberMargin> fibers;
};

// Candidate directions on the closed upper half-sphere (last nonzero
// component positive): `directions` lattice points plus the coordinate
// axes. The circle of directions in 2D is sampled at angles
// pi (k + u0) / directions; in 3D a Fibonacci lattice is used.
std::vector<Direction> candidate_directions(int dim, int directions, std::uint64_t seed);

// Boundary samples of each fiber at samples_per_fiber and at a quarter of
// that density (first and second member).
std::pair<std::vector<BoundarySampleSet>, std::vector<BoundarySampleSet>> sample_family(
    const DomainSpec& spec, const std::vector<ParamVector>& t_samples, int samples_per_fiber, std::uint64_t seed,
    int jobs = 1);

// Best candidate for the pooled boundary samples of all fibers (ties go to
// the lexicographically smallest vector). The search is repeated on samples
// four times sparser; NoRegularDirection is reported when alpha < 1e-6 or
// when alpha is below half the sparse result, i.e. it still shrinks with
// sampling density as it does near a tangency.
MarginReport find_regular_direction(const DomainSpec& spec, const std::vector<ParamVector>& t_samples, int directions,
                                    std::uint64_t seed, int samples_per_fiber = 4096, int jobs = 1);

MarginReport find_regular_direction(int dim, const std::vector<BoundarySampleSet>& fibers,
                                    const std::vector<BoundarySampleSet>& coarse, int directions, std::uint64_t seed,
                                    int jobs = 1);

// Margin report for a fixed direction (no search), same shrinkage test.
MarginReport margin_report(const std::vector<BoundarySampleSet>& fibers, const std::vector<BoundarySampleSet>& coarse,
                           const Direction& lambda);

}  // namespace poincare
