#include "poincare/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "poincare/error.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

namespace {

constexpr int kStepsPerLine = 512;
constexpr double kBisectTol = 1e-10;
constexpr double kMinGradient = 1e-8;

double box_diameter(const DomainSpec& spec) {
  double d2 = 0.0;
  for (const auto& b : spec.bounding_box) d2 += b.width() * b.width();
  return std::sqrt(d2);
}

// Estimated distance to the zero set of atom i.
double atom_distance(const Fiber& fiber, std::size_t i, const Point& x) {
  const double g = norm(fiber.atom_gradient(i, x));
  const double v = std::abs(fiber.atom_value(i, x));
  if (g == 0.0) return v == 0.0 ? 0.0 : kInfinity;
  return v / g;
}

// Lines parallel to `axis`; the remaining coordinates are jittered grid
// positions over the box.
std::vector<Point> line_origins(const DomainSpec& spec, int axis, int per_dim, std::mt19937_64& rng) {
  const int n = spec.ambient_dim;
  std::vector<int> others;
  for (int a = 0; a < n; ++a)
    if (a != axis) others.push_back(a);
  std::size_t total = 1;
  for (std::size_t i = 0; i < others.size(); ++i) total *= static_cast<std::size_t>(per_dim);
  std::vector<Point> out;
  out.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    Point p{0.0, 0.0, 0.0};
    p[axis] = spec.bounding_box[axis].lo;
    std::size_t rest = k;
    for (int a : others) {
      const auto idx = static_cast<double>(rest % per_dim);
      rest /= per_dim;
      const auto& b = spec.bounding_box[a];
      p[a] = b.lo + b.width() * (idx + unit_double(rng)) / per_dim;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

BoundarySampleSet sample_boundary(const DomainSpec& spec, const ParamVector& t, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_boundary needs count >= 1");
  const Fiber fiber(spec, t);
  const int n = spec.ambient_dim;
  const double delta = 1e-6 * box_diameter(spec);
  BoundarySampleSet out;
  out.t = t;
  out.requested = count;

  int per_dim = 1;
  if (n == 2) per_dim = std::max(8, count / 4);
  if (n == 3) per_dim = std::max(4, static_cast<int>(std::ceil(std::sqrt(count / 4.0))));

  std::mt19937_64 rng(seed);
  std::vector<BoundarySample> found;
  for (int axis = 0; axis < n; ++axis) {
    const auto& b = spec.bounding_box[axis];
    for (const Point& origin : line_origins(spec, axis, per_dim, rng)) {
      auto at = [&](double s) {
        Point p = origin;
        p[axis] = s;
        return p;
      };
      for (std::size_t i = 0; i < fiber.atom_count(); ++i) {
        // One step of padding on each side catches boundaries on the box.
        const double step = b.width() / kStepsPerLine;
        double s_prev = b.lo - step;
        bool pos_prev = fiber.atom_value(i, at(s_prev)) > 0.0;
        for (int k = 0; k <= kStepsPerLine + 1; ++k) {
          const double s = b.lo + step * k;
          const bool pos = fiber.atom_value(i, at(s)) > 0.0;
          if (pos != pos_prev) {
            double lo = s_prev;
            double hi = s;
            while (hi - lo > kBisectTol) {
              const double mid = 0.5 * (lo + hi);
              if ((fiber.atom_value(i, at(mid)) > 0.0) == pos_prev) {
                lo = mid;
              } else {
                hi = mid;
              }
            }
            const Point x = at(0.5 * (lo + hi));
            const Point g = fiber.atom_gradient(i, x);
            const double gn = norm(g);
            bool keep = gn >= kMinGradient;
            for (std::size_t j = 0; keep && j < fiber.atom_count(); ++j)
              if (j != i && atom_distance(fiber, j, x) <= delta) keep = false;
            if (keep) {
              const Point nu = (1.0 / gn) * g;
              keep = fiber.contains(x + delta * nu) != fiber.contains(x - delta * nu);
              if (keep) found.push_back({x, nu, i});
            }
          }
          s_prev = s;
          pos_prev = pos;
        }
      }
    }
  }
  if (found.size() > static_cast<std::size_t>(count)) {
    std::vector<BoundarySample> thin;
    thin.reserve(count);
    for (int k = 0; k < count; ++k) thin.push_back(found[found.size() * k / count]);
    found = std::move(thin);
  }
  out.samples = std::move(found);
  out.stratum_too_thin = static_cast<int>(out.samples.size()) * 10 < count;
  return out;
}

double margin(const std::vector<BoundarySample>& samples, const Direction& lambda) {
  if (samples.empty()) throw EmptySamples("no boundary samples to evaluate a margin on");
  double m = kInfinity;
  for (const auto& s : samples) m = std::min(m, std::abs(dot(lambda.vec(), s.normal)));
  return std::min(m, 1.0);
}

std::vector<Direction> candidate_directions(int dim, int directions, std::uint64_t seed) {
  if (directions < 1) throw std::invalid_argument("need at least one candidate direction");
  std::vector<Direction> out;
  if (dim == 1) {
    out.push_back(Direction::axis(0, 1));
    return out;
  }
  double u0 = 0.5;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    u0 = unit_double(rng);
  }
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int k = 0; k < directions; ++k) {
    if (dim == 2) {
      const double th = std::numbers::pi * (k + u0) / directions;
      out.emplace_back(Point{std::cos(th), std::sin(th), 0.0}, 2);
    } else {
      const double z = (k + u0) / directions;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double turns = k * golden + u0;
      turns -= std::floor(turns);
      const double ph = 2.0 * std::numbers::pi * turns;
      out.emplace_back(Point{r * std::cos(ph), r * std::sin(ph), z}, 3);
    }
  }
  for (int a = 0; a < dim; ++a) out.push_back(Direction::axis(a, dim));
  return out;
}

namespace {

double family_margin(const std::vector<BoundarySampleSet>& fibers, const Direction& lambda) {
  double m = kInfinity;
  bool any = false;
  for (const auto& f : fibers) {
    for (const auto& smp : f.samples) {
      m = std::min(m, std::abs(dot(lambda.vec(), smp.normal)));
      any = true;
    }
  }
  if (!any) throw EmptySamples("no boundary samples in any fiber");
  return std::min(m, 1.0);
}

// Sampling four times more densely should barely move a genuine margin;
// a margin that keeps shrinking is a sampling artifact of a tangency.
bool still_shrinking(double alpha, double alpha_coarse) { return alpha < 1e-6 || alpha < 0.5 * alpha_coarse; }

bool lex_less(const Direction& a, const Direction& b) {
  for (int i = 0; i < kMaxDim; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::size_t best_candidate(const std::vector<Direction>& candidates, const std::vector<BoundarySampleSet>& fibers, int jobs) {
  std::vector<double> alphas(candidates.size());
  parallel_for(candidates.size(), jobs, [&](std::size_t i) { alphas[i] = family_margin(fibers, candidates[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (alphas[i] > alphas[best] || (alphas[i] == alphas[best] && lex_less(candidates[i], candidates[best]))) best = i;
  }
  return best;
}

}  // namespace

MarginReport margin_report(const std::vector<BoundarySampleSet>& fibers, const std::vector<BoundarySampleSet>& coarse,
                           const Direction& lambda) {
  MarginReport rep;
  rep.direction = lambda;
  rep.candidates = 1;
  rep.alpha = family_margin(fibers, lambda);
  rep.alpha_coarse = family_margin(coarse, lambda);
  rep.no_regular_direction = still_shrinking(rep.alpha, rep.alpha_coarse);
  for (const auto& f : fibers) {
    FiberMargin fm;
    fm.t = f.t;
    fm.samples = static_cast<int>(f.samples.size());
    fm.stratum_too_thin = f.stratum_too_thin;
    fm.margin = f.samples.empty() ? kInfinity : margin(f.samples, lambda);
    rep.sample_count += fm.samples;
    rep.fibers.push_back(std::move(fm));
  }
  return rep;
}

MarginReport find_regular_direction(int dim, const std::vector<BoundarySampleSet>& fibers,
                                    const std::vector<BoundarySampleSet>& coarse, int directions, std::uint64_t seed,
                                    int jobs) {
  if (directions < 16) throw std::invalid_argument("find_regular_direction needs at least 16 directions");
  const auto candidates = candidate_directions(dim, directions, seed);
  const std::size_t best = best_candidate(candidates, fibers, jobs);
  const std::size_t best_coarse = best_candidate(candidates, coarse, jobs);
  MarginReport rep = margin_report(fibers, coarse, candidates[best]);
  rep.candidates = static_cast<int>(candidates.size());
  rep.alpha_coarse = family_margin(coarse, candidates[best_coarse]);
  rep.no_regular_direction = still_shrinking(rep.alpha, rep.alpha_coarse);
  return rep;
}

std::pair<std::vector<BoundarySampleSet>, std::vector<BoundarySampleSet>> sample_family(
    const DomainSpec& spec, const std::vector<ParamVector>& t_samples, int samples_per_fiber, std::uint64_t seed, int jobs) {
  const std::size_t m = t_samples.size();
  std::vector<BoundarySampleSet> all(2 * m);
  parallel_for(all.size(), jobs, [&](std::size_t i) {
    const int count = i < m ? samples_per_fiber : std::max(1, samples_per_fiber / 4);
    all[i] = sample_boundary(spec, t_samples[i % m], count, seed);
  });
  std::vector<BoundarySampleSet> coarse(std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(m)),
                                        std::make_move_iterator(all.end()));
  all.resize(m);
  return {std::move(all), std::move(coarse)};
}

MarginReport find_regular_direction(const DomainSpec& spec, const std::vector<ParamVector>& t_samples, int directions,
                                    std::uint64_t seed, int samples_per_fiber, int jobs) {
  auto [fine, coarse] = sample_family(spec, t_samples, samples_per_fiber, seed, jobs);
  return find_regular_direction(spec.ambient_dim, fine, coarse, directions, seed, jobs);
}

}  // namespace poincare
