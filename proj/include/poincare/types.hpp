#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace poincare {

// Points and directions live in R^n with n <= 3; unused trailing components
// stay zero.
using Point = std::array<double, 3>;
using ParamVector = std::vector<double>;

inline constexpr int kMaxDim = 3;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline Point axis_vector(int axis) {
  Point e{0.0, 0.0, 0.0};
  e.at(axis) = 1.0;
  return e;
}

// Unit vector in R^n. Construction normalizes and rejects zero vectors.
class Direction {
 public:
  Direction() = default;
  Direction(const Point& v, int dim);
  static Direction axis(int axis, int dim) { return Direction(axis_vector(axis), dim); }

  const Point& vec() const { return v_; }
  int dim() const { return dim_; }
  double operator[](int i) const { return v_[i]; }
  Direction flipped() const;

 private:
  Point v_{0.0, 0.0, 0.0};
  int dim_ = 0;
};

inline Direction::Direction(const Point& v, int dim) : dim_(dim) {
  double n = 0.0;
  for (int i = 0; i < dim; ++i) n += v[i] * v[i];
  n = std::sqrt(n);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("direction must be a nonzero finite vector");
  for (int i = 0; i < dim; ++i) v_[i] = v[i] / n;
}

inline Direction Direction::flipped() const {
  Direction d = *this;
  for (auto& c : d.v_) c = -c;
  return d;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_double(rng); }

}  // namespace poincare
