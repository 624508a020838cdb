#include "poincare/cells.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include <Eigen/Dense>
#include <json.hpp>
#include <unsupported/Eigen/Polynomials>

#include "poincare/error.hpp"
#include "poincare/report.hpp"

namespace poincare {

double BivariatePolynomial::operator()(double x, double y) const {
  double acc = 0.0;
  for (int i = dx; i >= 0; --i) {
    double inner = 0.0;
    for (int j = dy; j >= 0; --j) inner = inner * y + coeff(i, j);
    acc = acc * x + inner;
  }
  return acc;
}

std::vector<double> BivariatePolynomial::in_y(double x) const {
  std::vector<double> out(dy + 1, 0.0);
  for (int j = 0; j <= dy; ++j) {
    double acc = 0.0;
    for (int i = dx; i >= 0; --i) acc = acc * x + coeff(i, j);
    out[j] = acc;
  }
  return out;
}

std::vector<double> BivariatePolynomial::in_x(double y) const {
  std::vector<double> out(dx + 1, 0.0);
  for (int i = 0; i <= dx; ++i) {
    double acc = 0.0;
    for (int j = dy; j >= 0; --j) acc = acc * y + coeff(i, j);
    out[i] = acc;
  }
  return out;
}

BivariatePolynomial BivariatePolynomial::derivative_y() const {
  BivariatePolynomial d;
  d.dx = dx;
  d.dy = std::max(0, dy - 1);
  d.c.assign(static_cast<std::size_t>(d.dx + 1) * (d.dy + 1), 0.0);
  for (int i = 0; i <= dx; ++i)
    for (int j = 1; j <= dy; ++j) d.c[static_cast<std::size_t>(i) * (d.dy + 1) + j - 1] = j * coeff(i, j);
  return d;
}

bool BivariatePolynomial::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

BivariatePolynomial bind_parameters(const Polynomial& p, const ParamVector& t) {
  if (p.nvars() != 2 + static_cast<int>(t.size())) throw std::invalid_argument("polynomial is not over (x, y, t...)");
  BivariatePolynomial b;
  std::map<std::pair<int, int>, double> acc;
  for (const auto& [e, coef] : p.terms()) {
    double v = coef.to_double();
    for (std::size_t k = 0; k < t.size(); ++k) v *= std::pow(t[k], e[2 + k]);
    acc[{e[0], e[1]}] += v;
  }
  for (const auto& [e, v] : acc) {
    if (v == 0.0) continue;
    b.dx = std::max(b.dx, e.first);
    b.dy = std::max(b.dy, e.second);
  }
  b.c.assign(static_cast<std::size_t>(b.dx + 1) * (b.dy + 1), 0.0);
  for (const auto& [e, v] : acc)
    if (v != 0.0) b.c[static_cast<std::size_t>(e.first) * (b.dy + 1) + e.second] = v;
  return b;
}

UnivariateRoots chebyshev_roots(const std::function<double(double)>& f, double a, double b, int degree, double zero_tol) {
  UnivariateRoots out;
  const int n = std::max(1, degree);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<double> fk(n + 1);
  double fmax = 0.0;
  for (int k = 0; k <= n; ++k) {
    fk[k] = f(mid + half * std::cos(std::numbers::pi * k / n));
    fmax = std::max(fmax, std::abs(fk[k]));
  }
  if (fmax <= zero_tol) {
    out.identically_zero = true;
    return out;
  }
  std::vector<double> c(n + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 0.5 : 1.0;
      s += w * fk[k] * std::cos(std::numbers::pi * j * k / n);
    }
    c[j] = 2.0 * s / n;
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  int m = n;
  while (m > 0 && std::abs(c[m]) <= 1e-12 * cmax) --m;
  if (m == 0) return out;

  std::vector<double> ts;
  if (m == 1) {
    ts.push_back(-c[0] / c[1]);
  } else {
    Eigen::MatrixXd col = Eigen::MatrixXd::Zero(m, m);
    col(0, 1) = 1.0;
    for (int i = 1; i < m - 1; ++i) {
      col(i, i - 1) = 0.5;
      col(i, i + 1) = 0.5;
    }
    col(m - 1, m - 2) += 0.5;
    for (int j = 0; j < m; ++j) col(m - 1, j) -= c[j] / (2.0 * c[m]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(col, false);
    if (es.info() != Eigen::Success) throw DegenerateGeometry(a, b, "colleague eigenvalue solve failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const auto z = es.eigenvalues()[i];
      if (std::abs(z.imag()) <= 1e-6) ts.push_back(z.real());
    }
  }
  for (double t : ts)
    if (t >= -1.0 - 1e-9 && t <= 1.0 + 1e-9) out.roots.push_back(mid + half * std::clamp(t, -1.0, 1.0));
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

namespace {

double horner(const std::vector<double>& a, double y) {
  double acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * y + *it;
  return acc;
}

double horner_derivative(const std::vector<double>& a, double y) {
  double acc = 0.0;
  for (std::size_t j = a.size(); j-- > 1;) acc = acc * y + static_cast<double>(j) * a[j];
  return acc;
}

}  // namespace

std::vector<double> real_roots_in(const std::vector<double>& coeffs, double lo, double hi) {
  std::vector<double> a = coeffs;
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  if (amax == 0.0) return {};
  while (a.size() > 1 && std::abs(a.back()) <= 1e-14 * amax) a.pop_back();
  std::vector<double> roots;
  if (a.size() <= 1) return roots;
  if (a.size() == 2) {
    roots.push_back(-a[0] / a[1]);
  } else {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(v);
    solver.realRoots(roots, 1e-6 * std::max(1.0, hi - lo));
  }
  const double tol = 1e-9 * (hi - lo);
  std::vector<double> out;
  for (double y : roots) {
    for (int it = 0; it < 3; ++it) {
      const double d = horner_derivative(a, y);
      if (d == 0.0) break;
      const double step = horner(a, y) / d;
      if (!std::isfinite(step) || std::abs(step) > 1e-3 * (hi - lo)) break;
      y -= step;
    }
    if (y > lo + tol && y < hi - tol) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const char* to_string(CellLabel label) {
  switch (label) {
    case CellLabel::Inside: return "inside";
    case CellLabel::Boundary: return "boundary";
    case CellLabel::Outside: return "outside";
  }
  return "?";
}

int CellComplex2D::inside_band_count() const {
  int n = 0;
  for (const auto& col : columns) {
    if (col.section) continue;
    for (const auto& cell : col.cells)
      if (cell.kind == StackCell::Kind::Band && cell.label == CellLabel::Inside) ++n;
  }
  return n;
}

std::size_t CellComplex2D::column_of(double x) const {
  const double tol = 1e-12 * std::max(1.0, x_box.width());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto& col = columns[i];
    if (col.section && std::abs(x - col.x_lo) <= tol) return i;
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto& col = columns[i];
    if (!col.section && x >= col.x_lo && x <= col.x_hi) return i;
  }
  throw std::invalid_argument("abscissa outside the bounding box");
}

namespace {

double resultant_y(const std::vector<double>& p, const std::vector<double>& q) {
  const int m = static_cast<int>(p.size()) - 1;
  const int n = static_cast<int>(q.size()) - 1;
  const int size = m + n;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size, size);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= m; ++j) s(r, r + j) = p[m - j];
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= n; ++j) s(n + r, r + j) = q[n - j];
  return s.partialPivLu().determinant();
}

double hadamard_bound(const std::vector<double>& p, const std::vector<double>& q) {
  double np = 0.0;
  double nq = 0.0;
  for (double v : p) np += v * v;
  for (double v : q) nq += v * v;
  const int m = static_cast<int>(p.size()) - 1;
  const int n = static_cast<int>(q.size()) - 1;
  return std::pow(std::sqrt(np), n) * std::pow(std::sqrt(nq), m);
}

// Roots in x of Res_y(p, q) over the box interval.
UnivariateRoots resultant_roots(const BivariatePolynomial& p, const BivariatePolynomial& q, const Interval& xb) {
  const int m = p.dy;
  const int n = q.dy;
  const int degree = std::min(200, std::max(1, n * p.dx + m * q.dx));
  double scale = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const double x = xb.lo + xb.width() * k / 8.0;
    scale = std::max(scale, hadamard_bound(p.in_y(x), q.in_y(x)));
  }
  return chebyshev_roots([&](double x) { return resultant_y(p.in_y(x), q.in_y(x)); }, xb.lo, xb.hi, degree,
                         1e-10 * scale);
}

UnivariateRoots polynomial_roots_x(const std::vector<double>& coeffs, const Interval& xb) {
  UnivariateRoots out;
  double amax = 0.0;
  for (double v : coeffs) amax = std::max(amax, std::abs(v));
  if (amax == 0.0) {
    out.identically_zero = true;
    return out;
  }
  const double pad = 1e-6 * xb.width();
  out.roots = real_roots_in(coeffs, xb.lo - pad, xb.hi + pad);
  return out;
}

struct StackRoot {
  double y;
  std::vector<std::size_t> curves;
};

// Union of the y-roots of all curves at x, merged within tolerance.
std::vector<StackRoot> stack_roots(const std::vector<BivariatePolynomial>& curves, double x, const Interval& yb,
                                   double merge_tol, std::vector<std::size_t>* vertical) {
  std::vector<StackRoot> all;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto a = curves[i].in_y(x);
    double scale = 0.0;
    for (int j = 0; j <= curves[i].dy; ++j)
      for (int k = 0; k <= curves[i].dx; ++k) scale = std::max(scale, std::abs(curves[i].coeff(k, j)) * std::pow(std::max(1.0, std::abs(x)), k));
    bool vanishes = true;
    for (double v : a)
      if (std::abs(v) > 1e-11 * scale) vanishes = false;
    if (vanishes) {
      if (vertical) vertical->push_back(i);
      continue;
    }
    for (double y : real_roots_in(a, yb.lo, yb.hi)) all.push_back({y, {i}});
  }
  std::sort(all.begin(), all.end(), [](const StackRoot& l, const StackRoot& r) { return l.y < r.y; });
  std::vector<StackRoot> merged;
  for (auto& r : all) {
    if (!merged.empty() && r.y - merged.back().y <= merge_tol) {
      for (std::size_t c : r.curves)
        if (std::find(merged.back().curves.begin(), merged.back().curves.end(), c) == merged.back().curves.end())
          merged.back().curves.push_back(c);
      continue;
    }
    merged.push_back(std::move(r));
  }
  return merged;
}

// First-kind Chebyshev points of (a, b), ascending, with barycentric and
// Fejer weights.
struct Nodes {
  std::vector<double> x;
  std::vector<double> bary;
  std::vector<double> fejer;
};

Nodes chebyshev_nodes(double a, double b, int s) {
  Nodes nd;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int k = s - 1; k >= 0; --k) {
    const double th = (2.0 * k + 1.0) * std::numbers::pi / (2.0 * s);
    nd.x.push_back(mid + half * std::cos(th));
    nd.bary.push_back((k % 2 == 0 ? 1.0 : -1.0) * std::sin(th));
    double sum = 0.0;
    for (int j = 1; j <= s / 2; ++j) sum += std::cos(2.0 * j * th) / (4.0 * j * j - 1.0);
    nd.fejer.push_back(half * (2.0 / s) * (1.0 - 2.0 * sum));
  }
  return nd;
}

// A point computed on a curve may land on either side of it by rounding, so
// the label comes from the ball of radius delta: inside when the point and
// the whole ring are inside, outside when none of them is.
CellLabel label_point(const Fiber& fiber, double x, double y, double delta) {
  int in = fiber.contains({x, y, 0.0}) ? 1 : 0;
  for (int k = 0; k < 8; ++k) {
    const double th = std::numbers::pi * k / 4.0;
    in += fiber.contains({x + delta * std::cos(th), y + delta * std::sin(th), 0.0});
  }
  if (in == 9) return CellLabel::Inside;
  return in == 0 ? CellLabel::Outside : CellLabel::Boundary;
}

}  // namespace

std::vector<CriticalValue> critical_values(const std::vector<BivariatePolynomial>& curves, const Interval& x_box,
                                           const Interval& y_box) {
  std::vector<CriticalValue> raw;
  auto add = [&](const UnivariateRoots& r, const char* origin) {
    for (double x : r.roots) raw.push_back({x, origin});
  };
  for (const auto& p : curves) {
    std::vector<double> lead(p.dx + 1);
    for (int i = 0; i <= p.dx; ++i) lead[i] = p.coeff(i, p.dy);
    add(polynomial_roots_x(lead, x_box), p.dy == 0 ? "vertical" : "leading");
    if (p.dy >= 2) {
      // Repeated factors make the discriminant vanish identically; move to
      // higher derivatives until it does not.
      BivariatePolynomial f = p;
      BivariatePolynomial g = p.derivative_y();
      while (g.dy >= 1) {
        const auto r = resultant_roots(f, g, x_box);
        if (!r.identically_zero) {
          add(r, "discriminant");
          break;
        }
        f = g;
        g = g.derivative_y();
      }
    }
    if (p.dy >= 1) {
      for (double yb : {y_box.lo, y_box.hi}) {
        const auto r = polynomial_roots_x(p.in_x(yb), x_box);
        if (!r.identically_zero) add(r, "box-edge");
      }
    }
  }
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i + 1; j < curves.size(); ++j)
      if (curves[i].dy >= 1 && curves[j].dy >= 1) {
        const auto r = resultant_roots(curves[i], curves[j], x_box);
        if (!r.identically_zero) add(r, "intersection");
      }

  const double w = x_box.width();
  std::sort(raw.begin(), raw.end(), [](const CriticalValue& a, const CriticalValue& b) { return a.x < b.x; });
  std::vector<CriticalValue> out;
  std::vector<std::set<std::string>> origins;
  for (const auto& c : raw) {
    if (!(c.x > x_box.lo + 1e-9 * w && c.x < x_box.hi - 1e-9 * w)) continue;
    if (!out.empty() && c.x - out.back().x <= 1e-7 * w) {
      origins.back().insert(c.origin);
      continue;
    }
    out.push_back(c);
    origins.push_back({c.origin});
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::string joined;
    for (const auto& o : origins[i]) joined += (joined.empty() ? "" : "+") + o;
    out[i].origin = joined;
  }
  return out;
}

namespace {

// Cells of one stack from its roots; graph k sits at index 2k + 1.
std::vector<StackCell> build_stack(const std::vector<std::vector<StackRoot>>& roots_at, const Interval& yb) {
  const std::size_t s = roots_at.size();
  const std::size_t m = roots_at.front().size();
  std::vector<StackCell> cells;
  for (std::size_t k = 0; k <= m; ++k) {
    StackCell band;
    band.kind = StackCell::Kind::Band;
    band.lower_on_box = k == 0;
    band.upper_on_box = k == m;
    for (std::size_t i = 0; i < s; ++i) {
      band.lower.push_back(k == 0 ? yb.lo : roots_at[i][k - 1].y);
      band.upper.push_back(k == m ? yb.hi : roots_at[i][k].y);
    }
    cells.push_back(std::move(band));
    if (k == m) break;
    StackCell graph;
    graph.kind = StackCell::Kind::Graph;
    graph.curves = roots_at.front()[k].curves;
    for (std::size_t i = 0; i < s; ++i) graph.lower.push_back(roots_at[i][k].y);
    cells.push_back(std::move(graph));
  }
  return cells;
}

}  // namespace

CellComplex2D cell_decompose_2d(const DomainSpec& spec, const ParamVector& t, int samples_per_column,
                                const std::vector<Polynomial>& extra_curves) {
  if (spec.ambient_dim != 2) throw std::invalid_argument("cell decomposition needs a planar domain");
  if (samples_per_column < 1) throw std::invalid_argument("samples_per_column must be positive");
  const Fiber fiber(spec, t);
  CellComplex2D cx;
  cx.t = t;
  cx.x_box = spec.bounding_box[0];
  cx.y_box = spec.bounding_box[1];
  for (const auto& a : spec.atoms) cx.curves.push_back(bind_parameters(a.poly, t));
  cx.atom_count = cx.curves.size();
  for (const auto& e : extra_curves) {
    auto b = bind_parameters(e, t);
    if (b.is_zero()) throw std::invalid_argument("extra curve is identically zero");
    cx.curves.push_back(std::move(b));
  }
  cx.criticals = critical_values(cx.curves, cx.x_box, cx.y_box);

  const double merge_tol = 1e-9 * cx.y_box.width();
  const double section_merge_tol = 1e-6 * cx.y_box.width();
  const double delta = 1e-6 * std::hypot(cx.x_box.width(), cx.y_box.width());
  std::vector<double> cuts{cx.x_box.lo};
  for (const auto& c : cx.criticals) cuts.push_back(c.x);
  cuts.push_back(cx.x_box.hi);
  auto is_tangency = [&](std::size_t cut) {
    return cut > 0 && cut + 1 < cuts.size() && cx.criticals[cut - 1].origin.find("discriminant") != std::string::npos;
  };

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (i > 0) {
      Column sec;
      sec.section = true;
      sec.x_lo = sec.x_hi = cuts[i];
      sec.xs = {cuts[i]};
      sec.near_tangency = is_tangency(i);
      auto roots = stack_roots(cx.curves, cuts[i], cx.y_box, section_merge_tol, &sec.vertical_curves);
      sec.cells = build_stack({roots}, cx.y_box);
      for (auto& cell : sec.cells) {
        const double y = cell.kind == StackCell::Kind::Graph ? cell.lower[0] : 0.5 * (cell.lower[0] + cell.upper[0]);
        cell.label = label_point(fiber, cuts[i], y, delta);
      }
      cx.columns.push_back(std::move(sec));
    }
    Column col;
    col.x_lo = cuts[i];
    col.x_hi = cuts[i + 1];
    col.near_tangency = is_tangency(i) || is_tangency(i + 1);
    const Nodes nd = chebyshev_nodes(col.x_lo, col.x_hi, samples_per_column);
    col.xs = nd.x;
    std::vector<std::vector<StackRoot>> roots_at;
    for (double x : col.xs) {
      roots_at.push_back(stack_roots(cx.curves, x, cx.y_box, merge_tol, nullptr));
      if (roots_at.back().size() != roots_at.front().size())
        throw DegenerateGeometry(col.x_lo, col.x_hi, "number of curve roots changes inside a column");
    }
    col.cells = build_stack(roots_at, cx.y_box);
    const std::size_t mid = col.xs.size() / 2;
    for (auto& cell : col.cells) {
      if (cell.kind == StackCell::Kind::Band) {
        const double y = 0.5 * (cell.lower[mid] + cell.upper[mid]);
        cell.label = fiber.contains({col.xs[mid], y, 0.0}) ? CellLabel::Inside : CellLabel::Outside;
      } else {
        cell.label = label_point(fiber, col.xs[mid], cell.lower[mid], delta);
      }
    }
    cx.columns.push_back(std::move(col));
  }
  return cx;
}

CellComplex2D merge_vertical(const CellComplex2D& complex) {
  CellComplex2D out = complex;
  for (auto& col : out.columns) {
    std::vector<StackCell> merged;
    for (const auto& cell : col.cells) {
      const std::size_t n = merged.size();
      if (cell.kind == StackCell::Kind::Band && cell.label == CellLabel::Inside && n >= 2 &&
          merged[n - 1].kind == StackCell::Kind::Graph && merged[n - 1].label == CellLabel::Inside &&
          merged[n - 2].kind == StackCell::Kind::Band && merged[n - 2].label == CellLabel::Inside) {
        merged.pop_back();
        merged.back().upper = cell.upper;
        merged.back().upper_on_box = cell.upper_on_box;
        continue;
      }
      merged.push_back(cell);
    }
    col.cells = std::move(merged);
  }
  return out;
}

double interpolate_bound(const Column& column, const std::vector<double>& values, double x) {
  if (values.size() == 1) return values[0];
  const Nodes nd = chebyshev_nodes(column.x_lo, column.x_hi, static_cast<int>(column.xs.size()));
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < column.xs.size(); ++k) {
    const double d = x - column.xs[k];
    if (d == 0.0) return values[k];
    const double w = nd.bary[k] / d;
    num += w * values[k];
    den += w;
  }
  return num / den;
}

std::pair<std::size_t, std::size_t> locate(const CellComplex2D& complex, double x, double y) {
  const std::size_t ci = complex.column_of(x);
  const Column& col = complex.columns[ci];
  const double tol = 1e-9 * complex.y_box.width();
  const auto roots = stack_roots(complex.curves, x, complex.y_box, col.section ? 1e-6 * complex.y_box.width() : tol, nullptr);
  // Graph bounds come from the recomputed roots; the stack lists the graphs
  // of the unmerged complex in order, merged stacks skip some of them.
  const bool exact = [&] {
    std::size_t total_graphs = 0;
    for (const auto& cell : col.cells) total_graphs += cell.kind == StackCell::Kind::Graph;
    return roots.size() == total_graphs;
  }();
  std::size_t root = 0;
  for (std::size_t k = 0; k < col.cells.size(); ++k) {
    const auto& cell = col.cells[k];
    if (cell.kind == StackCell::Kind::Graph) {
      const double g = exact ? roots[root].y : interpolate_bound(col, cell.lower, x);
      ++root;
      if (std::abs(y - g) <= tol) return {ci, k};
      continue;
    }
    double hi = complex.y_box.hi;
    if (!cell.upper_on_box) hi = exact ? roots[root].y : interpolate_bound(col, cell.upper, x);
    if (y < hi - tol || (cell.upper_on_box && y <= hi)) return {ci, k};
  }
  return {ci, col.cells.size() - 1};
}

double band_integral(const CellComplex2D& complex) {
  double total = 0.0;
  for (const auto& col : complex.columns) {
    if (col.section) continue;
    const Nodes nd = chebyshev_nodes(col.x_lo, col.x_hi, static_cast<int>(col.xs.size()));
    for (const auto& cell : col.cells) {
      if (cell.kind != StackCell::Kind::Band || cell.label != CellLabel::Inside) continue;
      for (std::size_t k = 0; k < col.xs.size(); ++k) total += nd.fejer[k] * (cell.upper[k] - cell.lower[k]);
    }
  }
  return total;
}

double max_band_height(const CellComplex2D& complex) {
  double best = 0.0;
  for (const auto& col : complex.columns) {
    if (col.section) continue;
    for (const auto& cell : col.cells) {
      if (cell.kind != StackCell::Kind::Band || cell.label != CellLabel::Inside) continue;
      for (std::size_t k = 0; k < col.xs.size(); ++k) best = std::max(best, cell.upper[k] - cell.lower[k]);
    }
  }
  return best;
}

nlohmann::ordered_json to_json(const CellComplex2D& complex) {
  nlohmann::ordered_json j;
  j["t"] = complex.t;
  j["x_box"] = {complex.x_box.lo, complex.x_box.hi};
  j["y_box"] = {complex.y_box.lo, complex.y_box.hi};
  j["c1_certified"] = false;
  auto& crit = j["criticals"] = nlohmann::ordered_json::array();
  for (const auto& c : complex.criticals) crit.push_back({{"x", c.x}, {"origin", c.origin}});
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  for (const auto& col : complex.columns) {
    nlohmann::ordered_json jc;
    jc["kind"] = col.section ? "section" : "open";
    jc["x"] = {col.x_lo, col.x_hi};
    jc["near_tangency"] = col.near_tangency;
    if (!col.vertical_curves.empty()) jc["vertical_curves"] = col.vertical_curves;
    jc["abscissae"] = col.xs;
    auto& cells = jc["cells"] = nlohmann::ordered_json::array();
    for (const auto& cell : col.cells) {
      nlohmann::ordered_json jcell;
      jcell["kind"] = cell.kind == StackCell::Kind::Graph ? "graph" : "band";
      jcell["label"] = to_string(cell.label);
      if (cell.kind == StackCell::Kind::Graph) {
        jcell["xi"] = cell.lower;
        jcell["curves"] = cell.curves;
      } else {
        jcell["lower"] = cell.lower_on_box ? nlohmann::ordered_json("box") : nlohmann::ordered_json(cell.lower);
        jcell["upper"] = cell.upper_on_box ? nlohmann::ordered_json("box") : nlohmann::ordered_json(cell.upper);
      }
      cells.push_back(std::move(jcell));
    }
    cols.push_back(std::move(jc));
  }
  j["inside_bands"] = complex.inside_band_count();
  return j;
}

void write_cells_json(const CellComplex2D& complex, std::ostream& out) { out << to_json(complex).dump(2) << "\n"; }

void write_cells_dot(const CellComplex2D& complex, std::ostream& out) {
  auto name = [](std::size_t c, std::size_t k) { return "c" + std::to_string(c) + "_" + std::to_string(k); };
  out << "graph cells {\n  rankdir=LR;\n";
  for (std::size_t c = 0; c < complex.columns.size(); ++c) {
    const auto& col = complex.columns[c];
    out << "  subgraph cluster_" << c << " {\n    label=\"";
    if (col.section) {
      out << "x = " << col.x_lo;
    } else {
      out << "column " << col.x_lo << " .. " << col.x_hi;
    }
    out << "\";\n";
    for (std::size_t k = 0; k < col.cells.size(); ++k) {
      const auto& cell = col.cells[k];
      const char* shape = cell.kind == StackCell::Kind::Graph ? "ellipse" : "box";
      const char* color = cell.label == CellLabel::Inside ? "palegreen" : cell.label == CellLabel::Boundary ? "gold" : "white";
      out << "    " << name(c, k) << " [shape=" << shape << ", style=filled, fillcolor=" << color << ", label=\""
          << (cell.kind == StackCell::Kind::Graph ? "graph" : "band") << " " << k << "\"];\n";
      if (k > 0) out << "    " << name(c, k - 1) << " -- " << name(c, k) << ";\n";
    }
    out << "  }\n";
  }
  // Cells of an open column touch the section cells whose y-range meets the
  // limit of their closure; limits are extrapolated from the samples, so the
  // adjacency is approximate near tangencies.
  const double tol = 0.02 * complex.y_box.width();
  for (std::size_t c = 0; c < complex.columns.size(); ++c) {
    const auto& sec = complex.columns[c];
    if (!sec.section) continue;
    for (std::size_t side : {c - 1, c + 1}) {
      const auto& col = complex.columns[side];
      for (std::size_t k = 0; k < col.cells.size(); ++k) {
        const auto& cell = col.cells[k];
        const double lo = cell.kind == StackCell::Kind::Band && cell.lower_on_box ? complex.y_box.lo
                                                                                   : interpolate_bound(col, cell.lower, sec.x_lo);
        const double hi = cell.kind == StackCell::Kind::Graph ? lo
                          : cell.upper_on_box                 ? complex.y_box.hi
                                                              : interpolate_bound(col, cell.upper, sec.x_lo);
        for (std::size_t s = 0; s < sec.cells.size(); ++s) {
          const auto& sc = sec.cells[s];
          const double slo = sc.lower[0];
          const double shi = sc.kind == StackCell::Kind::Graph ? slo : sc.upper[0];
          if (slo <= hi + tol && shi >= lo - tol) out << "  " << name(side, k) << " -- " << name(c, s) << ";\n";
        }
      }
    }
  }
  out << "}\n";
}

}  // namespace poincare
