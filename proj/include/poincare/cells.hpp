#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "poincare/domain_spec.hpp"
#include "poincare/types.hpp"

namespace poincare {

// Dense polynomial in (x, y) with double coefficients; c[i * (dy + 1) + j]
// multiplies x^i y^j.
struct BivariatePolynomial {
  int dx = 0;
  int dy = 0;
  std::vector<double> c{0.0};

  double coeff(int i, int j) const { return c[static_cast<std::size_t>(i) * (dy + 1) + j]; }
  double operator()(double x, double y) const;
  // Coefficients of y^0..y^dy at fixed x.
  std::vector<double> in_y(double x) const;
  // Coefficients of x^0..x^dx at fixed y.
  std::vector<double> in_x(double y) const;
  BivariatePolynomial derivative_y() const;
  bool is_zero() const;
};

// Substitutes the parameter values into a polynomial over (x, y, t...).
BivariatePolynomial bind_parameters(const Polynomial& p, const ParamVector& t);

// Real roots of a univariate function known to be a polynomial of degree at
// most `degree` on [a, b]: Chebyshev-Lobatto interpolation, then eigenvalues
// of the colleague matrix. identically_zero is set when every sample is
// below zero_tol (no roots are returned then).
struct UnivariateRoots {
  std::vector<double> roots;
  bool identically_zero = false;
};
UnivariateRoots chebyshev_roots(const std::function<double(double)>& f, double a, double b, int degree,
                                double zero_tol = 0.0);

// Real roots of sum coeffs[j] y^j inside (lo, hi), ascending.
std::vector<double> real_roots_in(const std::vector<double>& coeffs, double lo, double hi);

enum class CellLabel { Inside, Boundary, Outside };
const char* to_string(CellLabel label);

struct StackCell {
  enum class Kind { Graph, Band };
  Kind kind = Kind::Band;
  // Graph: values of xi at the column abscissae (in `lower`). Band: lower and
  // upper bounding values; box edges are stored as the box limits.
  std::vector<double> lower;
  std::vector<double> upper;
  bool lower_on_box = false;
  bool upper_on_box = false;
  std::vector<std::size_t> curves;  // curves vanishing on a graph cell
  CellLabel label = CellLabel::Outside;
};

struct Column {
  bool section = false;  // the line {x = c_i}
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::vector<double> xs;  // sample abscissae (first-kind Chebyshev points)
  std::vector<StackCell> cells;  // bottom to top
  bool near_tangency = false;   // bounded by a discriminant critical value
  std::vector<std::size_t> vertical_curves;  // section only: curves containing the whole line
};

struct CriticalValue {
  double x = 0.0;
  std::string origin;  // "discriminant", "intersection", "leading", "box-edge", "vertical"
};

struct CellComplex2D {
  ParamVector t;
  Interval x_box;
  Interval y_box;
  std::vector<CriticalValue> criticals;  // strictly inside x_box, ascending
  std::vector<Column> columns;           // open, section, open, ..., open
  std::vector<BivariatePolynomial> curves;  // atoms first, then extra curves
  std::size_t atom_count = 0;

  // Inside-Omega band cells of open columns.
  int inside_band_count() const;
  // Index of the column containing abscissa x (sections win within 1e-12).
  std::size_t column_of(double x) const;
};

// Critical x values of the atoms (and extra curves) of a planar fiber.
std::vector<CriticalValue> critical_values(const std::vector<BivariatePolynomial>& curves, const Interval& x_box,
                                           const Interval& y_box);

// Cylindrical decomposition of the fiber compatible with every atom zero set
// and with the extra curves (polynomials over the spec's variables).
// Throws DegenerateGeometry when root counts are not constant on a column.
CellComplex2D cell_decompose_2d(const DomainSpec& spec, const ParamVector& t, int samples_per_column,
                                const std::vector<Polynomial>& extra_curves = {});

// Merges runs band / inside graph / band of inside cells within each stack.
CellComplex2D merge_vertical(const CellComplex2D& complex);

// Cell of the complex containing (x, y): {column, cell}. Graph values are
// recomputed from the curves at x.
std::pair<std::size_t, std::size_t> locate(const CellComplex2D& complex, double x, double y);

// Value of a stack bound at an arbitrary abscissa of its column (barycentric
// interpolation through the samples).
double interpolate_bound(const Column& column, const std::vector<double>& values, double x);

// Sum over inside bands of the integral of (upper - lower) by Fejer
// quadrature on the column samples.
double band_integral(const CellComplex2D& complex);
// Largest sampled height of an inside band.
double max_band_height(const CellComplex2D& complex);

void write_cells_json(const CellComplex2D& complex, std::ostream& out);
void write_cells_dot(const CellComplex2D& complex, std::ostream& out);

}  // namespace poincare
