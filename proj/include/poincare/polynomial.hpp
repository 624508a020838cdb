#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace poincare {

// Exact rational with 64-bit numerator and denominator. Arithmetic throws
// std::overflow_error instead of wrapping.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Accepts "12", "0.05", "1.5e-3".
  static Rational from_decimal(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Sparse multivariate polynomial with rational coefficients. Variables are
// addressed by index; the DSL uses the order (x1..xn, t1..tk).
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}
  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int var);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  int degree_in(int var) const;
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  // Returns the constant value; only meaningful when total_degree() <= 0.
  Rational constant_term() const;

  Polynomial derivative(int var) const;
  Polynomial pow(int k) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  // Canonical text: terms by descending total degree then descending
  // exponents, e.g. "x^2 + y^2 - 1" or "-3/2*x*y + t".
  std::string to_string(std::span<const std::string> names) const;

 private:
  void add_term(const Exponents& e, const Rational& c);

  int nvars_ = 0;
  std::map<Exponents, Rational> terms_;
};

// Nested Horner form with double coefficients. Variable 0 is the outermost
// loop. Binding trailing variables pre-evaluates the inner levels with the
// same floating-point operations a full evaluation would perform, so a bound
// polynomial reproduces full evaluation bit for bit.
class HornerPoly {
 public:
  HornerPoly() = default;
  static HornerPoly compile(const Polynomial& p);

  int nvars() const { return nvars_; }
  double operator()(std::span<const double> vars) const;
  HornerPoly bind_trailing(std::span<const double> values) const;

 private:
  struct Node {
    double constant = 0.0;
    std::vector<Node> coeffs;  // coeffs[i] multiplies v^i; empty at leaves
  };

  static Node build(const std::map<Polynomial::Exponents, double>& terms, int depth, int nvars);
  static double eval(const Node& node, int depth, int nvars, const double* vars);
  static Node bind(const Node& node, int depth, int keep, int nvars, const double* tail);

  int nvars_ = 0;
  Node root_;
};

}  // namespace poincare
