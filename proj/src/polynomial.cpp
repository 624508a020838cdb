#include "poincare/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace poincare {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational coefficient overflow");
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Rational Rational::from_decimal(std::string_view text) {
  i128 mantissa = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool any_digit = false;
  std::size_t i = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (mantissa > INT64_MAX) throw std::overflow_error("numeric literal too long");
      if (seen_dot) ++frac_digits;
      any_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    ++i;
    int sign = 1;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
    }
    if (i >= text.size()) throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 30) throw std::overflow_error("numeric literal exponent too large");
    }
    exponent *= sign;
  }
  int scale = exponent - frac_digits;
  i128 num = mantissa;
  i128 den = 1;
  for (int k = 0; k < std::abs(scale); ++k) {
    if (scale > 0) {
      num *= 10;
      if (num > INT64_MAX) throw std::overflow_error("numeric literal too large");
    } else {
      den *= 10;
      if (den > static_cast<i128>(INT64_MAX) * 10) throw std::overflow_error("numeric literal too precise");
    }
  }
  return make(num, den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return make(-static_cast<i128>(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

// ---------------------------------------------------------------------------

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
  Polynomial p(nvars);
  Exponents e(nvars, 0);
  e.at(var) = 1;
  p.add_term(e, Rational(1));
  return p;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

int Polynomial::total_degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) best = std::max(best, std::accumulate(e.begin(), e.end(), 0));
  return best;
}

int Polynomial::degree_in(int var) const {
  int best = -1;
  for (const auto& [e, c] : terms_) best = std::max(best, e.at(var));
  return best;
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(var) == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.add_term(d, Rational(e[var]) * c);
  }
  return out;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative exponent");
  Polynomial result = constant(nvars_, Rational(1));
  for (int i = 0; i < k; ++i) result = result * *this;
  return result;
}

Polynomial Polynomial::operator-() const { return Rational(-1) * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial variable count mismatch");
  Polynomial out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial variable count mismatch");
  Polynomial out(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial operator*(const Rational& c, const Polynomial& p) {
  Polynomial out(p.nvars_);
  for (const auto& [e, v] : p.terms_) out.add_term(e, c * v);
  return out;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exponents, Rational>> ordered(terms_.begin(), terms_.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    int da = std::accumulate(a.first.begin(), a.first.end(), 0);
    int db = std::accumulate(b.first.begin(), b.first.end(), 0);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : ordered) {
    bool negative = c.num() < 0;
    Rational mag = negative ? -c : c;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    bool is_const = std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
    bool unit = mag == Rational(1);
    bool need_star = false;
    if (!unit || is_const) {
      out << mag.str();
      need_star = true;
    }
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (need_star) out << "*";
      out << names[v];
      if (e[v] > 1) out << "^" << e[v];
      need_star = true;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

HornerPoly HornerPoly::compile(const Polynomial& p) {
  std::map<Polynomial::Exponents, double> terms;
  for (const auto& [e, c] : p.terms()) terms.emplace(e, c.to_double());
  HornerPoly out;
  out.nvars_ = p.nvars();
  out.root_ = build(terms, 0, p.nvars());
  return out;
}

HornerPoly::Node HornerPoly::build(const std::map<Polynomial::Exponents, double>& terms, int depth, int nvars) {
  Node node;
  if (depth == nvars) {
    for (const auto& [e, c] : terms) node.constant += c;
    return node;
  }
  int max_deg = -1;
  for (const auto& [e, c] : terms) max_deg = std::max(max_deg, e[depth]);
  if (max_deg < 0) {
    node.coeffs.emplace_back(build({}, depth + 1, nvars));
    return node;
  }
  std::vector<std::map<Polynomial::Exponents, double>> groups(max_deg + 1);
  for (const auto& [e, c] : terms) groups[e[depth]].emplace(e, c);
  node.coeffs.reserve(groups.size());
  for (const auto& g : groups) node.coeffs.push_back(build(g, depth + 1, nvars));
  return node;
}

double HornerPoly::eval(const Node& node, int depth, int nvars, const double* vars) {
  if (depth == nvars) return node.constant;
  const double v = vars[depth];
  std::size_t i = node.coeffs.size() - 1;
  double acc = eval(node.coeffs[i], depth + 1, nvars, vars);
  while (i-- > 0) acc = acc * v + eval(node.coeffs[i], depth + 1, nvars, vars);
  return acc;
}

double HornerPoly::operator()(std::span<const double> vars) const {
  if (static_cast<int>(vars.size()) < nvars_) throw std::invalid_argument("too few variables for polynomial");
  return eval(root_, 0, nvars_, vars.data());
}

HornerPoly::Node HornerPoly::bind(const Node& node, int depth, int keep, int nvars, const double* full) {
  if (depth == keep) {
    Node leaf;
    leaf.constant = eval(node, depth, nvars, full);
    return leaf;
  }
  Node out;
  out.coeffs.reserve(node.coeffs.size());
  for (const auto& c : node.coeffs) out.coeffs.push_back(bind(c, depth + 1, keep, nvars, full));
  return out;
}

HornerPoly HornerPoly::bind_trailing(std::span<const double> values) const {
  const int keep = nvars_ - static_cast<int>(values.size());
  if (keep < 0) throw std::invalid_argument("too many bound values");
  std::vector<double> full(nvars_, 0.0);
  std::copy(values.begin(), values.end(), full.begin() + keep);
  HornerPoly out;
  out.nvars_ = keep;
  out.root_ = bind(root_, 0, keep, nvars_, full.data());
  return out;
}

}  // namespace poincare
