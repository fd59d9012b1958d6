#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "thetabody/rational.hpp"

namespace thetabody {

// x^e = prod_i x_i^{e_i}; variables are printed 1-based (x1, x2, ...).
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(int dim) : exponents_(dim, 0) {}
  explicit Monomial(std::vector<int> exponents);

  static Monomial one(int dim) { return Monomial(dim); }
  static Monomial variable(int dim, int index);

  int dim() const { return static_cast<int>(exponents_.size()); }
  int degree() const;
  int exponent(int i) const { return exponents_.at(i); }
  const std::vector<int>& exponents() const { return exponents_; }

  Monomial operator*(const Monomial& other) const;
  // Componentwise max: the union U ∪ U' for squarefree x^U.
  Monomial lcm(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  Rational evaluate(const RationalVector& point) const;
  double evaluate(const std::vector<double>& point) const;

  // "1", "x1", "x1^2*x3".
  std::string to_string() const;

  // Lexicographic on the exponent vector; only used for map keys.
  auto operator<=>(const Monomial&) const = default;

 private:
  std::vector<int> exponents_;
};

// Parses the to_string() syntax for a given ambient dimension.
Monomial parse_monomial(std::string_view text, int dim);

// Graded reverse lexicographic order, x1 > x2 > ... > xn.
// Returns <0, 0, >0 like a three-way compare.
int degrevlex_compare(const Monomial& a, const Monomial& b);

// Degree ascending, and inside a degree the degrevlex-larger monomial first
// (1, x1, x2, x1^2, x1*x2, x2^2, ...). This is the order of quotient bases.
bool basis_order_less(const Monomial& a, const Monomial& b);

// All monomials of total degree <= max_degree in basis order.
std::vector<Monomial> monomials_up_to(int dim, int max_degree);

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(const Monomial& m, const Rational& c);
  Polynomial operator*(const Monomial& m) const;
  Rational evaluate(const RationalVector& point) const;

  std::string to_string() const;

 private:
  int dim_ = 0;
  std::map<Monomial, Rational> terms_;
};

}  // namespace thetabody
