#include "thetabody/monomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "thetabody/errors.hpp"

namespace thetabody {

Monomial::Monomial(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw InputError("negative exponent in monomial");
  }
}

Monomial Monomial::variable(int dim, int index) {
  Monomial m(dim);
  m.exponents_.at(index) = 1;
  return m;
}

int Monomial::degree() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (other.dim() != dim()) throw InputError("monomial dimension mismatch");
  Monomial out = *this;
  for (int i = 0; i < dim(); ++i) out.exponents_[i] += other.exponents_[i];
  return out;
}

Monomial Monomial::lcm(const Monomial& other) const {
  if (other.dim() != dim()) throw InputError("monomial dimension mismatch");
  Monomial out = *this;
  for (int i = 0; i < dim(); ++i)
    out.exponents_[i] = std::max(out.exponents_[i], other.exponents_[i]);
  return out;
}

bool Monomial::divides(const Monomial& other) const {
  for (int i = 0; i < dim(); ++i) {
    if (exponents_[i] > other.exponents_[i]) return false;
  }
  return true;
}

Rational Monomial::evaluate(const RationalVector& point) const {
  if (static_cast<int>(point.size()) != dim())
    throw InputError("point dimension does not match monomial");
  Rational v = 1;
  for (int i = 0; i < dim(); ++i) {
    for (int e = 0; e < exponents_[i]; ++e) v *= point[i];
  }
  return v;
}

double Monomial::evaluate(const std::vector<double>& point) const {
  if (static_cast<int>(point.size()) != dim())
    throw InputError("point dimension does not match monomial");
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) {
    for (int e = 0; e < exponents_[i]; ++e) v *= point[i];
  }
  return v;
}

std::string Monomial::to_string() const {
  std::string out;
  for (int i = 0; i < dim(); ++i) {
    if (exponents_[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += 'x' + std::to_string(i + 1);
    if (exponents_[i] > 1) out += '^' + std::to_string(exponents_[i]);
  }
  return out.empty() ? "1" : out;
}

Monomial parse_monomial(std::string_view text, int dim) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  Monomial m(dim);
  if (text == "1") return m;
  std::vector<int> e(dim, 0);
  while (!text.empty()) {
    const auto star = text.find('*');
    std::string_view factor = trim(text.substr(0, star));
    text = star == std::string_view::npos ? std::string_view{} : text.substr(star + 1);
    if (factor.size() < 2 || factor.front() != 'x')
      throw InputError("malformed monomial factor '" + std::string(factor) + "'");
    factor.remove_prefix(1);
    const auto caret = factor.find('^');
    const std::string var(factor.substr(0, caret));
    const std::string pow =
        caret == std::string_view::npos ? "1" : std::string(factor.substr(caret + 1));
    auto all_digits = [](const std::string& s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
      });
    };
    if (!all_digits(var) || !all_digits(pow))
      throw InputError("malformed monomial factor 'x" + std::string(factor) + "'");
    const int index = std::stoi(var) - 1;
    if (index < 0 || index >= dim)
      throw InputError("variable x" + var + " out of range for dimension " +
                       std::to_string(dim));
    e[index] += std::stoi(pow);
  }
  return Monomial(std::move(e));
}

int degrevlex_compare(const Monomial& a, const Monomial& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  for (int i = a.dim() - 1; i >= 0; --i) {
    if (a.exponent(i) != b.exponent(i)) return a.exponent(i) < b.exponent(i) ? 1 : -1;
  }
  return 0;
}

bool basis_order_less(const Monomial& a, const Monomial& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  return degrevlex_compare(a, b) > 0;
}

std::vector<Monomial> monomials_up_to(int dim, int max_degree) {
  std::vector<Monomial> out;
  std::vector<int> e(dim, 0);
  // Odometer over exponent vectors with total degree <= max_degree.
  auto recurse = [&](auto&& self, int var, int remaining) -> void {
    if (var == dim) {
      out.emplace_back(e);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      e[var] = k;
      self(self, var + 1, remaining - k);
    }
    e[var] = 0;
  };
  recurse(recurse, 0, max_degree);
  std::sort(out.begin(), out.end(), basis_order_less);
  return out;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.dim() != dim_) throw InputError("polynomial term dimension mismatch");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator*(const Monomial& m) const {
  Polynomial out(dim_);
  for (const auto& [t, c] : terms_) out.add_term(t * m, c);
  return out;
}

Rational Polynomial::evaluate(const RationalVector& point) const {
  Rational v = 0;
  for (const auto& [m, c] : terms_) v += c * m.evaluate(point);
  return v;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Monomial, Rational>> sorted(terms_.begin(), terms_.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return basis_order_less(b.first, a.first);
  });
  std::string out;
  for (const auto& [m, c] : sorted) {
    std::string coeff = c.get_str();
    if (!out.empty()) out += sgn(c) < 0 ? " - " : " + ";
    else if (sgn(c) < 0) out += "-";
    if (sgn(c) < 0) coeff = Rational(-c).get_str();
    if (m.degree() == 0) out += coeff;
    else if (coeff == "1") out += m.to_string();
    else out += coeff + "*" + m.to_string();
  }
  return out;
}

}  // namespace thetabody
