#include "thetabody/quotient_ring.hpp"

#include <algorithm>
#include <set>

#include "thetabody/errors.hpp"

namespace thetabody {
namespace {

// Incremental row echelon over Q. Every stored row has a unit pivot and is
// zero on the pivots of the rows stored before it.
class IncrementalEchelon {
 public:
  // Returns true if v was independent (and stores it).
  bool insert(RationalVector v) {
    for (const auto& [row, pivot] : rows_) {
      if (sgn(v[pivot]) == 0) continue;
      const Rational f = v[pivot];
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (sgn(row[j]) != 0) v[j] -= f * row[j];
      }
    }
    const auto it = std::find_if(v.begin(), v.end(),
                                 [](const Rational& x) { return sgn(x) != 0; });
    if (it == v.end()) return false;
    const int pivot = static_cast<int>(it - v.begin());
    const Rational inv = 1 / v[pivot];
    for (auto& x : v) x *= inv;
    rows_.emplace_back(std::move(v), pivot);
    return true;
  }

 private:
  std::vector<std::pair<RationalVector, int>> rows_;
};

RationalVector evaluations(const Monomial& m, const PointSet& s) {
  RationalVector v;
  v.reserve(s.size());
  for (const auto& p : s.points()) v.push_back(m.evaluate(p));
  return v;
}

}  // namespace

QuotientRing buchberger_moller(const PointSet& points, const QuotientRingOptions& options) {
  if (options.k_max < 1) throw InputError("k_max must be >= 1");
  const int n = points.dim();
  const int target = points.size();

  QuotientRing ring;
  ring.points_ = points;
  ring.k_max_ = options.k_max;

  IncrementalEchelon echelon;
  std::set<Monomial> standard;
  std::vector<Monomial> basis;
  std::vector<Monomial> frontier{Monomial::one(n)};  // current degree candidates

  while (!frontier.empty() && static_cast<int>(basis.size()) < target) {
    // Ascending degrevlex: each candidate is tested against the span of all
    // smaller monomials, which is what makes it standard or a leading term.
    std::sort(frontier.begin(), frontier.end(),
              [](const Monomial& a, const Monomial& b) { return degrevlex_compare(a, b) < 0; });
    std::vector<Monomial> accepted;
    for (const auto& t : frontier) {
      if (static_cast<int>(basis.size()) == target) break;
      if (echelon.insert(evaluations(t, points))) {
        basis.push_back(t);
        standard.insert(t);
        accepted.push_back(t);
      }
    }
    std::set<Monomial> next;
    for (const auto& b : accepted) {
      for (int i = 0; i < n; ++i) {
        const Monomial t = b * Monomial::variable(n, i);
        bool all_divisors_standard = true;
        for (int j = 0; j < n && all_divisors_standard; ++j) {
          if (t.exponent(j) == 0) continue;
          std::vector<int> e = t.exponents();
          --e[j];
          all_divisors_standard = standard.count(Monomial(std::move(e))) > 0;
        }
        if (all_divisors_standard) next.insert(t);
      }
    }
    frontier.assign(next.begin(), next.end());
  }
  if (static_cast<int>(basis.size()) != target)
    throw InputError("Buchberger-Moller terminated early; points not distinct?");

  std::sort(basis.begin(), basis.end(), basis_order_less);
  ring.basis_ = std::move(basis);

  ring.eval_.assign(target, RationalVector(target));
  for (int s = 0; s < target; ++s)
    for (int l = 0; l < target; ++l) ring.eval_[s][l] = ring.basis_[l].evaluate(points[s]);
  ring.eval_inv_ = exact::inverse(ring.eval_);

  ring.table_size_ = ring.count_up_to_degree(options.k_max);
  const int t = ring.table_size_;
  ring.table_.resize(static_cast<std::size_t>(t) * (t + 1) / 2);
  RationalVector values(target);
  for (int i = 0; i < t; ++i) {
    for (int j = i; j < t; ++j) {
      for (int s = 0; s < target; ++s) values[s] = ring.eval_[s][i] * ring.eval_[s][j];
      ring.table_[static_cast<std::size_t>(i) * t - static_cast<std::size_t>(i) * (i - 1) / 2 +
                  (j - i)] = ring.interpolate(values);
    }
  }
  return ring;
}

int QuotientRing::count_up_to_degree(int d) const {
  return static_cast<int>(std::count_if(basis_.begin(), basis_.end(),
                                        [d](const Monomial& m) { return m.degree() <= d; }));
}

int QuotientRing::index_of(const Monomial& m) const {
  for (int i = 0; i < size(); ++i) {
    if (basis_[i] == m) return i;
  }
  return -1;
}

const RationalVector& QuotientRing::evaluate_basis(int point_index) const {
  if (point_index < 0 || point_index >= points_.size())
    throw InputError("point index " + std::to_string(point_index) + " out of range");
  return eval_[point_index];
}

const SparseRationalVector& QuotientRing::product(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= table_size_) {
    throw ResourceError("product table covers degree <= k_max = " + std::to_string(k_max_) +
                        "; rebuild the ring with a larger k_max");
  }
  const std::size_t t = table_size_;
  const std::size_t ii = i;
  return table_[ii * t - ii * (ii - 1) / 2 + (j - i)];
}

SparseRationalVector QuotientRing::interpolate(const RationalVector& values) const {
  if (static_cast<int>(values.size()) != points_.size())
    throw InputError("interpolate: expected one value per point");
  return to_sparse(exact::multiply(eval_inv_, values));
}

SparseRationalVector QuotientRing::normal_form(const Polynomial& p) const {
  if (p.dim() != dim()) throw InputError("normal_form: polynomial dimension mismatch");
  RationalVector values;
  values.reserve(points_.size());
  for (const auto& s : points_.points()) values.push_back(p.evaluate(s));
  return interpolate(values);
}

}  // namespace thetabody
