#pragma once

#include <vector>

#include "thetabody/monomial.hpp"
#include "thetabody/point_set.hpp"
#include "thetabody/rational.hpp"

namespace thetabody {

struct QuotientRingOptions {
  // Products b_i * b_j are tabulated for deg(b_i), deg(b_j) <= k_max, which
  // is what moment templates up to level k_max need.
  int k_max = 3;
};

// R[x]/I(S) for a finite point set S, with the degrevlex standard-monomial
// basis B. Immutable after construction.
class QuotientRing {
 public:
  const PointSet& points() const { return points_; }
  int dim() const { return points_.dim(); }
  int size() const { return static_cast<int>(basis_.size()); }
  int k_max() const { return k_max_; }

  // Standard monomials in basis order (degree ascending).
  const std::vector<Monomial>& basis() const { return basis_; }
  int degree(int i) const { return basis_.at(i).degree(); }
  // Number of basis elements of degree <= d, i.e. |B_d| (saturates at |B|).
  int count_up_to_degree(int d) const;
  // Index of m in B, or -1 if m is not a standard monomial.
  int index_of(const Monomial& m) const;

  // Row s of the evaluation matrix: (b_l(s))_l.
  const RationalVector& evaluate_basis(int point_index) const;
  const RationalMatrix& eval_matrix() const { return eval_; }

  // Coordinates of NF(b_i * b_j) over B. Requires deg b_i, deg b_j <= k_max.
  const SparseRationalVector& product(int i, int j) const;

  // Coordinates of p + I(S) over B.
  SparseRationalVector normal_form(const Polynomial& p) const;
  // Coordinates of the residue class whose values on S are `values`.
  SparseRationalVector interpolate(const RationalVector& values) const;

 private:
  friend QuotientRing buchberger_moller(const PointSet&, const QuotientRingOptions&);
  QuotientRing() = default;

  PointSet points_;
  int k_max_ = 0;
  std::vector<Monomial> basis_;
  RationalMatrix eval_;      // |S| x |B|
  RationalMatrix eval_inv_;  // |B| x |S|
  int table_size_ = 0;       // |B_{k_max}|
  std::vector<SparseRationalVector> table_;  // packed upper triangle
};

// Buchberger–Möller over Q: standard monomials of I(S) for degrevlex, plus
// the multiplication table. Throws InputError on invalid S.
QuotientRing buchberger_moller(const PointSet& points,
                               const QuotientRingOptions& options = {});

}  // namespace thetabody
