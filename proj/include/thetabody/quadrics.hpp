#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "thetabody/monomial.hpp"
#include "thetabody/point_set.hpp"
#include "thetabody/rational.hpp"
#include "thetabody/sdp.hpp"

namespace thetabody {

// F(x) = x^T A x + b^T x + c with A symmetric.
struct Quadric {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double c = 0.0;

  double evaluate(const Eigen::VectorXd& x) const;
  // A PSD (eigenvalues >= -tol) and A != 0.
  bool is_convex(double tol = 1e-9) const;
  std::string to_string() const;
};

// A linearly independent family spanning a subspace of the degree <= 2 part
// of an ideal. Elements are exact coefficient vectors over monomials().
class QuadricSpace {
 public:
  QuadricSpace() = default;
  // Keeps a maximal independent subset of `elements`, in order.
  QuadricSpace(int dim, const std::vector<RationalVector>& elements);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(basis_.size()); }
  // All monomials of degree <= 2 in basis order: 1, x1..xn, x1^2, x1*x2, ...
  const std::vector<Monomial>& monomials() const { return monomials_; }
  const std::vector<RationalVector>& basis() const { return basis_; }

  Quadric quadric(int k) const;
  // Quadric of sum_k coeffs_k * basis_k.
  Quadric combination(const Eigen::VectorXd& coeffs) const;
  Polynomial polynomial(int k) const;
  QuadricSpace scaled(const Rational& factor) const;

 private:
  int dim_ = 0;
  std::vector<Monomial> monomials_;
  std::vector<RationalVector> basis_;
};

// Quadrics vanishing on S: nullspace of the degree <= 2 evaluation matrix.
QuadricSpace quadric_space_from_points(const PointSet& s);

// Span of the degree-2 generators together with g and x_i * g for each
// generator g of degree <= 1. No ideal closure is computed, so this can be a
// proper subspace of I_2. Throws InputError for a generator of degree > 2.
QuadricSpace quadric_space_from_generators(int dim, const std::vector<Polynomial>& gens);

// {"dim": 3, "generators": [{"x1^2": "1", "x3": "-1"}, ...]}
std::vector<Polynomial> generators_from_json(const nlohmann::json& j, int& dim);

struct ConvexQuadricResult {
  bool exists = false;
  std::optional<Quadric> witness;
  double min_eigenvalue = 0.0;   // best lambda_min(A) with trace A = 1
  std::string detail;
  SdpSolution solution;
};

// Decides whether some element has A PSD and nonzero via
// max t s.t. A(c) - t I PSD, trace A(c) = 1.
ConvexQuadricResult has_convex_quadric(const QuadricSpace& space, double tol = 1e-7,
                                       const SdpOptions& options = {});

struct EntryRange {
  bool feasible = false;
  double min = 0.0;
  double max = 0.0;
};

// Extremes of the entry A_ij over {A(c) PSD, trace A(c) = 1}. The optima sit
// on the PSD boundary, so the default tolerances are tighter than usual.
SdpOptions range_options();
EntryRange quadratic_entry_range(const QuadricSpace& space, int i, int j,
                                 const SdpOptions& options = range_options());

enum class MembershipStatus { Inside, Borderline, Outside };
std::string to_string(MembershipStatus status);

struct MembershipResult {
  MembershipStatus status = MembershipStatus::Inside;
  std::optional<double> sup_value;   // empty when there is no convex quadric
  bool unbounded = false;
  std::optional<Quadric> certificate;
  SdpSolution solution;
};

// query in TH_1 iff sup{F(query) : F in space, A PSD, trace A = 1} <= 0.
MembershipResult th1_membership(const QuadricSpace& space, const Eigen::VectorXd& query,
                                double boundary_tol = 1e-7, const SdpOptions& options = {});

nlohmann::json to_json(const Quadric& q);

}  // namespace thetabody
