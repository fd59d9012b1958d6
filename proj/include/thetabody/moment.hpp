#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "thetabody/monomial.hpp"
#include "thetabody/quotient_ring.hpp"
#include "thetabody/rational.hpp"
#include "thetabody/sdp.hpp"

namespace thetabody {

// Symbolic truncated combinatorial moment matrix M_{B_k}(y).
//
// Rows are B_k; y is indexed by B_{2k} (truncated to the whole basis when 2k
// exceeds the top degree). Each upper-triangular cell holds the coordinates of
// b_i * b_j + I over B_{2k}. Cells whose basis products coincide point at the
// same stored coefficient vector.
class MomentTemplate {
 public:
  int level() const { return level_; }
  int side() const { return static_cast<int>(row_labels_.size()); }
  int y_dim() const { return static_cast<int>(y_labels_.size()); }

  const std::vector<Monomial>& row_labels() const { return row_labels_; }
  const std::vector<Monomial>& y_labels() const { return y_labels_; }
  // Degree of each y coordinate's basis element (0 for y_0).
  int y_degree(int l) const { return y_labels_.at(l).degree(); }

  const SparseRationalVector& cell(int i, int j) const;
  // Identity of the shared coefficient vector behind cell (i, j).
  int cell_slot(int i, int j) const;
  int distinct_cells() const { return static_cast<int>(distinct_.size()); }

  // Builder: `product(i, j)` returns the sparse coefficients over y and
  // `key(i, j)` the monomial product used for sharing.
  static MomentTemplate build(int level, std::vector<Monomial> rows, std::vector<Monomial> ys,
                              const std::function<SparseRationalVector(int, int)>& product,
                              const std::function<Monomial(int, int)>& key);

 private:
  int level_ = 0;
  std::vector<Monomial> row_labels_;
  std::vector<Monomial> y_labels_;
  std::vector<SparseRationalVector> distinct_;
  std::vector<int> slots_;  // packed upper triangle -> index into distinct_
};

// Template for M_{B_k}(y) over a point-set quotient ring.
// Throws ResourceError if k > ring.k_max().
MomentTemplate build_moment_template(const QuotientRing& ring, int k);

// Numeric M(y); y.size() must equal y_dim.
Eigen::MatrixXd assemble(const MomentTemplate& t, const Eigen::VectorXd& y);
// Exact M(y) over Q.
RationalMatrix assemble(const MomentTemplate& t, const RationalVector& y);

// Restriction of the evaluation vector of point s to the y coordinates of t,
// i.e. the moment vector y^s of the point evaluation functional.
RationalVector point_moments(const QuotientRing& ring, const MomentTemplate& t, int s);

// maximize sum_l objective_l * y_l  s.t.  M_{B_k}(y) PSD, y_0 = 1.
// The objective must be supported on coordinates of degree <= 1.
// Throws InputError on an empty objective.
SdpProblem build_theta_sdp(const MomentTemplate& t, const std::vector<std::pair<int, double>>& objective);

// Rewrites sum_i c_i x_i through the normal form into y coordinates of B_1.
std::vector<std::pair<int, double>> linear_objective(const QuotientRing& ring,
                                                     const MomentTemplate& t,
                                                     const RationalVector& coefficients);

// {"level", "rows": [...], "y": [...], "cells": [{"cell": [r, c], "coeffs": {"y[m]": "q"}}]}
nlohmann::json template_to_json(const MomentTemplate& t);

}  // namespace thetabody
