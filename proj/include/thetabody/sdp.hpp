#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace thetabody {

// Upper-triangular entry (row <= col) of a symmetric matrix.
struct SymEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};
using SparseSymMatrix = std::vector<SymEntry>;

struct LinearEquality {
  std::vector<std::pair<int, double>> coefficients;
  double rhs = 0.0;
};

// maximize  objective . y + objective_offset
// s.t.      constant + sum_l y_l * coefficients[l]  is PSD
//           every equality holds.
struct SdpProblem {
  int side = 0;
  int num_vars = 0;
  SparseSymMatrix constant;
  std::vector<SparseSymMatrix> coefficients;
  std::vector<double> objective;
  double objective_offset = 0.0;
  std::vector<LinearEquality> equalities;
  std::vector<std::string> labels;  // optional, one per variable

  // Throws InputError when shapes or indices are inconsistent.
  void validate() const;
  Eigen::MatrixXd assemble(const Eigen::VectorXd& y) const;
};

enum class SdpStatus { Optimal, NearOptimal, Infeasible, Unbounded, IterLimit };
std::string to_string(SdpStatus status);

struct SdpOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-7;
  int max_iter = 200;
  double psd_tol = 1e-6;
  double step_fraction = 0.98;
  double unbounded_threshold = 1e12;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::IterLimit;
  Eigen::VectorXd y;
  double objective = 0.0;          // objective . y + offset
  double upper_bound = 0.0;        // dual (primal-form) objective
  double duality_gap = 0.0;        // <X, Z> at the last accepted iterate
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double min_eig = 0.0;            // of the assembled matrix at y
  int iterations = 0;
  std::vector<double> gap_history; // <X, Z> per accepted iterate
  // Infeasible: PSD W with <W, F_l> = 0 on free directions and <W, F_0> < 0.
  Eigen::MatrixXd infeasibility_certificate;
  // Unbounded: improving recession direction for y.
  Eigen::VectorXd unbounded_ray;
};

// Dense primal-dual interior point (HKM direction, Mehrotra predictor-
// corrector). Deterministic for fixed inputs.
SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});

// Smallest eigenvalue via an LDL^T shift test. Returns true when
// m + tol * I admits a Cholesky factorization.
bool passes_shifted_factorization(const Eigen::MatrixXd& m, double tol);

// Raw SDP JSON:
// {"side": m, "vars": d, "constant": [[i,j,v],...], "coefficients": [[[i,j,v],...],...],
//  "objective": [c_1..c_d], "offset": 0, "equalities": [{"coefficients": [[l,v],...], "rhs": r}]}
// Indices are 0-based, entries upper-triangular; values are numbers or rational strings.
SdpProblem sdp_problem_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SdpProblem& problem);
nlohmann::json to_json(const SdpSolution& solution);

}  // namespace thetabody
