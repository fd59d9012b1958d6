#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "thetabody/sdp.hpp"

namespace sdpcorpus {

using namespace thetabody;

inline SparseSymMatrix sparse(const Eigen::MatrixXd& m) {
  SparseSymMatrix out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j)
      if (m(i, j) != 0.0) out.push_back({i, j, m(i, j)});
  return out;
}

inline SdpProblem problem(const Eigen::MatrixXd& c, const std::vector<Eigen::MatrixXd>& f,
                   const std::vector<double>& obj) {
  SdpProblem p;
  p.side = static_cast<int>(c.rows());
  p.num_vars = static_cast<int>(f.size());
  p.constant = sparse(c);
  for (const auto& m : f) p.coefficients.push_back(sparse(m));
  p.objective = obj;
  return p;
}

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline double lmin(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

struct Case {
  std::string name;
  SdpProblem p;
  double expected;
};

// 2x2 and 3x3 instances with analytic or bisection optima.
inline std::vector<Case> small_corpus() {
  std::vector<Case> out;
  out.push_back({"disk", problem(mat({{1, 0}, {0, 1}}), {mat({{0, 1}, {1, 0}})}, {1}), 1.0});
  // max -y reaches y = -1.
  out.push_back({"disk-min", problem(mat({{1, 0}, {0, 1}}), {mat({{0, 1}, {1, 0}})}, {-1}), 1.0});
  out.push_back({"lower-bound", problem(mat({{0, 1}, {1, 1}}), {mat({{1, 0}, {0, 0}})}, {-1}), -1.0});
  out.push_back({"tridiagonal",
                 problem(Eigen::MatrixXd::Identity(3, 3), {mat({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}})}, {1}),
                 1.0 / std::sqrt(2.0)});
  out.push_back({"arrow",
                 problem(Eigen::MatrixXd::Identity(3, 3),
                         {mat({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}), mat({{0, 0, 1}, {0, 0, 0}, {1, 0, 0}})},
                         {1, 1}),
                 std::sqrt(2.0)});
  out.push_back({"ellipse",
                 problem(Eigen::MatrixXd::Identity(2, 2),
                         {mat({{0, 1}, {1, 0}}), mat({{1, 0}, {0, -1}})}, {1, 0}),
                 1.0});
  {
    SdpProblem p = problem(mat({{1, 0}, {0, 0}}), {mat({{0, 1}, {1, 0}}), mat({{0, 0}, {0, 1}})}, {1, 0});
    p.equalities.push_back({{{1, 1.0}}, 4.0});
    out.push_back({"pinned", p, 2.0});
  }
  {
    SdpProblem p = problem(mat({{1, 0}, {0, 0}}), {mat({{0, 1}, {1, 0}}), mat({{0, 0}, {0, 1}})}, {1, 0});
    p.equalities.push_back({{{0, 1.0}, {1, 1.0}}, 2.0});
    out.push_back({"coupled", p, 1.0});
  }
  std::mt19937 rng(2024);
  std::normal_distribution<double> gauss;
  for (int side : {2, 3}) {
    for (int trial = 0; trial < 8; ++trial) {
      Eigen::MatrixXd r(side, side), f(side, side);
      for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
          r(i, j) = gauss(rng);
          f(i, j) = gauss(rng);
        }
      Eigen::MatrixXd c = r * r.transpose() + 0.5 * Eigen::MatrixXd::Identity(side, side);
      f = (0.5 * (f + f.transpose())).eval();
      if (lmin(f) >= -0.1) f -= (lmin(f) + 1.0) * Eigen::MatrixXd::Identity(side, side);
      const double best = oracle::bisect_max([&](double t) { return lmin(c + t * f); }, 0.0, 1e4);
      out.push_back({"random" + std::to_string(side) + "-" + std::to_string(trial), problem(c, {f}, {1}), best});
    }
  }
  return out;
}

}  // namespace sdpcorpus
