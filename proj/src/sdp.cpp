#include "thetabody/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "thetabody/errors.hpp"
#include "thetabody/rational.hpp"

namespace thetabody {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void add_scaled(MatrixXd& y, const SparseSymMatrix& a, double alpha) {
  for (const auto& e : a) {
    y(e.row, e.col) += alpha * e.value;
    if (e.row != e.col) y(e.col, e.row) += alpha * e.value;
  }
}

// tr(A * Y) for symmetric A and arbitrary square Y.
double trace_product(const SparseSymMatrix& a, const MatrixXd& y) {
  double s = 0.0;
  for (const auto& e : a) {
    s += e.row == e.col ? e.value * y(e.row, e.row)
                        : e.value * (y(e.row, e.col) + y(e.col, e.row));
  }
  return s;
}

double frobenius_inner(const SparseSymMatrix& a, const SparseSymMatrix& b, int side) {
  // Small matrices: densify one side.
  MatrixXd db = MatrixXd::Zero(side, side);
  add_scaled(db, b, 1.0);
  return trace_product(a, db);
}

MatrixXd densify(const SparseSymMatrix& a, int side) {
  MatrixXd d = MatrixXd::Zero(side, side);
  add_scaled(d, a, 1.0);
  return d;
}

SparseSymMatrix sparsify(const MatrixXd& d, double drop) {
  SparseSymMatrix out;
  for (int c = 0; c < d.cols(); ++c)
    for (int r = 0; r <= c; ++r)
      if (std::abs(d(r, c)) > drop) out.push_back({r, c, d(r, c)});
  return out;
}

double min_eigenvalue(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Largest alpha with x + alpha * dx PSD, given the Cholesky factor of x.
double max_step(const Eigen::LLT<MatrixXd>& chol, const MatrixXd& dx) {
  const MatrixXd l = chol.matrixL();
  MatrixXd t = l.triangularView<Eigen::Lower>().solve(dx);
  t = l.triangularView<Eigen::Lower>().solve(t.transpose()).transpose().eval();
  const MatrixXd sym = 0.5 * (t + t.transpose());
  const double lmin = min_eigenvalue(sym);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

// Linear matrix inequality in canonical form used by the interior point loop:
//   maximize b.z  s.t.  Z = c + sum_j z_j f_j  PSD.
struct Lmi {
  int side = 0;
  MatrixXd c;
  std::vector<SparseSymMatrix> f;
  VectorXd b;
};

struct IpmResult {
  SdpStatus status = SdpStatus::IterLimit;
  VectorXd z;
  double upper_bound = 0.0;
  double gap = 0.0;
  double pinf = 0.0;
  double dinf = 0.0;
  int iterations = 0;
  std::vector<double> gap_history;
  MatrixXd certificate;
  MatrixXd x;
};

// With `monotone`, only steps that do not increase <X, Z> are accepted.
IpmResult run_interior_point(const Lmi& lmi, const SdpOptions& opt, bool monotone = true) {
  const int m = lmi.side;
  const int d = static_cast<int>(lmi.f.size());
  IpmResult res;

  // Standard form with A_j = -f_j: min <c, X> s.t. <A_j, X> = b_j, X PSD.
  auto op_a = [&](const MatrixXd& y) {
    VectorXd out(d);
    for (int j = 0; j < d; ++j) out(j) = -trace_product(lmi.f[j], y);
    return out;
  };
  auto slack_of = [&](const VectorXd& z) {
    MatrixXd s = lmi.c;
    for (int j = 0; j < d; ++j) add_scaled(s, lmi.f[j], z(j));
    return s;
  };

  double data_norm = lmi.c.norm();
  for (const auto& fj : lmi.f) data_norm = std::max(data_norm, std::sqrt(frobenius_inner(fj, fj, m)));
  data_norm = std::max(data_norm, lmi.b.norm());
  const double xi = 1.0 + data_norm;
  const double c_norm = lmi.c.norm();
  const double b_norm = lmi.b.norm();

  MatrixXd x = xi * MatrixXd::Identity(m, m);
  MatrixXd zs = xi * MatrixXd::Identity(m, m);
  VectorXd z = VectorXd::Zero(d);

  // Columns touched by each f_j; used to form X f_j cheaply.
  std::vector<std::vector<int>> touched(d);
  for (int j = 0; j < d; ++j) {
    std::vector<int>& cols = touched[j];
    for (const auto& e : lmi.f[j]) {
      cols.push_back(e.row);
      cols.push_back(e.col);
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  }

  auto status_of = [&](double pinf, double dinf, double relgap, double scale) {
    if (pinf <= opt.feas_tol && dinf <= opt.feas_tol && relgap <= opt.gap_tol)
      return SdpStatus::Optimal;
    if (pinf <= scale * opt.feas_tol && dinf <= scale * opt.feas_tol && relgap <= scale * opt.gap_tol)
      return SdpStatus::NearOptimal;
    return SdpStatus::IterLimit;
  };

  double pinf = 0.0, dinf = 0.0, relgap = 0.0;
  int iter = 0;
  for (;; ++iter) {
    const VectorXd rp = lmi.b - op_a(x);
    const MatrixXd rd = slack_of(z) - zs;  // c - Z - sum z_j A_j
    const double pobj = (lmi.c.array() * x.array()).sum();
    const double dobj = lmi.b.dot(z);
    const double xz = (x.array() * zs.array()).sum();
    pinf = rp.norm() / (1.0 + b_norm);
    dinf = rd.norm() / (1.0 + c_norm);
    relgap = std::max(std::abs(pobj - dobj), xz) / (1.0 + std::abs(pobj) + std::abs(dobj));
    res.gap_history.push_back(xz);
    res.z = z;
    res.upper_bound = pobj;
    res.gap = xz;
    res.pinf = pinf;
    res.dinf = dinf;
    res.iterations = iter;
    res.x = x;

    if (status_of(pinf, dinf, relgap, 1.0) == SdpStatus::Optimal) {
      res.status = SdpStatus::Optimal;
      return res;
    }
    // Primal ray: X with A(X) ~ 0 and <c, X> < 0 proves the LMI infeasible.
    if (pobj < 0.0) {
      const VectorXd ax = op_a(x);
      if (ax.norm() <= 1e2 * opt.feas_tol * -pobj && x.norm() > 1e2) {
        res.status = SdpStatus::Infeasible;
        res.certificate = x / -pobj;
        return res;
      }
    }
    if (dobj > opt.unbounded_threshold && dinf <= 1e2 * opt.feas_tol) {
      res.status = SdpStatus::Unbounded;
      return res;
    }
    if (iter >= opt.max_iter) break;

    Eigen::LLT<MatrixXd> zchol(zs);
    Eigen::LLT<MatrixXd> xchol(x);
    if (zchol.info() != Eigen::Success || xchol.info() != Eigen::Success) break;
    MatrixXd zinv = zchol.solve(MatrixXd::Identity(m, m));
    zinv = (0.5 * (zinv + zinv.transpose())).eval();

    // Schur complement M_ij = tr(A_i X A_j Z^-1) (signs of A cancel).
    MatrixXd schur(d, d);
    for (int j = 0; j < d; ++j) {
      MatrixXd xf = MatrixXd::Zero(m, m);
      for (const auto& e : lmi.f[j]) {
        xf.col(e.col) += e.value * x.col(e.row);
        if (e.row != e.col) xf.col(e.row) += e.value * x.col(e.col);
      }
      MatrixXd gj = MatrixXd::Zero(m, m);
      for (int q : touched[j]) gj.noalias() += xf.col(q) * zinv.row(q);
      for (int i = 0; i < d; ++i) schur(i, j) = trace_product(lmi.f[i], gj);
    }
    schur = (0.5 * (schur + schur.transpose())).eval();
    Eigen::LDLT<MatrixXd> schur_fact(schur);
    if (schur_fact.info() != Eigen::Success) break;

    const double mu = xz / m;
    // A(X Rd Z^-1) with A_j = -f_j.
    const VectorXd a_xrdz = op_a(x * rd * zinv);

    auto direction = [&](double sigma_mu, const MatrixXd* corr, VectorXd& dz, MatrixXd& dzs,
                         MatrixXd& dx) {
      VectorXd rhs = lmi.b - sigma_mu * op_a(zinv) + a_xrdz;
      if (corr != nullptr) rhs += op_a(*corr);
      dz = schur_fact.solve(rhs);
      // dZ = Rd - sum dz_j A_j = Rd + sum dz_j f_j
      dzs = rd;
      for (int j = 0; j < d; ++j) add_scaled(dzs, lmi.f[j], dz(j));
      MatrixXd t = -x + sigma_mu * zinv - x * dzs * zinv;
      if (corr != nullptr) t -= *corr;
      dx = 0.5 * (t + t.transpose());
    };

    VectorXd dz;
    MatrixXd dzs, dx;
    direction(0.0, nullptr, dz, dzs, dx);
    double ap = std::min(1.0, opt.step_fraction * max_step(xchol, dx));
    double ad = std::min(1.0, opt.step_fraction * max_step(zchol, dzs));
    const double mu_aff = ((x + ap * dx).array() * (zs + ad * dzs).array()).sum() / m;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    const MatrixXd corr = dx * dzs * zinv;
    direction(sigma * mu, &corr, dz, dzs, dx);
    ap = std::min(1.0, opt.step_fraction * max_step(xchol, dx));
    ad = std::min(1.0, opt.step_fraction * max_step(zchol, dzs));

    // Only steps that do not increase <X, Z> are accepted.
    auto backtrack = [&](double& a, double& b) {
      for (int bt = 0; bt < 40; ++bt) {
        const double next = ((x + a * dx).array() * (zs + b * dzs).array()).sum();
        if (next <= xz || !monotone) return true;
        a *= 0.5;
        b *= 0.5;
      }
      return false;
    };
    const double common = std::min(ap, ad);
    bool accepted = backtrack(ap, ad);
    if (!accepted) {
      // Equal step lengths make <X, Z> decrease to first order.
      ap = ad = common;
      accepted = backtrack(ap, ad);
    }
    if (!accepted || std::max(ap, ad) < 1e-12) break;
    x += ap * dx;
    zs += ad * dzs;
    z += ad * dz;
    x = (0.5 * (x + x.transpose())).eval();
    zs = (0.5 * (zs + zs.transpose())).eval();
  }

  res.status = status_of(pinf, dinf, relgap, 1e3);
  return res;
}

// Phase 1 for a run that failed: max t s.t. C + sum z_j f_j - t I PSD. The
// primal side is min <C, W> over A(W) = 0, trace W = 1, so a nearly feasible
// W with <C, W> < 0 certifies that the LMI is infeasible.
struct PhaseOne {
  bool infeasible = false;
  MatrixXd certificate;
  VectorXd z;  // last iterate, strictly feasible when `interior`
  bool interior = false;
};

MatrixXd slack(const Lmi& lmi, const VectorXd& z) {
  MatrixXd s = lmi.c;
  for (int j = 0; j < static_cast<int>(lmi.f.size()); ++j) add_scaled(s, lmi.f[j], z(j));
  return s;
}

PhaseOne phase_one(const Lmi& lmi, const SdpOptions& opt) {
  Lmi aux = lmi;
  SparseSymMatrix minus_identity;
  for (int i = 0; i < lmi.side; ++i) minus_identity.push_back({i, i, -1.0});
  aux.f.push_back(minus_identity);
  aux.b = VectorXd::Zero(static_cast<int>(aux.f.size()));
  aux.b(aux.b.size() - 1) = 1.0;
  const IpmResult r = run_interior_point(aux, opt);
  PhaseOne out;
  const int d = static_cast<int>(lmi.f.size());
  if (r.z.size() == d + 1) {
    out.z = r.z.head(d);
    Eigen::LLT<MatrixXd> chol(slack(lmi, out.z));
    out.interior = chol.info() == Eigen::Success && r.z(d) > 0.0;
  }
  if (r.status == SdpStatus::Unbounded || r.x.size() == 0) return out;
  const double bound = (lmi.c.array() * r.x.array()).sum();
  const double tol = std::max(1e-7, 1e2 * opt.feas_tol);
  if (r.pinf > 1e2 * opt.feas_tol || bound >= -tol) return out;
  out.infeasible = true;
  out.certificate = r.x;
  return out;
}

// Dual log-barrier path following from a strictly feasible z: maximize
// b.z + mu log det S(z) by damped Newton steps, then shrink mu. At a centred
// point X = mu S^-1 satisfies A(X) = b, so the gap is m mu. Used when the
// primal-dual loop stalls, typically because the primal is infeasible.
struct BarrierResult {
  SdpStatus status = SdpStatus::IterLimit;
  VectorXd z;
  MatrixXd x;
  double gap = 0.0;
  double pinf = 0.0;
  int iterations = 0;
  std::vector<double> gap_history;
};

BarrierResult dual_barrier(const Lmi& lmi, VectorXd z, const SdpOptions& opt) {
  const int m = lmi.side;
  const int d = static_cast<int>(lmi.f.size());
  BarrierResult res;
  res.z = z;
  BarrierResult best;
  std::vector<MatrixXd> dense;
  for (const auto& fj : lmi.f) dense.push_back(densify(fj, m));
  const double b_norm = lmi.b.norm();
  double mu = std::max(1.0, b_norm);
  const int budget = 50 * std::max(opt.max_iter, 1);

  while (res.iterations < budget) {
    double decrement = 0.0;
    VectorXd grad(d);
    MatrixXd sinv;
    // Centre for the current mu.
    for (int inner = 0; inner < 100 && res.iterations < budget; ++inner, ++res.iterations) {
      Eigen::LLT<MatrixXd> chol(slack(lmi, z));
      if (chol.info() != Eigen::Success) return best;
      sinv = chol.solve(MatrixXd::Identity(m, m));
      std::vector<MatrixXd> p(d);
      for (int j = 0; j < d; ++j) {
        p[j] = sinv * dense[j];
        grad(j) = lmi.b(j) + mu * p[j].trace();
      }
      MatrixXd h(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) h(i, j) = h(j, i) = mu * (p[i].array() * p[j].transpose().array()).sum();
      Eigen::LDLT<MatrixXd> fact(h);
      const VectorXd step = fact.solve(grad);
      decrement = std::sqrt(std::max(grad.dot(step) / mu, 0.0));
      if (decrement < 1e-8) break;
      // Barrier value, -inf outside the cone.
      auto value = [&](const VectorXd& v) {
        Eigen::LLT<MatrixXd> c(slack(lmi, v));
        if (c.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
        const double logdet = 2.0 * c.matrixLLT().diagonal().array().log().sum();
        return std::isfinite(logdet) ? lmi.b.dot(v) + mu * logdet : -std::numeric_limits<double>::infinity();
      };
      double alpha = decrement > 0.25 ? 1.0 / (1.0 + decrement) : 1.0;
      VectorXd next = z + alpha * step;
      while (!std::isfinite(value(next)) && alpha > 1e-12) {
        alpha *= 0.5;
        next = z + alpha * step;
      }
      if (alpha <= 1e-12) return best;
      // Extrapolate while the concave barrier keeps increasing; unbounded
      // problems then escape geometrically instead of linearly.
      for (int grow = 0; grow < 60; ++grow) {
        const VectorXd further = z + 2.0 * alpha * step;
        if (!(value(further) > value(next))) break;
        alpha *= 2.0;
        next = further;
      }
      z = next;
      res.z = z;
      if (lmi.b.dot(z) > opt.unbounded_threshold) {
        res.status = SdpStatus::Unbounded;
        return res;
      }
    }
    if (decrement >= 1e-4) return best;
    const double gap = m * mu;
    const double pinf = grad.norm() / (1.0 + b_norm);
    const double obj = lmi.b.dot(z);
    res.gap_history.push_back(gap);
    res.gap = gap;
    res.x = mu * sinv;
    res.pinf = pinf;
    if (gap <= opt.gap_tol * (1.0 + std::abs(obj)) && pinf <= opt.feas_tol) {
      res.status = SdpStatus::Optimal;
      return res;
    }
    // Remember the last point meeting the relaxed tolerances; centring can
    // break down near the optimum when the primal optimum is not attained.
    if (gap <= 1e3 * opt.gap_tol * (1.0 + std::abs(obj)) && pinf <= 1e3 * opt.feas_tol) {
      best = res;
      best.status = SdpStatus::NearOptimal;
    }
    mu *= 0.2;
  }
  return best;
}

// For a stall with a strictly feasible slack and no ray: maximize b.z with
// |z_j| <= R added, for geometrically growing R. Both sides of the boxed
// problem are strictly feasible. Increments that do not shrink mean the
// supremum is infinite (e.g. parabolic growth); an inactive box means the
// boxed optimum is optimal for the original problem.
struct BoxResult {
  SdpStatus status = SdpStatus::IterLimit;
  IpmResult run;
};

BoxResult box_growth(const Lmi& lmi, const SdpOptions& opt) {
  const int m = lmi.side;
  const int d = static_cast<int>(lmi.f.size());
  BoxResult out;
  std::vector<double> values;
  for (double radius : {1e2, 1e4, 1e6}) {
    Lmi boxed = lmi;
    boxed.side = m + 2 * d;
    boxed.c = MatrixXd::Zero(boxed.side, boxed.side);
    boxed.c.topLeftCorner(m, m) = lmi.c;
    for (int j = 0; j < d; ++j) {
      boxed.c(m + 2 * j, m + 2 * j) = radius;
      boxed.c(m + 2 * j + 1, m + 2 * j + 1) = radius;
      boxed.f[j].push_back({m + 2 * j, m + 2 * j, -1.0});
      boxed.f[j].push_back({m + 2 * j + 1, m + 2 * j + 1, 1.0});
    }
    IpmResult r = run_interior_point(boxed, opt);
    if (r.status != SdpStatus::Optimal && r.status != SdpStatus::NearOptimal) return out;
    values.push_back(lmi.b.dot(r.z));
    const double tol = 1e2 * opt.gap_tol * (1.0 + std::abs(values.back()));
    if (values.size() == 3) {
      const double d1 = values[1] - values[0];
      const double d2 = values[2] - values[1];
      if (d2 > tol && d2 >= 0.5 * d1) {
        out.status = SdpStatus::Unbounded;
        out.run = r;
        return out;
      }
    }
    // Box multipliers of the original problem are the trailing diagonal of X.
    double box_weight = 0.0;
    for (int i = m; i < boxed.side; ++i) box_weight += std::abs(r.x(i, i));
    const bool inactive = r.z.cwiseAbs().maxCoeff() < 0.5 * radius && box_weight * radius <= tol;
    if (inactive || values.size() == 3) {
      r.x = r.x.topLeftCorner(m, m).eval();
      r.status = inactive ? r.status : SdpStatus::NearOptimal;
      out.status = r.status;
      out.run = r;
      return out;
    }
  }
  return out;
}

}  // namespace

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::NearOptimal: return "NearOptimal";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::Unbounded: return "Unbounded";
    case SdpStatus::IterLimit: return "IterLimit";
  }
  return "IterLimit";
}

void SdpProblem::validate() const {
  if (side < 1) throw InputError("SDP side must be >= 1");
  if (num_vars < 0) throw InputError("SDP variable count must be >= 0");
  if (static_cast<int>(coefficients.size()) != num_vars)
    throw InputError("SDP needs one coefficient matrix per variable");
  if (static_cast<int>(objective.size()) != num_vars)
    throw InputError("SDP objective length must equal the variable count");
  auto check = [&](const SparseSymMatrix& a) {
    for (const auto& e : a) {
      if (e.row < 0 || e.col < 0 || e.row >= side || e.col >= side || e.row > e.col)
        throw InputError("SDP matrix entry out of range or below the diagonal");
      if (!std::isfinite(e.value)) throw InputError("SDP matrix entry is not finite");
    }
  };
  check(constant);
  for (const auto& a : coefficients) check(a);
  for (const auto& eq : equalities) {
    for (const auto& [l, v] : eq.coefficients) {
      if (l < 0 || l >= num_vars) throw InputError("SDP equality index out of range");
    }
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != num_vars)
    throw InputError("SDP labels must match the variable count");
}

Eigen::MatrixXd SdpProblem::assemble(const Eigen::VectorXd& y) const {
  if (y.size() != num_vars) throw InputError("assemble: wrong number of SDP variables");
  MatrixXd out = densify(constant, side);
  for (int l = 0; l < num_vars; ++l) add_scaled(out, coefficients[l], y(l));
  return out;
}

bool passes_shifted_factorization(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0) return true;
  const MatrixXd shifted = m + tol * MatrixXd::Identity(m.rows(), m.cols());
  Eigen::LDLT<MatrixXd> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) return false;
  return (ldlt.vectorD().array() >= 0.0).all();
}

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
  problem.validate();
  const int n = problem.num_vars;
  const int m = problem.side;
  const VectorXd c = Eigen::Map<const VectorXd>(problem.objective.data(), n);

  SdpSolution sol;
  auto finish = [&](const VectorXd& y) {
    sol.y = y;
    sol.objective = c.dot(y) + problem.objective_offset;
    sol.min_eig = min_eigenvalue(problem.assemble(y));
    return sol;
  };

  // 1. Eliminate equalities: y = y0 + N t.
  VectorXd y0 = VectorXd::Zero(n);
  MatrixXd basis;  // n x r
  bool pins_only = std::all_of(problem.equalities.begin(), problem.equalities.end(),
                               [](const LinearEquality& e) { return e.coefficients.size() == 1; });
  if (pins_only) {
    std::vector<bool> pinned(n, false);
    for (const auto& eq : problem.equalities) {
      const auto [l, v] = eq.coefficients.front();
      if (v == 0.0) {
        if (eq.rhs != 0.0) {
          sol.status = SdpStatus::Infeasible;
          return finish(y0);
        }
        continue;
      }
      const double val = eq.rhs / v;
      if (pinned[l] && std::abs(y0(l) - val) > options.feas_tol * (1.0 + std::abs(val))) {
        sol.status = SdpStatus::Infeasible;
        return finish(y0);
      }
      pinned[l] = true;
      y0(l) = val;
    }
    const int free = static_cast<int>(std::count(pinned.begin(), pinned.end(), false));
    basis = MatrixXd::Zero(n, free);
    for (int l = 0, k = 0; l < n; ++l)
      if (!pinned[l]) basis(l, k++) = 1.0;
  } else {
    MatrixXd e = MatrixXd::Zero(static_cast<int>(problem.equalities.size()), n);
    VectorXd f(e.rows());
    for (int r = 0; r < e.rows(); ++r) {
      for (const auto& [l, v] : problem.equalities[r].coefficients) e(r, l) += v;
      f(r) = problem.equalities[r].rhs;
    }
    Eigen::JacobiSVD<MatrixXd> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12);
    const int rank = static_cast<int>(svd.rank());
    y0 = n > 0 ? VectorXd(svd.solve(f)) : VectorXd();
    if ((e * y0 - f).norm() > 1e-9 * (1.0 + f.norm())) {
      sol.status = SdpStatus::Infeasible;
      return finish(VectorXd::Zero(n));
    }
    basis = svd.matrixV().rightCols(n - rank);
  }

  // 2. Reduced data: c0 + sum_k t_k g_k.
  MatrixXd c0 = problem.assemble(y0);
  std::vector<SparseSymMatrix> g;
  if (pins_only) {
    for (int k = 0; k < basis.cols(); ++k) {
      int l = 0;
      basis.col(k).maxCoeff(&l);
      g.push_back(problem.coefficients[l]);
    }
  } else {
    for (int k = 0; k < basis.cols(); ++k) {
      MatrixXd dk = MatrixXd::Zero(m, m);
      for (int l = 0; l < n; ++l)
        if (basis(l, k) != 0.0) add_scaled(dk, problem.coefficients[l], basis(l, k));
      g.push_back(sparsify(dk, 1e-14));
    }
  }
  VectorXd bt = basis.transpose() * c;

  // 3. Drop rows/columns that are identically zero in every matrix.
  std::vector<bool> used(m, false);
  auto mark = [&](const SparseSymMatrix& a) {
    for (const auto& e : a) {
      if (e.value != 0.0) used[e.row] = used[e.col] = true;
    }
  };
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s)
      if (c0(r, s) != 0.0) used[r] = used[s] = true;
  for (const auto& a : g) mark(a);
  std::vector<int> remap(m, -1);
  std::vector<int> kept;
  for (int r = 0; r < m; ++r) {
    if (used[r]) {
      remap[r] = static_cast<int>(kept.size());
      kept.push_back(r);
    }
  }
  const int side = static_cast<int>(kept.size());
  Lmi lmi;
  lmi.side = side;
  lmi.c = MatrixXd(side, side);
  for (int r = 0; r < side; ++r)
    for (int s = 0; s < side; ++s) lmi.c(r, s) = c0(kept[r], kept[s]);
  for (auto& a : g) {
    for (auto& e : a) {
      e.row = remap[e.row];
      e.col = remap[e.col];
    }
  }

  // 4. Equilibrate rows: S -> D S D with D from the row magnitudes.
  // Certificates map back through D.
  VectorXd row_scale = VectorXd::Zero(side);
  for (int r = 0; r < side; ++r) row_scale(r) = lmi.c.row(r).cwiseAbs().maxCoeff();
  for (const auto& a : g)
    for (const auto& e : a) {
      row_scale(e.row) = std::max(row_scale(e.row), std::abs(e.value));
      row_scale(e.col) = std::max(row_scale(e.col), std::abs(e.value));
    }
  VectorXd dscale(side);
  for (int r = 0; r < side; ++r) dscale(r) = row_scale(r) > 0.0 ? 1.0 / std::sqrt(row_scale(r)) : 1.0;
  lmi.c = dscale.asDiagonal() * lmi.c * dscale.asDiagonal();
  for (auto& a : g)
    for (auto& e : a) e.value *= dscale(e.row) * dscale(e.col);

  // 5. Coordinates in which the g_k are Frobenius-orthonormal, after
  // splitting off directions that leave the matrix unchanged. The Gram matrix
  // is formed from unit-normalised g_k since magnitudes can span many orders.
  const int free = static_cast<int>(g.size());
  VectorXd gnorm(free);
  for (int i = 0; i < free; ++i) {
    const double nn = std::sqrt(frobenius_inner(g[i], g[i], side));
    gnorm(i) = nn > 0.0 ? nn : 1.0;
  }
  MatrixXd gram(free, free);
  for (int i = 0; i < free; ++i)
    for (int j = i; j < free; ++j)
      gram(i, j) = gram(j, i) = frobenius_inner(g[i], g[j], side) / (gnorm(i) * gnorm(j));
  const VectorXd inv_norm = gnorm.cwiseInverse();
  MatrixXd range = inv_norm.asDiagonal();
  MatrixXd null_dirs(free, 0);
  bool whiten = false;
  if (free > 0) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram);
    const VectorXd& ev = es.eigenvalues();
    int nnull = 0;
    while (nnull < free && ev(nnull) <= 1e-12) ++nnull;
    // Well-conditioned families (e.g. disjoint supports) keep their sparsity.
    whiten = nnull > 0 || ev(0) < 1e-3 * ev(free - 1);
    if (whiten) {
      null_dirs = inv_norm.asDiagonal() * es.eigenvectors().leftCols(nnull);
      const VectorXd root = ev.tail(free - nnull).cwiseSqrt().cwiseInverse();
      range = inv_norm.asDiagonal() * es.eigenvectors().rightCols(free - nnull) * root.asDiagonal();
    }
  }
  const bool rank_deficient = null_dirs.cols() > 0;
  VectorXd null_gain = null_dirs.transpose() * bt;
  if (whiten) {
    std::vector<SparseSymMatrix> g2;
    for (int k = 0; k < range.cols(); ++k) {
      MatrixXd dk = MatrixXd::Zero(side, side);
      for (int i = 0; i < free; ++i)
        if (range(i, k) != 0.0) add_scaled(dk, g[i], range(i, k));
      g2.push_back(sparsify(dk, 1e-14 * dk.cwiseAbs().maxCoeff()));
    }
    g = std::move(g2);
  } else {
    for (int i = 0; i < free; ++i)
      for (auto& e : g[i]) e.value *= inv_norm(i);
  }
  bt = range.transpose() * bt;
  lmi.f = g;
  lmi.b = bt;
  auto lift = [&](const VectorXd& w) -> VectorXd {
    return y0 + basis * (range * w);
  };

  // 6. Solve.
  VectorXd w = VectorXd::Zero(static_cast<int>(lmi.f.size()));
  if (lmi.f.empty()) {
    const MatrixXd unscaled =
        dscale.cwiseInverse().asDiagonal() * lmi.c * dscale.cwiseInverse().asDiagonal();
    const double lmin = side == 0 ? 0.0 : min_eigenvalue(unscaled);
    if (lmin < -options.psd_tol) {
      sol.status = SdpStatus::Infeasible;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(unscaled);
      const VectorXd v = es.eigenvectors().col(0);
      MatrixXd cert = MatrixXd::Zero(m, m);
      for (int r = 0; r < side; ++r)
        for (int s = 0; s < side; ++s) cert(kept[r], kept[s]) = v(r) * v(s);
      sol.infeasibility_certificate = cert;
      return finish(lift(w));
    }
    sol.status = SdpStatus::Optimal;
    sol.upper_bound = c.dot(y0) + problem.objective_offset;
  } else {
    IpmResult r = run_interior_point(lmi, options);
    bool growth_only = false;  // unbounded without a recession direction
    if (r.status == SdpStatus::IterLimit || r.status == SdpStatus::NearOptimal) {
      const PhaseOne p1 = phase_one(lmi, options);
      if (p1.infeasible) {
        r.status = SdpStatus::Infeasible;
        r.certificate = p1.certificate;
      } else if (r.status == SdpStatus::IterLimit && p1.interior) {
        // The stall is usually an infeasible primal. Without the monotone
        // rule the dual objective can run past the unbounded threshold.
        BarrierResult br;
        const IpmResult free_run = run_interior_point(lmi, options, false);
        if (free_run.status == SdpStatus::Unbounded &&
            Eigen::LLT<MatrixXd>(slack(lmi, free_run.z)).info() == Eigen::Success) {
          br.status = SdpStatus::Unbounded;
          br.z = free_run.z;
          br.iterations = free_run.iterations;
        } else {
          br = dual_barrier(lmi, p1.z, options);
        }
        if (br.status == SdpStatus::IterLimit) {
          const BoxResult box = box_growth(lmi, options);
          if (box.status == SdpStatus::Unbounded) {
            br.status = SdpStatus::Unbounded;
            br.z = box.run.z;
            growth_only = true;
          } else if (box.status != SdpStatus::IterLimit) {
            br.status = box.status;
            br.z = box.run.z;
            br.gap = box.run.gap;
            br.pinf = box.run.pinf;
          }
          br.iterations = box.run.iterations;
        }
        if (br.status != SdpStatus::IterLimit) {
          r.status = br.status;
          r.z = br.z;
          r.iterations += br.iterations;
          r.gap = br.gap;
          r.pinf = br.pinf;
          r.dinf = 0.0;
          r.gap_history.insert(r.gap_history.end(), br.gap_history.begin(), br.gap_history.end());
          r.upper_bound = br.status == SdpStatus::Optimal ? lmi.b.dot(br.z) + br.gap
                                                          : std::numeric_limits<double>::infinity();
        }
      }
    }
    w = r.z;
    sol.status = r.status;
    sol.iterations = r.iterations;
    sol.duality_gap = r.gap;
    sol.primal_infeasibility = r.pinf;
    sol.dual_infeasibility = r.dinf;
    sol.gap_history = r.gap_history;
    sol.upper_bound = r.upper_bound + c.dot(y0) + problem.objective_offset;
    if (r.status == SdpStatus::Infeasible) {
      MatrixXd cert = MatrixXd::Zero(m, m);
      for (int a = 0; a < side; ++a)
        for (int b = 0; b < side; ++b) cert(kept[a], kept[b]) = dscale(a) * r.certificate(a, b) * dscale(b);
      sol.infeasibility_certificate = cert;
    }
    if (r.status == SdpStatus::Unbounded && !growth_only) {
      const VectorXd dir = basis * (range * r.z);
      sol.unbounded_ray = dir / std::max(dir.norm(), 1e-300);
    }
  }
  const bool solved = sol.status == SdpStatus::Optimal || sol.status == SdpStatus::NearOptimal;
  if (solved && rank_deficient &&
      null_gain.norm() > 1e-9 * (1.0 + c.norm())) {
    // Feasible, and the objective grows along a direction that leaves the
    // matrix unchanged.
    sol.status = SdpStatus::Unbounded;
    const VectorXd dir = basis * (null_dirs * null_gain);
    sol.unbounded_ray = dir / dir.norm();
    sol.upper_bound = std::numeric_limits<double>::infinity();
  }
  finish(lift(w));
  if (sol.status == SdpStatus::Optimal &&
      !passes_shifted_factorization(problem.assemble(sol.y), options.psd_tol)) {
    sol.status = SdpStatus::NearOptimal;
  }
  return sol;
}

namespace {

double number_from_json(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_rational(v.get<std::string>()).get_d();
  throw InputError("expected a number or rational string, got " + v.dump());
}

SparseSymMatrix sym_from_json(const nlohmann::json& j) {
  SparseSymMatrix out;
  if (!j.is_array()) throw InputError("matrix must be a list of [i, j, value] entries");
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw InputError("matrix entries must be [i, j, value]");
    int r = e[0].get<int>();
    int s = e[1].get<int>();
    if (r > s) std::swap(r, s);
    out.push_back({r, s, number_from_json(e[2])});
  }
  return out;
}

nlohmann::json sym_to_json(const SparseSymMatrix& a) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : a) out.push_back({e.row, e.col, e.value});
  return out;
}

}  // namespace

SdpProblem sdp_problem_from_json(const nlohmann::json& j) {
  try {
    SdpProblem p;
    p.side = j.at("side").get<int>();
    p.num_vars = j.at("vars").get<int>();
    if (j.contains("constant")) p.constant = sym_from_json(j["constant"]);
    for (const auto& a : j.at("coefficients")) p.coefficients.push_back(sym_from_json(a));
    for (const auto& v : j.at("objective")) p.objective.push_back(number_from_json(v));
    if (j.contains("offset")) p.objective_offset = number_from_json(j["offset"]);
    if (j.contains("equalities")) {
      for (const auto& eq : j["equalities"]) {
        LinearEquality le;
        for (const auto& t : eq.at("coefficients"))
          le.coefficients.emplace_back(t.at(0).get<int>(), number_from_json(t.at(1)));
        le.rhs = number_from_json(eq.at("rhs"));
        p.equalities.push_back(std::move(le));
      }
    }
    if (j.contains("labels")) p.labels = j["labels"].get<std::vector<std::string>>();
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed SDP JSON: ") + e.what());
  }
}

nlohmann::json to_json(const SdpProblem& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& a : p.coefficients) coeffs.push_back(sym_to_json(a));
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& eq : p.equalities) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& [l, v] : eq.coefficients) t.push_back({l, v});
    eqs.push_back({{"coefficients", t}, {"rhs", eq.rhs}});
  }
  nlohmann::json out = {{"side", p.side},         {"vars", p.num_vars},
                        {"constant", sym_to_json(p.constant)},
                        {"coefficients", coeffs}, {"objective", p.objective},
                        {"offset", p.objective_offset}, {"equalities", eqs}};
  if (!p.labels.empty()) out["labels"] = p.labels;
  return out;
}

nlohmann::json to_json(const SdpSolution& s) {
  nlohmann::json j = {{"status", to_string(s.status)},
          {"objective", s.objective},
          {"upperBound", s.upper_bound},
          {"dualityGap", s.duality_gap},
          {"primalInfeasibility", s.primal_infeasibility},
          {"dualInfeasibility", s.dual_infeasibility},
          {"minEig", s.min_eig},
          {"iterations", s.iterations},
          {"y", std::vector<double>(s.y.data(), s.y.data() + s.y.size())}};
  if (s.infeasibility_certificate.size() > 0) {
    nlohmann::json w = nlohmann::json::array();
    for (int i = 0; i < s.infeasibility_certificate.rows(); ++i) {
      std::vector<double> row(s.infeasibility_certificate.cols());
      for (int c = 0; c < s.infeasibility_certificate.cols(); ++c) row[c] = s.infeasibility_certificate(i, c);
      w.push_back(row);
    }
    j["infeasibilityCertificate"] = w;
  }
  if (s.unbounded_ray.size() > 0) {
    j["unboundedRay"] = std::vector<double>(s.unbounded_ray.data(), s.unbounded_ray.data() + s.unbounded_ray.size());
  }
  return j;
}

}  // namespace thetabody
