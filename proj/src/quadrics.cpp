#include "thetabody/quadrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "thetabody/errors.hpp"

namespace thetabody {
namespace {

// (i, j) with i <= j for a degree-2 monomial.
std::pair<int, int> quadratic_indices(const Monomial& m) {
  std::vector<int> idx;
  for (int i = 0; i < m.dim(); ++i) {
    for (int e = 0; e < m.exponent(i); ++e) idx.push_back(i);
  }
  return {idx[0], idx[1]};
}

Quadric to_quadric(int dim, const std::vector<Monomial>& monos, const RationalVector& coeffs) {
  Quadric q;
  q.A = Eigen::MatrixXd::Zero(dim, dim);
  q.b = Eigen::VectorXd::Zero(dim);
  for (std::size_t l = 0; l < monos.size(); ++l) {
    const double v = coeffs[l].get_d();
    const Monomial& m = monos[l];
    if (m.degree() == 0) {
      q.c = v;
    } else if (m.degree() == 1) {
      for (int i = 0; i < dim; ++i) {
        if (m.exponent(i) == 1) q.b(i) = v;
      }
    } else {
      const auto [i, j] = quadratic_indices(m);
      if (i == j) {
        q.A(i, i) = v;
      } else {
        q.A(i, j) = q.A(j, i) = v / 2.0;
      }
    }
  }
  return q;
}

SparseSymMatrix sym_entries(const Eigen::MatrixXd& a) {
  SparseSymMatrix out;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = i; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) out.push_back({i, j, a(i, j)});
    }
  }
  return out;
}

// Quadratic part of each basis element as a column of an exact matrix
// (rows are the degree-2 monomials).
RationalMatrix quadratic_part_matrix(const QuadricSpace& space) {
  RationalMatrix m;
  for (std::size_t l = 0; l < space.monomials().size(); ++l) {
    if (space.monomials()[l].degree() != 2) continue;
    RationalVector row;
    for (const auto& e : space.basis()) row.push_back(e[l]);
    m.push_back(std::move(row));
  }
  return m;
}

// Indices of basis elements whose quadratic parts are linearly independent.
std::vector<int> quadratic_independent_subset(const QuadricSpace& space) {
  const RationalMatrix m = quadratic_part_matrix(space);
  std::vector<int> keep;
  RationalMatrix acc;
  for (int k = 0; k < space.size(); ++k) {
    RationalVector col;
    for (const auto& row : m) col.push_back(row[k]);
    acc.push_back(col);
    if (exact::rank(acc) == static_cast<int>(acc.size())) {
      keep.push_back(k);
    } else {
      acc.pop_back();
    }
  }
  return keep;
}

// Common frame for the trace-normalized SDPs: variables are the coefficients
// of the elements in `subset`, LMI A(c) (+ extra), equality trace A(c) = 1.
SdpProblem normalized_problem(const QuadricSpace& space, const std::vector<int>& subset) {
  SdpProblem p;
  p.side = space.dim();
  p.num_vars = static_cast<int>(subset.size());
  LinearEquality trace;
  trace.rhs = 1.0;
  for (int v = 0; v < p.num_vars; ++v) {
    const Quadric q = space.quadric(subset[v]);
    p.coefficients.push_back(sym_entries(q.A));
    p.labels.push_back("c[" + std::to_string(subset[v]) + "]");
    if (q.A.trace() != 0.0) trace.coefficients.emplace_back(v, q.A.trace());
  }
  p.equalities.push_back(std::move(trace));
  p.objective.assign(p.num_vars, 0.0);
  return p;
}

bool trace_consistent(const SdpProblem& p) { return !p.equalities.front().coefficients.empty(); }

Eigen::VectorXd expand(const QuadricSpace& space, const std::vector<int>& subset,
                       const Eigen::VectorXd& y) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.size());
  for (std::size_t v = 0; v < subset.size(); ++v) c(subset[v]) = y(v);
  return c;
}

bool solved(SdpStatus s) { return s == SdpStatus::Optimal || s == SdpStatus::NearOptimal; }

}  // namespace

double Quadric::evaluate(const Eigen::VectorXd& x) const { return x.dot(A * x) + b.dot(x) + c; }

bool Quadric::is_convex(double tol) const {
  if (A.size() == 0 || A.cwiseAbs().maxCoeff() <= tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

std::string Quadric::to_string() const {
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  auto term = [&](double v, const std::string& name) {
    if (v == 0.0) return;
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    first = false;
    const double a = std::abs(v);
    if (name.empty()) {
      os << a;
    } else {
      if (a != 1.0) os << a << "*";
      os << name;
    }
  };
  const int n = static_cast<int>(A.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = i == j ? A(i, i) : 2.0 * A(i, j);
      term(v, i == j ? "x" + std::to_string(i + 1) + "^2"
                     : "x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1));
    }
  }
  for (int i = 0; i < n; ++i) term(b(i), "x" + std::to_string(i + 1));
  term(c, "");
  return first ? "0" : os.str();
}

QuadricSpace::QuadricSpace(int dim, const std::vector<RationalVector>& elements)
    : dim_(dim), monomials_(monomials_up_to(dim, 2)) {
  RationalMatrix acc;
  for (const auto& e : elements) {
    if (e.size() != monomials_.size()) throw InputError("quadric coefficient vector has wrong size");
    acc.push_back(e);
    if (exact::rank(acc) == static_cast<int>(acc.size())) {
      basis_.push_back(e);
    } else {
      acc.pop_back();
    }
  }
}

Quadric QuadricSpace::quadric(int k) const { return to_quadric(dim_, monomials_, basis_.at(k)); }

Quadric QuadricSpace::combination(const Eigen::VectorXd& coeffs) const {
  Quadric q{Eigen::MatrixXd::Zero(dim_, dim_), Eigen::VectorXd::Zero(dim_), 0.0};
  for (int k = 0; k < size(); ++k) {
    if (coeffs(k) == 0.0) continue;
    const Quadric e = quadric(k);
    q.A += coeffs(k) * e.A;
    q.b += coeffs(k) * e.b;
    q.c += coeffs(k) * e.c;
  }
  return q;
}

Polynomial QuadricSpace::polynomial(int k) const {
  Polynomial p(dim_);
  for (std::size_t l = 0; l < monomials_.size(); ++l) p.add_term(monomials_[l], basis_.at(k)[l]);
  return p;
}

QuadricSpace QuadricSpace::scaled(const Rational& factor) const {
  std::vector<RationalVector> elems = basis_;
  for (auto& e : elems) {
    for (auto& x : e) x *= factor;
  }
  return QuadricSpace(dim_, elems);
}

QuadricSpace quadric_space_from_points(const PointSet& s) {
  const std::vector<Monomial> monos = monomials_up_to(s.dim(), 2);
  RationalMatrix eval;
  for (const auto& p : s.points()) {
    RationalVector row;
    for (const auto& m : monos) row.push_back(m.evaluate(p));
    eval.push_back(std::move(row));
  }
  std::vector<RationalVector> elems;
  for (const auto& v : exact::nullspace(eval, static_cast<int>(monos.size())))
    elems.push_back(primitive_integer_vector(v));
  return QuadricSpace(s.dim(), elems);
}

QuadricSpace quadric_space_from_generators(int dim, const std::vector<Polynomial>& gens) {
  const std::vector<Monomial> monos = monomials_up_to(dim, 2);
  auto coeffs = [&](const Polynomial& p) {
    RationalVector v(monos.size(), Rational(0));
    for (const auto& [m, c] : p.terms()) {
      const auto it = std::find(monos.begin(), monos.end(), m);
      v[it - monos.begin()] = c;
    }
    return v;
  };
  std::vector<RationalVector> elems;
  for (const auto& g : gens) {
    if (g.dim() != dim) throw InputError("generator has the wrong number of variables");
    if (g.degree() > 2) throw InputError("generator of degree " + std::to_string(g.degree()) +
                                         " exceeds 2: " + g.to_string());
    if (g.is_zero()) continue;
    elems.push_back(coeffs(g));
    if (g.degree() <= 1) {
      for (int i = 0; i < dim; ++i) elems.push_back(coeffs(g * Monomial::variable(dim, i)));
    }
  }
  return QuadricSpace(dim, elems);
}

std::vector<Polynomial> generators_from_json(const nlohmann::json& j, int& dim) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
    throw InputError("generator JSON needs an integer \"dim\"");
  dim = j["dim"].get<int>();
  if (dim < 1) throw InputError("dim must be positive");
  std::vector<Polynomial> out;
  if (!j.contains("generators")) return out;
  if (!j["generators"].is_array()) throw InputError("\"generators\" must be an array");
  for (const auto& g : j["generators"]) {
    if (!g.is_object()) throw InputError("each generator is a monomial -> coefficient map");
    Polynomial p(dim);
    for (const auto& [key, value] : g.items()) {
      const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
      p.add_term(parse_monomial(key, dim), parse_rational(text));
    }
    out.push_back(std::move(p));
  }
  return out;
}

ConvexQuadricResult has_convex_quadric(const QuadricSpace& space, double tol,
                                       const SdpOptions& options) {
  ConvexQuadricResult r;
  const std::vector<int> subset = quadratic_independent_subset(space);
  if (subset.empty()) {
    r.detail = "no element has a quadratic part";
    return r;
  }
  SdpProblem p = normalized_problem(space, subset);
  if (!trace_consistent(p)) {
    r.detail = "every quadratic part is traceless, so PSD forces A = 0";
    return r;
  }
  // Extra variable t with coefficient -I.
  SparseSymMatrix minus_identity;
  for (int i = 0; i < p.side; ++i) minus_identity.push_back({i, i, -1.0});
  p.coefficients.push_back(minus_identity);
  p.labels.push_back("t");
  p.objective.push_back(1.0);
  ++p.num_vars;
  r.solution = solve(p, options);
  if (r.solution.status == SdpStatus::Infeasible) {
    r.detail = "trace normalization infeasible";
    return r;
  }
  if (!solved(r.solution.status)) {
    throw SolverError("convex quadric SDP ended with status " + to_string(r.solution.status));
  }
  r.min_eigenvalue = r.solution.objective;
  r.exists = r.min_eigenvalue >= -tol;
  if (r.exists) {
    r.witness = space.combination(expand(space, subset, r.solution.y.head(subset.size())));
    r.detail = "trace-one element with smallest eigenvalue " + std::to_string(r.min_eigenvalue);
  } else {
    r.detail = "every trace-one element has a negative eigenvalue";
  }
  return r;
}

SdpOptions range_options() {
  SdpOptions o;
  o.feas_tol = 1e-10;
  o.gap_tol = 1e-10;
  return o;
}

EntryRange quadratic_entry_range(const QuadricSpace& space, int i, int j, const SdpOptions& options) {
  if (i < 0 || j < 0 || i >= space.dim() || j >= space.dim()) throw InputError("entry out of range");
  EntryRange out;
  const std::vector<int> subset = quadratic_independent_subset(space);
  if (subset.empty()) return out;
  SdpProblem p = normalized_problem(space, subset);
  if (!trace_consistent(p)) return out;
  std::vector<double> entry;
  for (int k : subset) entry.push_back(space.quadric(k).A(i, j));
  for (int sign : {1, -1}) {
    for (std::size_t v = 0; v < entry.size(); ++v) p.objective[v] = sign * entry[v];
    const SdpSolution s = solve(p, options);
    if (s.status == SdpStatus::Infeasible) return out;
    if (!solved(s.status)) {
      throw SolverError("entry range SDP ended with status " + to_string(s.status));
    }
    (sign > 0 ? out.max : out.min) = sign * s.objective;
  }
  out.feasible = true;
  return out;
}

std::string to_string(MembershipStatus status) {
  switch (status) {
    case MembershipStatus::Inside: return "Inside";
    case MembershipStatus::Borderline: return "Borderline";
    case MembershipStatus::Outside: return "Outside";
  }
  return "Unknown";
}

MembershipResult th1_membership(const QuadricSpace& space, const Eigen::VectorXd& query,
                                double boundary_tol, const SdpOptions& options) {
  if (query.size() != space.dim()) throw InputError("query has the wrong dimension");
  MembershipResult r;

  // Elements with zero quadratic part are affine functions in the ideal; any
  // of them nonzero at the query makes the sup unbounded.
  const RationalMatrix quad = quadratic_part_matrix(space);
  for (const auto& v : exact::nullspace(quad, space.size())) {
    Eigen::VectorXd c(space.size());
    for (int k = 0; k < space.size(); ++k) c(k) = v[k].get_d();
    Quadric lin = space.combination(c);
    const double value = lin.evaluate(query);
    if (std::abs(value) > boundary_tol) {
      if (value < 0) {
        lin.b = -lin.b;
        lin.c = -lin.c;
      }
      r.status = MembershipStatus::Outside;
      r.unbounded = true;
      r.certificate = lin;
      return r;
    }
  }

  const std::vector<int> subset = quadratic_independent_subset(space);
  if (subset.empty()) return r;
  SdpProblem p = normalized_problem(space, subset);
  if (!trace_consistent(p)) return r;
  for (std::size_t v = 0; v < subset.size(); ++v) p.objective[v] = space.quadric(subset[v]).evaluate(query);
  r.solution = solve(p, options);
  if (r.solution.status == SdpStatus::Infeasible) return r;
  if (r.solution.status == SdpStatus::Unbounded) {
    r.status = MembershipStatus::Outside;
    r.unbounded = true;
    if (r.solution.unbounded_ray.size() == static_cast<Eigen::Index>(subset.size()))
      r.certificate = space.combination(expand(space, subset, r.solution.unbounded_ray));
    return r;
  }
  if (!solved(r.solution.status)) {
    throw SolverError("membership SDP ended with status " + to_string(r.solution.status));
  }
  r.sup_value = r.solution.objective;
  if (*r.sup_value > boundary_tol) {
    r.status = MembershipStatus::Outside;
    r.certificate = space.combination(expand(space, subset, r.solution.y));
  } else if (*r.sup_value < -boundary_tol) {
    r.status = MembershipStatus::Inside;
  } else {
    r.status = MembershipStatus::Borderline;
  }
  return r;
}

nlohmann::json to_json(const Quadric& q) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < q.A.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < q.A.cols(); ++j) row.push_back(q.A(i, j));
    a.push_back(row);
  }
  std::vector<double> b(q.b.data(), q.b.data() + q.b.size());
  return {{"A", a}, {"b", b}, {"c", q.c}, {"polynomial", q.to_string()}};
}

}  // namespace thetabody
