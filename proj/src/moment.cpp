#include "thetabody/moment.hpp"

#include <map>

#include "thetabody/errors.hpp"

namespace thetabody {
namespace {

std::size_t packed(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  const std::size_t ii = i;
  return ii * n - ii * (ii - 1) / 2 + (j - i);
}

}  // namespace

MomentTemplate MomentTemplate::build(int level, std::vector<Monomial> rows,
                                     std::vector<Monomial> ys,
                                     const std::function<SparseRationalVector(int, int)>& product,
                                     const std::function<Monomial(int, int)>& key) {
  MomentTemplate t;
  t.level_ = level;
  t.row_labels_ = std::move(rows);
  t.y_labels_ = std::move(ys);
  const int n = t.side();
  t.slots_.resize(static_cast<std::size_t>(n) * (n + 1) / 2);
  std::map<Monomial, int> by_key;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Monomial k = key(i, j);
      auto it = by_key.find(k);
      if (it == by_key.end()) {
        SparseRationalVector v = product(i, j);
        for (const auto& [l, c] : v) {
          if (l < 0 || l >= t.y_dim()) {
            throw InputError("moment cell (" + t.row_labels_[i].to_string() + ", " +
                             t.row_labels_[j].to_string() +
                             ") leaves the y coordinates; basis is not degree compatible");
          }
        }
        it = by_key.emplace(k, static_cast<int>(t.distinct_.size())).first;
        t.distinct_.push_back(std::move(v));
      }
      t.slots_[packed(i, j, n)] = it->second;
    }
  }
  return t;
}

const SparseRationalVector& MomentTemplate::cell(int i, int j) const {
  return distinct_.at(cell_slot(i, j));
}

int MomentTemplate::cell_slot(int i, int j) const {
  if (i < 0 || j < 0 || i >= side() || j >= side()) throw InputError("cell index out of range");
  return slots_[packed(i, j, side())];
}

MomentTemplate build_moment_template(const QuotientRing& ring, int k) {
  if (k < 1) throw InputError("moment level must be >= 1");
  if (k > ring.k_max()) {
    throw ResourceError("level " + std::to_string(k) + " exceeds configured k_max = " +
                        std::to_string(ring.k_max()));
  }
  const int rows = ring.count_up_to_degree(k);
  const int ys = ring.count_up_to_degree(2 * k);
  const auto& b = ring.basis();
  std::vector<Monomial> row_labels(b.begin(), b.begin() + rows);
  std::vector<Monomial> y_labels(b.begin(), b.begin() + ys);
  return MomentTemplate::build(
      k, std::move(row_labels), std::move(y_labels),
      [&ring](int i, int j) { return ring.product(i, j); },
      [&b](int i, int j) { return b[i] * b[j]; });
}

Eigen::MatrixXd assemble(const MomentTemplate& t, const Eigen::VectorXd& y) {
  if (y.size() != t.y_dim()) throw InputError("assemble: y has the wrong length");
  const int n = t.side();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      for (const auto& [l, c] : t.cell(i, j)) v += c.get_d() * y(l);
      m(i, j) = m(j, i) = v;
    }
  }
  return m;
}

RationalMatrix assemble(const MomentTemplate& t, const RationalVector& y) {
  if (static_cast<int>(y.size()) != t.y_dim()) throw InputError("assemble: y has the wrong length");
  const int n = t.side();
  RationalMatrix m(n, RationalVector(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Rational v = 0;
      for (const auto& [l, c] : t.cell(i, j)) v += c * y[l];
      m[i][j] = v;
      m[j][i] = v;
    }
  }
  return m;
}

RationalVector point_moments(const QuotientRing& ring, const MomentTemplate& t, int s) {
  const RationalVector& xi = ring.evaluate_basis(s);
  return RationalVector(xi.begin(), xi.begin() + t.y_dim());
}

SdpProblem build_theta_sdp(const MomentTemplate& t,
                           const std::vector<std::pair<int, double>>& objective) {
  if (objective.empty()) throw InputError("theta SDP needs a non-empty objective");
  SdpProblem p;
  p.side = t.side();
  p.num_vars = t.y_dim();
  p.objective.assign(p.num_vars, 0.0);
  for (const auto& [l, c] : objective) {
    if (l < 0 || l >= p.num_vars) throw InputError("objective index out of range");
    if (t.y_degree(l) > 1)
      throw InputError("objective must live on degree <= 1 coordinates, got y[" +
                       t.y_labels()[l].to_string() + "]");
    p.objective[l] += c;
  }
  p.coefficients.resize(p.num_vars);
  for (int i = 0; i < p.side; ++i) {
    for (int j = i; j < p.side; ++j) {
      for (const auto& [l, c] : t.cell(i, j)) p.coefficients[l].push_back({i, j, c.get_d()});
    }
  }
  for (const auto& m : t.y_labels()) p.labels.push_back("y[" + m.to_string() + "]");
  p.equalities.push_back({{{0, 1.0}}, 1.0});
  return p;
}

std::vector<std::pair<int, double>> linear_objective(const QuotientRing& ring,
                                                     const MomentTemplate& t,
                                                     const RationalVector& coefficients) {
  if (static_cast<int>(coefficients.size()) != ring.dim())
    throw InputError("objective needs one coefficient per variable");
  Polynomial f(ring.dim());
  for (int i = 0; i < ring.dim(); ++i) f.add_term(Monomial::variable(ring.dim(), i), coefficients[i]);
  std::vector<std::pair<int, double>> out;
  for (const auto& [l, c] : ring.normal_form(f)) {
    if (l >= t.y_dim()) throw InputError("normal form of a linear form left B_1");
    out.emplace_back(l, c.get_d());
  }
  if (out.empty()) out.emplace_back(0, 0.0);  // constant zero objective on S
  return out;
}

nlohmann::json template_to_json(const MomentTemplate& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : t.row_labels()) rows.push_back(m.to_string());
  nlohmann::json ys = nlohmann::json::array();
  for (const auto& m : t.y_labels()) ys.push_back(m.to_string());
  nlohmann::json cells = nlohmann::json::array();
  for (int i = 0; i < t.side(); ++i) {
    for (int j = i; j < t.side(); ++j) {
      nlohmann::json coeffs = nlohmann::json::object();
      for (const auto& [l, c] : t.cell(i, j))
        coeffs["y[" + t.y_labels()[l].to_string() + "]"] = to_string(c);
      cells.push_back({{"cell", {t.row_labels()[i].to_string(), t.row_labels()[j].to_string()}},
                       {"coeffs", std::move(coeffs)}});
    }
  }
  return {{"level", t.level()}, {"rows", rows}, {"y", ys}, {"cells", cells}};
}

}  // namespace thetabody
