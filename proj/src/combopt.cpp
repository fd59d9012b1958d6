#include "thetabody/combopt.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "thetabody/errors.hpp"

namespace thetabody {
namespace {

void sort_elements(std::vector<std::vector<int>>& e) {
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
}

void check_cap(std::size_t count, int cap) {
  if (static_cast<long>(count) > cap) {
    throw ResourceError("combinatorial basis exceeds the enumeration cap of " +
                        std::to_string(cap) + " elements");
  }
}

// Union-find with parity, for odd-cycle detection on edge subsets.
class ParityUnionFind {
 public:
  explicit ParityUnionFind(int n) : parent_(n), parity_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  // Returns false if adding the edge closes an odd cycle.
  bool add_edge(int u, int v) {
    auto [ru, pu] = find(u);
    auto [rv, pv] = find(v);
    if (ru == rv) return pu != pv;
    parent_[ru] = rv;
    parity_[ru] = pu ^ pv ^ 1;
    return true;
  }

 private:
  std::pair<int, int> find(int x) {
    int p = 0;
    while (parent_[x] != x) {
      p ^= parity_[x];
      x = parent_[x];
    }
    return {x, p};
  }
  std::vector<int> parent_;
  std::vector<int> parity_;
};

}  // namespace

int CombBasis::count_up_to_size(int s) const {
  return static_cast<int>(std::count_if(elements.begin(), elements.end(),
                                        [s](const auto& e) { return static_cast<int>(e.size()) <= s; }));
}

Monomial CombBasis::monomial(int i) const {
  std::vector<int> e(ground_size, 0);
  for (int v : elements.at(i)) e[v] = 1;
  return Monomial(std::move(e));
}

CombBasis enumerate_stable_sets(const Graph& g, int max_size, int cap) {
  if (max_size < 0) throw InputError("maxSize must be non-negative");
  CombBasis out{CombKind::StableSets, g.num_vertices(), {}};
  std::vector<int> current;
  auto grow = [&](auto&& self, int next) -> void {
    out.elements.push_back(current);
    check_cap(out.elements.size(), cap);
    if (static_cast<int>(current.size()) == max_size) return;
    for (int v = next; v < g.num_vertices(); ++v) {
      const bool independent = std::none_of(current.begin(), current.end(),
                                            [&](int u) { return g.adjacent(u, v); });
      if (!independent) continue;
      current.push_back(v);
      self(self, v + 1);
      current.pop_back();
    }
  };
  grow(grow, 0);
  sort_elements(out.elements);
  return out;
}

bool edge_set_is_bipartite(const Graph& g, const std::vector<int>& edge_ids) {
  ParityUnionFind uf(g.num_vertices());
  for (int id : edge_ids) {
    const auto [u, v] = g.edges().at(id);
    if (!uf.add_edge(u, v)) return false;
  }
  return true;
}

CombBasis enumerate_odd_cycle_free(const Graph& g, int max_size, int cap) {
  if (max_size < 0) throw InputError("maxSize must be non-negative");
  CombBasis out{CombKind::OddCycleFreeEdgeSets, g.num_edges(), {}};
  std::vector<int> current;
  // Supersets of a set containing an odd cycle contain it too, so prune.
  auto grow = [&](auto&& self, int next) -> void {
    out.elements.push_back(current);
    check_cap(out.elements.size(), cap);
    if (static_cast<int>(current.size()) == max_size) return;
    for (int e = next; e < g.num_edges(); ++e) {
      current.push_back(e);
      if (edge_set_is_bipartite(g, current)) self(self, e + 1);
      current.pop_back();
    }
  };
  grow(grow, 0);
  sort_elements(out.elements);
  return out;
}

MomentTemplate build_comb_template(const CombBasis& basis, int k) {
  if (k < 1) throw InputError("level must be >= 1");
  const int rows = basis.count_up_to_size(k);
  const int ys = basis.count_up_to_size(2 * k);
  std::vector<Monomial> row_labels, y_labels;
  std::map<Monomial, int> index;
  for (int i = 0; i < ys; ++i) {
    Monomial m = basis.monomial(i);
    if (i < rows) row_labels.push_back(m);
    index.emplace(m, i);
    y_labels.push_back(std::move(m));
  }
  // Rows double as the first `rows` y labels (basis is size-sorted).
  return MomentTemplate::build(
      k, row_labels, y_labels,
      [&](int i, int j) -> SparseRationalVector {
        const auto it = index.find(y_labels[i].lcm(y_labels[j]));
        if (it == index.end()) return {};
        return {{it->second, Rational(1)}};
      },
      [&](int i, int j) { return y_labels[i].lcm(y_labels[j]); });
}

namespace {

ThetaResult solve_comb(const CombBasis& basis, int k, const std::vector<double>& weights,
                       const CombOptions& options) {
  const MomentTemplate t = build_comb_template(basis, k);
  std::vector<std::pair<int, double>> objective;
  // Singletons are elements 1..ground_size in sorted order.
  for (int i = 0; i < basis.ground_size; ++i) {
    if (weights[i] != 0.0) objective.emplace_back(1 + i, weights[i]);
  }
  const SdpProblem p = build_theta_sdp(t, objective);
  ThetaResult r;
  r.solution = solve(p, options.sdp);
  r.value = r.solution.objective;
  r.side = t.side();
  r.y_dim = t.y_dim();
  for (int i = 0; i < basis.ground_size; ++i) r.point.push_back(r.solution.y(1 + i));
  return r;
}

}  // namespace

ThetaResult stable_set_theta(const Graph& g, int k, const std::vector<double>& weights,
                             const CombOptions& options) {
  if (k < 1) throw InputError("level must be >= 1");
  if (g.num_vertices() == 0) throw InputError("graph has no vertices");
  std::vector<double> w = weights.empty() ? std::vector<double>(g.num_vertices(), 1.0) : weights;
  if (static_cast<int>(w.size()) != g.num_vertices())
    throw InputError("need one weight per vertex");
  const CombBasis basis = enumerate_stable_sets(g, 2 * k, options.enumeration_cap);
  return solve_comb(basis, k, w, options);
}

ThetaResult cut_theta(const Graph& g, const std::vector<Rational>& weights, int k,
                      const CombOptions& options) {
  if (k < 1) throw InputError("level must be >= 1");
  if (static_cast<int>(weights.size()) != g.num_edges())
    throw InputError("need one weight per edge");
  std::vector<double> w;
  for (const auto& x : weights) {
    if (sgn(x) < 0) throw InputError("cut weights must be non-negative");
    w.push_back(x.get_d());
  }
  if (std::all_of(weights.begin(), weights.end(), [](const Rational& x) { return sgn(x) == 0; })) {
    ThetaResult r;
    r.value = 0.0;
    r.point.assign(g.num_edges(), 0.0);
    r.solution.status = SdpStatus::Optimal;
    return r;
  }
  const CombBasis basis = enumerate_odd_cycle_free(g, 2 * k, options.enumeration_cap);
  return solve_comb(basis, k, w, options);
}

}  // namespace thetabody
