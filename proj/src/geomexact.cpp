#include "thetabody/geomexact.hpp"

#include <algorithm>
#include <atomic>
#include <boost/dynamic_bitset.hpp>
#include <map>
#include <set>
#include <thread>

#include "thetabody/combopt.hpp"
#include "thetabody/errors.hpp"

namespace thetabody {
namespace {

using Bits = boost::dynamic_bitset<>;

// Indices of an affinely independent subset of maximal size, greedily in order.
std::vector<int> affine_basis(const std::vector<RationalVector>& pts) {
  std::vector<int> basis{0};
  RationalMatrix rows;
  for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
    RationalVector diff(pts[i].size());
    for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = pts[i][c] - pts[0][c];
    rows.push_back(diff);
    if (exact::rank(rows) == static_cast<int>(rows.size())) {
      basis.push_back(i);
    } else {
      rows.pop_back();
    }
  }
  return basis;
}

struct Ray {
  RationalVector h;
  Bits tight;
};

Rational eval(const RationalVector& row, const RationalVector& h) { return exact::dot(row, h); }

RationalVector normalize(const RationalVector& v) { return primitive_integer_vector(v); }

// Extreme rays of {h : rows[i] . h >= 0 for all i}; rows must have full
// column rank.
std::vector<Ray> double_description(const RationalMatrix& rows) {
  const int m = static_cast<int>(rows.size());
  const int cols = static_cast<int>(rows.front().size());
  const std::vector<int> start = [&] {
    std::vector<int> picked;
    RationalMatrix acc;
    for (int i = 0; i < m && static_cast<int>(picked.size()) < cols; ++i) {
      acc.push_back(rows[i]);
      if (exact::rank(acc) == static_cast<int>(acc.size())) {
        picked.push_back(i);
      } else {
        acc.pop_back();
      }
    }
    return picked;
  }();
  if (static_cast<int>(start.size()) != cols) throw SolverError("constraint rows are rank deficient");

  RationalMatrix square;
  for (int i : start) square.push_back(rows[i]);
  const RationalMatrix inv = exact::inverse(square);
  std::vector<Ray> rays;
  for (int k = 0; k < cols; ++k) {
    Ray r;
    r.h.resize(cols);
    for (int c = 0; c < cols; ++c) r.h[c] = inv[c][k];
    r.h = normalize(r.h);
    r.tight = Bits(m);
    for (int j = 0; j < cols; ++j) {
      if (j != k) r.tight.set(start[j]);
    }
    rays.push_back(std::move(r));
  }

  std::vector<bool> done(m, false);
  for (int i : start) done[i] = true;
  for (int j = 0; j < m; ++j) {
    if (done[j]) continue;
    done[j] = true;
    std::vector<int> pos, neg;
    std::vector<Rational> val(rays.size());
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = eval(rows[j], rays[r].h);
      const int s = sgn(val[r]);
      if (s > 0) pos.push_back(static_cast<int>(r));
      if (s < 0) neg.push_back(static_cast<int>(r));
      if (s == 0) rays[r].tight.set(j);
    }
    if (neg.empty()) continue;
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (sgn(val[r]) >= 0) next.push_back(rays[r]);
    }
    for (int p : pos) {
      for (int q : neg) {
        Bits common = rays[p].tight & rays[q].tight;
        if (static_cast<int>(common.count()) < cols - 2) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (static_cast<int>(r) == p || static_cast<int>(r) == q) continue;
          if (common.is_subset_of(rays[r].tight)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray nr;
        nr.h.resize(cols);
        for (int c = 0; c < cols; ++c) nr.h[c] = val[p] * rays[q].h[c] - val[q] * rays[p].h[c];
        nr.h = normalize(nr.h);
        nr.tight = common;
        nr.tight.set(j);
        next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
  }
  return rays;
}

bool is_zero_one(const PointSet& s) {
  for (const auto& p : s.points()) {
    for (const auto& x : p) {
      if (x != 0 && x != 1) return false;
    }
  }
  return true;
}

}  // namespace

RationalVector AffineChart::coordinates(const RationalVector& x) const {
  RationalVector out;
  out.reserve(pivots.size());
  for (int p : pivots) out.push_back(x.at(p) - base.at(p));
  return out;
}

AffineChart affine_chart(const PointSet& s) {
  AffineChart chart;
  chart.base = s[0];
  RationalMatrix diffs;
  for (int i = 1; i < s.size(); ++i) {
    RationalVector d(s.dim());
    for (int c = 0; c < s.dim(); ++c) d[c] = s[i][c] - s[0][c];
    diffs.push_back(std::move(d));
  }
  if (!diffs.empty()) {
    const auto ef = exact::rref(diffs);
    chart.pivots = ef.pivots;
  }
  chart.dim = static_cast<int>(chart.pivots.size());
  return chart;
}

int affine_dimension(const PointSet& s) { return affine_chart(s).dim; }

std::vector<FacetIneq> facets(const PointSet& s, const GeomOptions& options) {
  if (s.size() < 2) throw InputError("facet enumeration needs at least two points");
  if (s.size() > options.point_cap) {
    throw ResourceError("point set has " + std::to_string(s.size()) +
                        " points, above the cap of " + std::to_string(options.point_cap));
  }
  const AffineChart chart = affine_chart(s);
  if (chart.dim > options.max_dim) {
    throw ResourceError("affine dimension " + std::to_string(chart.dim) +
                        " exceeds the limit of " + std::to_string(options.max_dim));
  }
  RationalMatrix rows;
  for (const auto& p : s.points()) {
    RationalVector row{Rational(1)};
    const RationalVector u = chart.coordinates(p);
    row.insert(row.end(), u.begin(), u.end());
    rows.push_back(std::move(row));
  }
  const std::vector<Ray> rays = double_description(rows);

  std::vector<FacetIneq> out;
  for (const Ray& r : rays) {
    RationalVector a(s.dim(), Rational(0));
    for (int k = 0; k < chart.dim; ++k) a[chart.pivots[k]] = r.h[k + 1];
    Rational b = exact::dot(a, chart.base) - r.h[0];
    const RationalVector prim = primitive_integer_vector(a);
    Rational scale = 0;
    for (int c = 0; c < s.dim(); ++c) {
      if (sgn(a[c]) != 0) {
        scale = prim[c] / a[c];
        break;
      }
    }
    FacetIneq f;
    f.normal = prim;
    f.offset = b * scale;
    f.offset.canonicalize();
    std::set<Rational> vals;
    for (const auto& p : s.points()) vals.insert(exact::dot(f.normal, p) - f.offset);
    f.values.assign(vals.begin(), vals.end());
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const FacetIneq& x, const FacetIneq& y) {
    if (x.normal != y.normal) return x.normal < y.normal;
    return x.offset < y.offset;
  });
  return out;
}

std::vector<int> vertex_indices(const PointSet& s, const std::vector<FacetIneq>& fs) {
  const AffineChart chart = affine_chart(s);
  std::vector<int> out;
  for (int i = 0; i < s.size(); ++i) {
    RationalMatrix tight;
    for (const auto& f : fs) {
      if (exact::dot(f.normal, s[i]) == f.offset) {
        RationalVector restricted;
        for (int p : chart.pivots) restricted.push_back(f.normal[p]);
        tight.push_back(std::move(restricted));
      }
    }
    if (!tight.empty() && exact::rank(tight) == chart.dim) out.push_back(i);
  }
  return out;
}

ExactnessReport is_exact(const PointSet& s, const GeomOptions& options) {
  ExactnessReport r;
  r.facets = facets(s, options);
  r.affine_dim = affine_dimension(s);
  r.two_level = true;
  for (std::size_t i = 0; i < r.facets.size(); ++i) {
    const int count = static_cast<int>(r.facets[i].values.size());
    r.theta_rank_upper_bound = std::max(r.theta_rank_upper_bound, count - 1);
    if (count > 2 && r.two_level) {
      r.two_level = false;
      r.failing_facet = static_cast<int>(i);
    }
  }
  return r;
}

int theta_rank_upper_bound(const PointSet& s, const GeomOptions& options) {
  return is_exact(s, options).theta_rank_upper_bound;
}

BoundCheck check_facet_vertex_bounds(const PointSet& s, const GeomOptions& options) {
  const ExactnessReport r = is_exact(s, options);
  BoundCheck b;
  b.dim = r.affine_dim;
  b.facet_count = static_cast<int>(r.facets.size());
  b.vertex_count = static_cast<int>(vertex_indices(s, r.facets).size());
  b.applicable = r.two_level;
  if (b.applicable) {
    const long bound = 1L << b.dim;
    b.within_bounds = b.facet_count <= bound && b.vertex_count <= bound;
  }
  return b;
}

bool affinely_equivalent(const PointSet& a, const PointSet& b) {
  if (a.size() != b.size()) return false;
  const AffineChart ca = affine_chart(a);
  const AffineChart cb = affine_chart(b);
  if (ca.dim != cb.dim) return false;
  const int d = ca.dim;
  std::vector<RationalVector> pa, pb;
  for (const auto& p : a.points()) pa.push_back(ca.coordinates(p));
  for (const auto& p : b.points()) pb.push_back(cb.coordinates(p));
  if (d == 0) return true;
  const std::set<RationalVector> target(pb.begin(), pb.end());

  const std::vector<int> basis = affine_basis(pa);
  RationalMatrix da;
  for (int k = 1; k <= d; ++k) {
    RationalVector diff(d);
    for (int c = 0; c < d; ++c) diff[c] = pa[basis[k]][c] - pa[basis[0]][c];
    da.push_back(diff);
  }
  // Row-vector convention: x - a0 = coeffs * da, image = b0 + coeffs * db.
  const RationalMatrix da_inv = exact::inverse(da);
  std::vector<RationalVector> coeffs;
  for (const auto& p : pa) {
    RationalVector c(d, Rational(0));
    for (int r = 0; r < d; ++r) {
      const Rational diff = p[r] - pa[basis[0]][r];
      if (sgn(diff) == 0) continue;
      for (int k = 0; k < d; ++k) c[k] += diff * da_inv[r][k];
    }
    coeffs.push_back(std::move(c));
  }

  const int m = static_cast<int>(pb.size());
  std::vector<int> tuple;
  std::vector<bool> used(m, false);
  auto try_map = [&]() {
    std::set<RationalVector> images;
    for (const auto& c : coeffs) {
      RationalVector img = pb[tuple[0]];
      for (int k = 0; k < d; ++k) {
        if (sgn(c[k]) == 0) continue;
        for (int r = 0; r < d; ++r) img[r] += c[k] * (pb[tuple[k + 1]][r] - pb[tuple[0]][r]);
      }
      if (!target.count(img)) return false;
      images.insert(std::move(img));
    }
    return static_cast<int>(images.size()) == m;
  };
  auto search = [&](auto&& self) -> bool {
    if (static_cast<int>(tuple.size()) == d + 1) return try_map();
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      tuple.push_back(j);
      const bool found = self(self);
      tuple.pop_back();
      used[j] = false;
      if (found) return true;
    }
    return false;
  };
  return search(search);
}

std::vector<AffineClass> classify_01(int d, int jobs) {
  if (d < 1 || d > 3) throw InputError("classify01 supports dimensions 1 to 3");
  const int n = 1 << d;
  std::vector<RationalVector> cube;
  for (int v = 0; v < n; ++v) {
    RationalVector p(d);
    for (int c = 0; c < d; ++c) p[c] = (v >> c) & 1;
    cube.push_back(std::move(p));
  }
  std::vector<AffineClass> classes;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<RationalVector> pts;
    for (int v = 0; v < n; ++v) {
      if (mask & (1u << v)) pts.push_back(cube[v]);
    }
    if (static_cast<int>(pts.size()) < d + 1) continue;
    PointSet s(d, std::move(pts));
    if (affine_dimension(s) != d) continue;
    auto it = std::find_if(classes.begin(), classes.end(), [&](const AffineClass& c) {
      return affinely_equivalent(c.representative, s);
    });
    if (it != classes.end()) {
      ++it->orbit_size;
    } else {
      classes.push_back(AffineClass{std::move(s), 1, 0, false, 0});
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < classes.size(); i = next++) {
      const ExactnessReport r = is_exact(classes[i].representative);
      classes[i].facet_count = static_cast<int>(r.facets.size());
      classes[i].exact = r.two_level;
      classes[i].theta_rank_upper_bound = r.theta_rank_upper_bound;
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(classes.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::stable_sort(classes.begin(), classes.end(), [](const AffineClass& x, const AffineClass& y) {
    if (x.representative.size() != y.representative.size())
      return x.representative.size() < y.representative.size();
    return x.facet_count < y.facet_count;
  });
  return classes;
}

DownClosedReport down_closed_analysis(const PointSet& s, const GeomOptions& options) {
  if (!is_zero_one(s)) throw InputError("down-closed analysis needs 0/1 points");
  DownClosedReport r;
  const std::set<RationalVector> members(s.points().begin(), s.points().end());
  r.down_closed = std::all_of(s.points().begin(), s.points().end(), [&](const RationalVector& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 1) {
        RationalVector q = p;
        q[i] = 0;
        if (!members.count(q)) return false;
      }
    }
    return true;
  });
  const ExactnessReport ex = is_exact(s, options);
  r.exact = ex.two_level;

  const int n = s.dim();
  std::set<std::pair<int, int>> edges;
  r.facet_form = true;
  for (const auto& f : ex.facets) {
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
      if (sgn(f.normal[i]) != 0) support.push_back(i);
    }
    const bool nonneg = support.size() == 1 && f.normal[support[0]] == 1 && f.offset == 0;
    const bool clique = f.offset == -1 && std::all_of(support.begin(), support.end(),
                                                      [&](int i) { return f.normal[i] == -1; });
    if (nonneg) continue;
    if (!clique) {
      r.facet_form = false;
      continue;
    }
    for (std::size_t x = 0; x < support.size(); ++x) {
      for (std::size_t y = x + 1; y < support.size(); ++y) edges.emplace(support[x], support[y]);
    }
  }
  if (r.down_closed && r.exact && r.facet_form) {
    Graph g(n, std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
    const CombBasis stable = enumerate_stable_sets(g, n, 1 << 20);
    std::set<RationalVector> generated;
    for (const auto& e : stable.elements) {
      RationalVector p(n, Rational(0));
      for (int v : e) p[v] = 1;
      generated.insert(std::move(p));
    }
    r.stable_sets_match = generated == members;
    r.perfect_graph = std::move(g);
  }
  return r;
}

nlohmann::json to_json(const FacetIneq& f) {
  nlohmann::json normal = nlohmann::json::array();
  for (const auto& x : f.normal) normal.push_back(to_string(x));
  nlohmann::json values = nlohmann::json::array();
  for (const auto& x : f.values) values.push_back(to_string(x));
  return {{"normal", normal}, {"offset", to_string(f.offset)}, {"values", values},
          {"valueCount", f.values.size()}};
}

nlohmann::json to_json(const ExactnessReport& r) {
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : r.facets) fs.push_back(to_json(f));
  nlohmann::json j = {{"isTwoLevel", r.two_level},
                      {"thetaRankUpperBound", r.theta_rank_upper_bound},
                      {"affineDimension", r.affine_dim},
                      {"facetCount", r.facets.size()},
                      {"facets", fs}};
  j["failingFacet"] = r.failing_facet ? nlohmann::json(to_json(r.facets[*r.failing_facet]))
                                      : nlohmann::json(nullptr);
  return j;
}

}  // namespace thetabody
