#include <cmath>

#include "corpus.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "thetabody/errors.hpp"
#include "thetabody/geomexact.hpp"
#include "thetabody/moment.hpp"

using namespace thetabody;

namespace {

std::set<std::pair<oracle::QVec, oracle::Q>> normalized(const std::vector<FacetIneq>& fs) {
  std::set<std::pair<oracle::QVec, oracle::Q>> out;
  for (const auto& f : fs) {
    oracle::QVec v = f.normal;
    v.push_back(f.offset);
    v = oracle::primitive(v);
    const oracle::Q off = v.back();
    v.pop_back();
    out.emplace(v, off);
  }
  return out;
}

std::vector<std::string> value_strings(const FacetIneq& f) {
  std::vector<std::string> out;
  for (const auto& v : f.values) out.push_back(to_string(v));
  return out;
}

PointSet subset(const PointSet& s, const std::vector<int>& idx) {
  std::vector<RationalVector> pts;
  for (int i : idx) pts.push_back(s[i]);
  return PointSet(s.dim(), pts);
}

}  // namespace

TEST_SUITE("facets") {
  TEST_CASE("small examples") {
    CHECK(facets(corpus::cube(2)).size() == 4);
    CHECK(facets(corpus::simplex(3)).size() == 4);
    const auto fs = facets(corpus::four_points());
    CHECK(fs.size() == 4);
    bool found = false;
    for (const auto& f : fs) {
      if (f.normal == RationalVector{1, 0} && f.offset == 0) {
        found = true;
        CHECK(value_strings(f) == std::vector<std::string>{"0", "1", "2"});
      }
    }
    CHECK(found);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(facets(PointSet(2, {{0, 0}})), InputError);
    CHECK_THROWS_AS(facets(corpus::cube(3), {7, 8}), ResourceError);
    CHECK_THROWS_AS(facets(corpus::cube(3), {64, 2}), ResourceError);
  }

  TEST_CASE("agree with hyperplane enumeration on full-dimensional sets") {
    std::vector<corpus::Named> sets = corpus::point_sets();
    sets.push_back({"cross4", corpus::cross_polytope(4)});
    sets.push_back({"cube4", corpus::cube(4)});
    sets.push_back({"random4d", corpus::random_points(4, 12, 5)});
    for (const auto& [name, s] : sets) {
      if (affine_dimension(s) != s.dim()) continue;
      CAPTURE(name);
      const auto fs = facets(s);
      const auto expected = oracle::facets_by_hyperplanes(s.points());
      CHECK(normalized(fs) == expected);
      CHECK(normalized(fs).size() == fs.size());
    }
  }

  TEST_CASE("soundness: valid, tight on a facet, primitive normals") {
    for (const auto& [name, s] : corpus::point_sets()) {
      if (s.size() < 2) continue;
      CAPTURE(name);
      const int d = affine_dimension(s);
      for (const auto& f : facets(s)) {
        CHECK(primitive_integer_vector(f.normal) == f.normal);
        CHECK(f.values.front() == 0);
        std::vector<oracle::QVec> tight;
        const RationalVector* base = nullptr;
        for (const auto& p : s.points()) {
          const Rational v = exact::dot(f.normal, p) - f.offset;
          CHECK(v >= 0);
          if (v == 0) {
            if (base == nullptr) base = &p;
            oracle::QVec diff(p.size());
            for (std::size_t c = 0; c < p.size(); ++c) diff[c] = p[c] - (*base)[c];
            tight.push_back(diff);
          }
        }
        CHECK(oracle::rank(tight) == d - 1);
      }
    }
  }

  TEST_CASE("degenerate sets are handled inside their affine hull") {
    const auto lifted = facets(corpus::lifted_square());
    CHECK(lifted.size() == 4);
    CHECK(affine_dimension(corpus::lifted_square()) == 2);
    const PointSet segment(3, {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}});
    const auto fs = facets(segment);
    CHECK(fs.size() == 2);
    for (const auto& f : fs) CHECK(f.values.size() == 3);
  }

  TEST_CASE("vertices") {
    CHECK(vertex_indices(corpus::cube(3), facets(corpus::cube(3))).size() == 8);
    const PointSet with_center(2, {{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1, 1}});
    CHECK(vertex_indices(with_center, facets(with_center)) == std::vector<int>{0, 1, 2, 3});
  }
}

TEST_SUITE("exactness") {
  TEST_CASE("cubes and cross-polytopes are two-level") {
    for (int d = 1; d <= 4; ++d) {
      CAPTURE(d);
      CHECK(is_exact(corpus::cube(d)).two_level);
      CHECK(theta_rank_upper_bound(corpus::cube(d)) == 1);
      CHECK(is_exact(corpus::cross_polytope(d)).two_level);
    }
  }

  TEST_CASE("the four point set is not") {
    const auto r = is_exact(corpus::four_points());
    CHECK_FALSE(r.two_level);
    REQUIRE(r.failing_facet.has_value());
    CHECK(r.facets[*r.failing_facet].values.size() >= 3);
    CHECK(r.theta_rank_upper_bound == 2);
  }

  TEST_CASE("theta-rank bounds") {
    CHECK(theta_rank_upper_bound(corpus::stable_set_vectors(cycle_graph(5))) == 2);
    CHECK(theta_rank_upper_bound(PointSet(1, {{0}, {3}})) == 1);
    CHECK(theta_rank_upper_bound(PointSet(1, {{0}, {1}, {2}, {3}})) == 3);
  }

  TEST_CASE("report invariant: two-level iff every facet has <= 2 values iff bound 1") {
    for (const auto& [name, s] : corpus::point_sets()) {
      CAPTURE(name);
      const auto r = is_exact(s);
      const bool all_two = std::all_of(r.facets.begin(), r.facets.end(),
                                       [](const FacetIneq& f) { return f.values.size() <= 2; });
      CHECK(r.two_level == all_two);
      CHECK(r.two_level == (r.theta_rank_upper_bound == 1));
      CHECK(r.failing_facet.has_value() == !r.two_level);
    }
  }

  TEST_CASE("products of exact sets are exact") {
    const std::vector<PointSet> exact_sets{corpus::zero_one(), corpus::cube(2), corpus::simplex(2),
                                           corpus::cross_polytope(2), corpus::simplex(3)};
    for (const auto& a : exact_sets)
      for (const auto& b : exact_sets) {
        if (a.size() * b.size() > 64) continue;
        CHECK(is_exact(product(a, b)).two_level);
      }
  }

  TEST_CASE("faces of exact sets are exact") {
    for (const auto& s : {corpus::cube(3), corpus::cross_polytope(3), corpus::simplex(3), corpus::cube(4)}) {
      for (const auto& f : facets(s)) {
        std::vector<int> idx;
        for (int i = 0; i < s.size(); ++i)
          if (exact::dot(f.normal, s[i]) == f.offset) idx.push_back(i);
        if (idx.size() < 2) continue;
        CHECK(is_exact(subset(s, idx)).two_level);
      }
    }
  }

  TEST_CASE("agrees with level-1 theta optima over facet normals") {
    for (const auto& [name, s] : corpus::point_sets()) {
      if (s.size() > 12) continue;
      CAPTURE(name);
      const auto report = is_exact(s);
      const auto ring = buchberger_moller(s, {1});
      const auto t = build_moment_template(ring, 1);
      bool all_match = true;
      for (const auto& f : report.facets) {
        // max of -normal . x over conv(S) is -offset.
        RationalVector c;
        for (const auto& x : f.normal) c.push_back(-x);
        const auto sol = solve(build_theta_sdp(t, linear_objective(ring, t, c)));
        if (sol.status == SdpStatus::Unbounded) {
          all_match = false;  // TH1 is not even bounded in this direction
          continue;
        }
        REQUIRE((sol.status == SdpStatus::Optimal || sol.status == SdpStatus::NearOptimal));
        if (std::abs(sol.objective + f.offset.get_d()) > 1e-4) all_match = false;
      }
      CHECK(all_match == report.two_level);
    }
  }

  TEST_CASE("facet and vertex bounds") {
    const auto cross = check_facet_vertex_bounds(corpus::cross_polytope(3));
    CHECK(cross.applicable);
    CHECK(cross.facet_count == 8);
    CHECK(cross.within_bounds);
    const auto cube = check_facet_vertex_bounds(corpus::cube(3));
    CHECK(cube.vertex_count == 8);
    CHECK(cube.within_bounds);
    const auto simplex = check_facet_vertex_bounds(corpus::simplex(3));
    CHECK(simplex.facet_count == 4);
    CHECK(simplex.vertex_count == 4);
    CHECK(simplex.within_bounds);
    CHECK_FALSE(check_facet_vertex_bounds(corpus::four_points()).applicable);
    for (const auto& [name, s] : corpus::point_sets()) {
      const auto b = check_facet_vertex_bounds(s);
      if (b.applicable) CHECK(b.within_bounds);
    }
  }
}

TEST_SUITE("0/1 classification") {
  TEST_CASE("dimensions 1 and 2") {
    const auto c1 = classify_01(1);
    CHECK(c1.size() == 1);
    const auto c2 = classify_01(2);
    CHECK(c2.size() == 2);
    for (const auto& c : c2) CHECK(c.exact);
  }

  TEST_CASE("dimension 3: eight classes, orbits cover every full-dimensional subset") {
    const auto classes = classify_01(3, 2);
    CHECK(classes.size() == 8);
    int covered = 0;
    for (const auto& c : classes) covered += c.orbit_size;
    int full = 0;
    for (unsigned mask = 0; mask < 256; ++mask) {
      std::vector<RationalVector> pts;
      for (int v = 0; v < 8; ++v)
        if (mask >> v & 1) pts.push_back({v & 1, v >> 1 & 1, v >> 2 & 1});
      if (pts.size() >= 4 && oracle::rank([&] {
            std::vector<oracle::QVec> d;
            for (const auto& p : pts) d.push_back({p[0] - pts[0][0], p[1] - pts[0][1], p[2] - pts[0][2]});
            return d;
          }()) == 3)
        ++full;
    }
    CHECK(covered == full);
    for (std::size_t i = 0; i < classes.size(); ++i)
      for (std::size_t j = i + 1; j < classes.size(); ++j)
        CHECK_FALSE(affinely_equivalent(classes[i].representative, classes[j].representative));
  }

  TEST_CASE("dimension 3 exact/non-exact baseline") {
    // (size, facets, exact) per class, frozen from the two-level test.
    std::vector<std::tuple<int, int, bool>> got;
    for (const auto& c : classify_01(3)) got.emplace_back(c.representative.size(), c.facet_count, c.exact);
    const std::vector<std::tuple<int, int, bool>> baseline{
        {4, 4, true}, {5, 5, true}, {5, 6, false}, {6, 5, true},
        {6, 7, false}, {6, 8, true}, {7, 7, false}, {8, 6, true}};
    CHECK(got == baseline);
  }

  TEST_CASE("job count does not change the result") {
    const auto a = classify_01(3, 1), b = classify_01(3, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].representative.points() == b[i].representative.points());
      CHECK(a[i].exact == b[i].exact);
    }
    CHECK_THROWS_AS(classify_01(4), InputError);
  }

  TEST_CASE("affine equivalence") {
    CHECK(affinely_equivalent(corpus::cube(2), corpus::lifted_square()));
    CHECK(affinely_equivalent(corpus::simplex(2), PointSet(2, {{1, 1}, {0, 1}, {1, 0}})));
    CHECK_FALSE(affinely_equivalent(corpus::cube(2), PointSet(2, {{0, 0}, {1, 0}, {0, 1}, {2, 2}})));
  }
}

TEST_SUITE("down-closed") {
  TEST_CASE("stable sets of P3 give back P3") {
    const Graph p3 = path_graph(3);
    const auto r = down_closed_analysis(corpus::stable_set_vectors(p3));
    CHECK(r.down_closed);
    CHECK(r.exact);
    CHECK(r.facet_form);
    REQUIRE(r.perfect_graph.has_value());
    CHECK(r.perfect_graph->edges() == p3.edges());
    CHECK(r.stable_sets_match);
  }

  TEST_CASE("perfect graphs are recovered from their stable-set polytopes") {
    for (const auto& g : {cycle_graph(4), complete_graph(4), complete_bipartite_graph(2, 3), cycle_graph(6)}) {
      const auto r = down_closed_analysis(corpus::stable_set_vectors(g));
      CHECK(r.exact);
      REQUIRE(r.perfect_graph.has_value());
      CHECK(r.perfect_graph->edges() == g.edges());
      CHECK(r.stable_sets_match);
    }
  }

  TEST_CASE("full cube: empty graph") {
    const auto r = down_closed_analysis(corpus::cube(3));
    REQUIRE(r.perfect_graph.has_value());
    CHECK(r.perfect_graph->num_vertices() == 3);
    CHECK(r.perfect_graph->num_edges() == 0);
  }

  TEST_CASE("cube minus its top vertex") {
    std::vector<RationalVector> pts = corpus::cube(3).points();
    pts.pop_back();
    const auto r = down_closed_analysis(PointSet(3, pts));
    CHECK(r.down_closed);
    CHECK_FALSE(r.exact);
    CHECK_FALSE(r.perfect_graph.has_value());
    const auto ex = is_exact(PointSet(3, pts));
    REQUIRE(ex.failing_facet.has_value());
    const auto& f = ex.facets[*ex.failing_facet];
    CHECK(f.normal == RationalVector{-1, -1, -1});
    CHECK(value_strings(f) == std::vector<std::string>{"0", "1", "2"});
  }

  TEST_CASE("C5 is down-closed but not exact; non 0/1 input is rejected") {
    const auto r = down_closed_analysis(corpus::stable_set_vectors(cycle_graph(5)));
    CHECK(r.down_closed);
    CHECK_FALSE(r.exact);
    CHECK_FALSE(down_closed_analysis(PointSet(2, {{1, 0}, {0, 1}})).down_closed);
    CHECK_THROWS_AS(down_closed_analysis(corpus::four_points()), InputError);
  }
}
