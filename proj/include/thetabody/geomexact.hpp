#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "thetabody/graph.hpp"
#include "thetabody/point_set.hpp"
#include "thetabody/rational.hpp"

namespace thetabody {

// normal . x - offset >= 0 on S, tight on a facet of conv(S).
struct FacetIneq {
  RationalVector normal;   // primitive integer vector
  Rational offset;
  RationalVector values;   // sorted distinct values of normal . s - offset over S
};

struct GeomOptions {
  int point_cap = 64;
  int max_dim = 8;
};

// Affine hull of S: dimension and an exact chart x -> (x - base)[pivots].
struct AffineChart {
  int dim = 0;
  RationalVector base;
  std::vector<int> pivots;
  RationalVector coordinates(const RationalVector& x) const;
};
AffineChart affine_chart(const PointSet& s);
int affine_dimension(const PointSet& s);

// Complete irredundant facet list of conv(S), computed inside the affine hull.
// Throws InputError when |S| < 2, ResourceError when a cap is exceeded.
std::vector<FacetIneq> facets(const PointSet& s, const GeomOptions& options = {});

// Indices of the points of S that are vertices of conv(S).
std::vector<int> vertex_indices(const PointSet& s, const std::vector<FacetIneq>& facets);

struct ExactnessReport {
  bool two_level = false;
  int theta_rank_upper_bound = 0;
  int affine_dim = 0;
  std::vector<FacetIneq> facets;
  std::optional<int> failing_facet;   // index into facets, >= 3 values
};

ExactnessReport is_exact(const PointSet& s, const GeomOptions& options = {});
int theta_rank_upper_bound(const PointSet& s, const GeomOptions& options = {});

struct BoundCheck {
  bool applicable = false;   // false when S is not exact
  int dim = 0;
  int facet_count = 0;
  int vertex_count = 0;
  bool within_bounds = false;
};
BoundCheck check_facet_vertex_bounds(const PointSet& s, const GeomOptions& options = {});

struct AffineClass {
  PointSet representative;
  int orbit_size = 0;   // number of 0/1 subsets in the class
  int facet_count = 0;
  bool exact = false;
  int theta_rank_upper_bound = 0;
};

// Full-dimensional 0/1 point sets in {0,1}^d, d in {1, 2, 3}, up to affine
// equivalence. Classes are sorted by (size, facet count); `jobs` threads run
// the exactness tests.
std::vector<AffineClass> classify_01(int d, int jobs = 1);

// True when some affine bijection of R^n maps a onto b.
bool affinely_equivalent(const PointSet& a, const PointSet& b);

struct DownClosedReport {
  bool down_closed = false;
  bool exact = false;
  bool facet_form = false;   // only x_i >= 0 and sum_{i in I} x_i <= 1 facets
  std::optional<Graph> perfect_graph;
  bool stable_sets_match = false;   // S equals the stable-set vectors of the graph
};

// Throws InputError on non-0/1 input.
DownClosedReport down_closed_analysis(const PointSet& s, const GeomOptions& options = {});

nlohmann::json to_json(const FacetIneq& f);
nlohmann::json to_json(const ExactnessReport& r);

}  // namespace thetabody
