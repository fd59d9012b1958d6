#pragma once

#include "json.hpp"
#include <string>
#include <vector>

#include "thetabody/rational.hpp"

namespace thetabody {

// A finite set S of distinct exact-rational points in R^dim.
class PointSet {
 public:
  PointSet() = default;
  // Validates: dim >= 1, non-empty, every point has `dim` coordinates, no
  // duplicates. Throws InputError otherwise.
  PointSet(int dim, std::vector<RationalVector> points);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(points_.size()); }
  const RationalVector& operator[](int i) const { return points_.at(i); }
  const std::vector<RationalVector>& points() const { return points_; }

  std::vector<std::vector<double>> to_double() const;

 private:
  int dim_ = 0;
  std::vector<RationalVector> points_;
};

// {"dim": n, "points": [["0","1/2"], ...]}; integers are also accepted as JSON
// numbers on input, output always uses strings.
PointSet point_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PointSet& s);
PointSet read_point_set(const std::string& path);

// S x S' as a point set in R^{n + n'}.
PointSet product(const PointSet& a, const PointSet& b);

}  // namespace thetabody
