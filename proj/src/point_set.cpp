#include "thetabody/point_set.hpp"

#include <fstream>
#include <set>

#include "thetabody/errors.hpp"

namespace thetabody {

PointSet::PointSet(int dim, std::vector<RationalVector> points)
    : dim_(dim), points_(std::move(points)) {
  if (dim_ < 1) throw InputError("point set dimension must be >= 1");
  if (points_.empty()) throw InputError("point set must be non-empty");
  std::set<RationalVector> seen;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (static_cast<int>(points_[i].size()) != dim_) {
      throw InputError("point " + std::to_string(i) + " has " +
                       std::to_string(points_[i].size()) + " coordinates, expected " +
                       std::to_string(dim_));
    }
    if (!seen.insert(points_[i]).second)
      throw InputError("duplicate point at index " + std::to_string(i));
  }
}

std::vector<std::vector<double>> PointSet::to_double() const {
  std::vector<std::vector<double>> out;
  out.reserve(points_.size());
  for (const auto& p : points_) {
    std::vector<double> q;
    q.reserve(p.size());
    for (const auto& x : p) q.push_back(x.get_d());
    out.push_back(std::move(q));
  }
  return out;
}

namespace {

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return parse_rational(std::to_string(v.get<long long>()));
  throw InputError("coordinates must be rational strings or integers, got " + v.dump());
}

}  // namespace

PointSet point_set_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("points"))
    throw InputError("point-set JSON needs \"dim\" and \"points\"");
  if (!j["dim"].is_number_integer()) throw InputError("\"dim\" must be an integer");
  const int dim = j["dim"].get<int>();
  if (!j["points"].is_array()) throw InputError("\"points\" must be an array");
  std::vector<RationalVector> pts;
  for (const auto& p : j["points"]) {
    if (!p.is_array()) throw InputError("each point must be an array");
    RationalVector v;
    for (const auto& x : p) v.push_back(rational_from_json(x));
    pts.push_back(std::move(v));
  }
  return PointSet(dim, std::move(pts));
}

nlohmann::json to_json(const PointSet& s) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : s.points()) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : p) row.push_back(to_string(x));
    pts.push_back(std::move(row));
  }
  return {{"dim", s.dim()}, {"points", std::move(pts)}};
}

PointSet read_point_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open point-set file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
  return point_set_from_json(j);
}

PointSet product(const PointSet& a, const PointSet& b) {
  std::vector<RationalVector> pts;
  for (const auto& p : a.points()) {
    for (const auto& q : b.points()) {
      RationalVector r = p;
      r.insert(r.end(), q.begin(), q.end());
      pts.push_back(std::move(r));
    }
  }
  return PointSet(a.dim() + b.dim(), std::move(pts));
}

}  // namespace thetabody
