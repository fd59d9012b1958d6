#pragma once

#include <stdexcept>
#include <string>

namespace thetabody {

// Malformed input: bad files, dimension mismatches, duplicate points,
// negative weights, out-of-range indices.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A configured size cap (enumeration, facet, k_max) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// The SDP layer could not produce a usable answer.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace thetabody
