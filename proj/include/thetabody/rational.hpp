#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thetabody {

// Arbitrary precision rational, always kept canonical (den > 0, reduced).
using Rational = mpq_class;
using Integer = mpz_class;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

// Sparse vector: (index, value) pairs sorted by index, no explicit zeros.
using SparseRationalVector = std::vector<std::pair<int, Rational>>;

// Parses "p", "-p", "p/q". Throws InputError on anything else or q == 0.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);

SparseRationalVector to_sparse(const RationalVector& dense);
RationalVector to_dense(const SparseRationalVector& sparse, int size);

// Scales v by a positive rational so every entry is an integer and the gcd of
// the entries is one. Zero vectors are returned unchanged.
RationalVector primitive_integer_vector(const RationalVector& v);

// Exact linear algebra over Q.
namespace exact {

struct EchelonForm {
  RationalMatrix rows;       // reduced row echelon form, zero rows dropped
  std::vector<int> pivots;   // pivot column of each row
};

EchelonForm rref(RationalMatrix m);
int rank(const RationalMatrix& m);
// Basis of {x : m x = 0}, one vector per free column.
RationalMatrix nullspace(const RationalMatrix& m, int cols);
// Throws InputError when m is singular.
RationalMatrix inverse(const RationalMatrix& m);
RationalVector multiply(const RationalMatrix& m, const RationalVector& v);
Rational dot(const RationalVector& a, const RationalVector& b);

}  // namespace exact
}  // namespace thetabody
