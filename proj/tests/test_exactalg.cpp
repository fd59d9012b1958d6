#include <set>

#include "corpus.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "thetabody/errors.hpp"
#include "thetabody/quotient_ring.hpp"

using namespace thetabody;

namespace {

Polynomial poly(int dim, std::initializer_list<std::pair<const char*, Rational>> terms) {
  Polynomial p(dim);
  for (const auto& [m, c] : terms) p.add_term(parse_monomial(m, dim), c);
  return p;
}

std::vector<std::string> basis_strings(const QuotientRing& r) {
  std::vector<std::string> out;
  for (const auto& m : r.basis()) out.push_back(m.to_string());
  return out;
}

Polynomial from_coords(const QuotientRing& r, const SparseRationalVector& v) {
  Polynomial p(r.dim());
  for (const auto& [l, c] : v) p.add_term(r.basis()[l], c);
  return p;
}

// f - NF(f) vanishes on S, checked by direct evaluation.
void check_normal_form(const QuotientRing& r, const Polynomial& f) {
  const Polynomial nf = from_coords(r, r.normal_form(f));
  for (const auto& s : r.points().points()) CHECK(f.evaluate(s) == nf.evaluate(s));
}

}  // namespace

TEST_SUITE("rational") {
  TEST_CASE("parse keeps values canonical") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(to_string(parse_rational("4/2")) == "2");
    const Rational r = parse_rational("10/-4");
    CHECK(r.get_den() > 0);
    CHECK(gcd(mpz_class(abs(r.get_num())), r.get_den()) == 1);
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
    CHECK_THROWS_AS(parse_rational(""), InputError);
    CHECK_THROWS_AS(parse_rational("1.5"), InputError);
  }

  TEST_CASE("primitive integer vector") {
    const auto v = primitive_integer_vector({Rational(1, 2), Rational(-3, 4), Rational(0)});
    CHECK(v == RationalVector{2, -3, 0});
  }

  TEST_CASE("exact linear algebra") {
    const RationalMatrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
    CHECK(exact::rank(m) == 2);
    for (const auto& v : exact::nullspace(m, 3)) {
      for (const auto& row : m) CHECK(exact::dot(row, v) == 0);
    }
    const RationalMatrix a{{2, 1}, {1, 1}};
    const auto inv = exact::inverse(a);
    CHECK(inv == RationalMatrix{{1, -1}, {-1, 2}});
    CHECK_THROWS_AS(exact::inverse(m), InputError);
  }
}

TEST_SUITE("monomial") {
  TEST_CASE("degrevlex with x1 > x2 > x3") {
    const int n = 3;
    auto m = [&](const char* s) { return parse_monomial(s, n); };
    CHECK(degrevlex_compare(m("x1"), m("x2")) > 0);
    CHECK(degrevlex_compare(m("x2"), m("x3")) > 0);
    CHECK(degrevlex_compare(m("x1^2"), m("x1*x2")) > 0);
    CHECK(degrevlex_compare(m("x1*x2"), m("x2^2")) > 0);
    CHECK(degrevlex_compare(m("x2^2"), m("x1*x3")) > 0);  // reverse lex on the last variable
    CHECK(degrevlex_compare(m("x3^2"), m("x1")) > 0);     // graded first
    CHECK(degrevlex_compare(m("x1*x2"), m("x1*x2")) == 0);
  }

  TEST_CASE("basis order lists 1, x1, x2, x1^2, x1*x2, x2^2") {
    std::vector<std::string> got;
    for (const auto& m : monomials_up_to(2, 2)) got.push_back(m.to_string());
    CHECK(got == std::vector<std::string>{"1", "x1", "x2", "x1^2", "x1*x2", "x2^2"});
  }

  TEST_CASE("parse and print round trip") {
    for (const char* s : {"1", "x1", "x1^2*x3", "x2*x3^4"}) CHECK(parse_monomial(s, 3).to_string() == s);
    CHECK_THROWS_AS(parse_monomial("x4", 3), InputError);
    CHECK_THROWS_AS(parse_monomial("y1", 3), InputError);
    CHECK(parse_monomial("x1*x1", 2).to_string() == "x1^2");
  }

  TEST_CASE("lcm is the union of supports") {
    const auto a = parse_monomial("x1*x2", 3), b = parse_monomial("x2*x3", 3);
    CHECK(a.lcm(b).to_string() == "x1*x2*x3");
    CHECK(parse_monomial("x1", 3).divides(a));
    CHECK_FALSE(parse_monomial("x3", 3).divides(a));
  }
}

TEST_SUITE("buchberger-moller") {
  TEST_CASE("two points on a line") {
    const auto r = buchberger_moller(corpus::zero_one());
    CHECK(basis_strings(r) == std::vector<std::string>{"1", "x1"});
    CHECK(r.normal_form(poly(1, {{"x1^2", 1}})) == SparseRationalVector{{1, Rational(1)}});
    CHECK(r.evaluate_basis(0) == RationalVector{1, 0});
    CHECK(r.evaluate_basis(1) == RationalVector{1, 1});
    CHECK_THROWS(r.evaluate_basis(2));
  }

  TEST_CASE("three points of the standard simplex") {
    const auto r = buchberger_moller(corpus::three_points());
    CHECK(basis_strings(r) == std::vector<std::string>{"1", "x1", "x2"});
    CHECK(r.normal_form(poly(2, {{"x1^2", 1}})) == SparseRationalVector{{1, Rational(1)}});
    CHECK(r.normal_form(poly(2, {{"x2^2", 1}})) == SparseRationalVector{{2, Rational(1)}});
    CHECK(r.normal_form(poly(2, {{"x1*x2", 1}})).empty());
    CHECK(r.normal_form(poly(2, {{"x1^2*x2^2", 1}})).empty());
    // Rank oracle: 6 quadratic monomials, rank 3 evaluation matrix.
    CHECK(oracle::quadratic_vandermonde_rank(corpus::three_points()) == r.size());
  }

  TEST_CASE("evaluation row of (2,2) in the four point set") {
    const auto r = buchberger_moller(corpus::four_points());
    const int idx = 3;
    CHECK(r.points()[idx] == RationalVector{2, 2});
    const auto& xi = r.evaluate_basis(idx);
    CHECK(xi[r.index_of(parse_monomial("1", 2))] == 1);
    CHECK(xi[r.index_of(parse_monomial("x1", 2))] == 2);
    CHECK(xi[r.index_of(parse_monomial("x2", 2))] == 2);
  }

  TEST_CASE("stable-set vectors give the stable-set monomials") {
    for (const auto& g : {cycle_graph(5), path_graph(4), complete_graph(4), petersen_graph()}) {
      const auto s = corpus::stable_set_vectors(g);
      const auto r = buchberger_moller(s);
      std::set<Monomial> expected;
      const auto comb = enumerate_stable_sets(g, g.num_vertices());
      for (int i = 0; i < static_cast<int>(comb.elements.size()); ++i) expected.insert(comb.monomial(i));
      const std::set<Monomial> got(r.basis().begin(), r.basis().end());
      CHECK(got == expected);
      for (const auto& [u, v] : g.edges()) {
        Polynomial p(g.num_vertices());
        std::vector<int> e(g.num_vertices(), 0);
        e[u] = e[v] = 1;
        p.add_term(Monomial(e), 1);
        CHECK(r.normal_form(p).empty());
      }
    }
  }

  TEST_CASE("invariants over the corpus") {
    for (const auto& [name, s] : corpus::point_sets()) {
      CAPTURE(name);
      const auto r = buchberger_moller(s, {2});
      CHECK(r.size() == s.size());
      CHECK(r.basis().front() == Monomial::one(s.dim()));
      for (std::size_t i = 1; i < r.basis().size(); ++i)
        CHECK(basis_order_less(r.basis()[i - 1], r.basis()[i]));
      // Order ideal.
      for (const auto& b : r.basis()) {
        for (int v = 0; v < s.dim(); ++v) {
          if (b.exponent(v) == 0) continue;
          std::vector<int> e = b.exponents();
          --e[v];
          CHECK(r.index_of(Monomial(e)) >= 0);
        }
      }
      CHECK(oracle::rank(r.eval_matrix()) == s.size());
      // Normal forms of every monomial up to degree 4 vanish-check and are idempotent.
      for (const auto& m : monomials_up_to(s.dim(), s.dim() <= 3 ? 4 : 2)) {
        Polynomial f(s.dim());
        f.add_term(m, Rational(3, 7));
        f.add_term(Monomial::one(s.dim()), -1);
        check_normal_form(r, f);
        const auto nf = r.normal_form(f);
        CHECK(r.normal_form(from_coords(r, nf)) == nf);
      }
      // Cached products equal fresh normal forms.
      const int top = r.count_up_to_degree(2);
      for (int i = 0; i < top; ++i) {
        for (int j = i; j < top; ++j) {
          Polynomial f(s.dim());
          f.add_term(r.basis()[i] * r.basis()[j], 1);
          CHECK(r.product(i, j) == r.normal_form(f));
        }
      }
    }
  }

  TEST_CASE("products outside the table are refused") {
    const auto r = buchberger_moller(corpus::parabola_points(), {1});
    CHECK_THROWS_AS(r.product(0, r.size() - 1), ResourceError);
  }
}

TEST_SUITE("point set") {
  TEST_CASE("validation") {
    CHECK_THROWS_AS(PointSet(2, {{0, 0}, {0, 0}}), InputError);
    CHECK_THROWS_AS(PointSet(2, {{0, 0}, {1}}), InputError);
    CHECK_THROWS_AS(PointSet(0, {{}}), InputError);
    CHECK_THROWS_AS(PointSet(2, {}), InputError);
  }

  TEST_CASE("json round trip is exact") {
    const auto s = corpus::parabola_points();
    const auto j = to_json(s);
    const auto back = point_set_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.points() == s.points());
    CHECK(j["points"][1][1] == "1");
    CHECK(j["points"][2][1] == "1/4");
    const auto ints = point_set_from_json(nlohmann::json::parse(R"({"dim":1,"points":[[0],[3]]})"));
    CHECK(ints[1][0] == 3);
    CHECK_THROWS_AS(point_set_from_json(nlohmann::json::parse(R"({"dim":1,"points":[["x"]]})")), InputError);
  }

  TEST_CASE("product of point sets") {
    const auto p = product(corpus::zero_one(), corpus::three_points());
    CHECK(p.dim() == 3);
    CHECK(p.size() == 6);
  }
}
