#include <algorithm>

#include <doctest.h>

#include "fixtures.hpp"
#include "jcsp/algebra.hpp"
#include "jcsp/generate.hpp"

using namespace jcsp;
using fx::pair;

TEST_SUITE("algebra") {
  TEST_CASE("operation tables are validated") {
    CHECK_THROWS_AS(OperationTable(3, 2, {0, 1}), Error);
    CHECK_THROWS_AS(OperationTable(1, 2, {0, 2}), Error);
    const OperationTable t(2, 2, {0, 1, 1, 0});
    CHECK(t(std::vector<Element>{1, 0}) == 1);
    CHECK(t(std::vector<Element>{1, 1}) == 0);
  }

  TEST_CASE("row-major order puts the first argument most significant") {
    const auto f = OperationTable::from_function(3, 3, [](std::span<const Element> a) { return a[0]; });
    CHECK(f.table()[9] == 1);
    CHECK(f(1, 0, 0) == 1);
    CHECK(f(0, 2, 2) == 0);
  }

  TEST_CASE("is_idempotent") {
    const auto maj = fx::maj2().p1();
    const auto zero = OperationTable::from_function(3, 2, [](std::span<const Element>) { return Element{0}; });
    const auto third = fx::maj2().p2();
    CHECK(is_idempotent(maj));
    CHECK_FALSE(is_idempotent(zero));
    CHECK(is_idempotent(third));
  }

  TEST_CASE("check_cd3 on the named two-element algebras") {
    CHECK(check_cd3(fx::maj2()).ok);
    CHECK(check_cd3(fx::dd2()).ok);
    const auto first = fx::ternary([](Element x, Element, Element) { return x; },
                                   [](Element x, Element, Element) { return x; });
    const auto report = check_cd3(first);
    REQUIRE_FALSE(report.ok);
    REQUIRE(report.failures.size() == 1);
    CHECK(report.failures[0].identity == "p2(x,x,y)=y");
    CHECK(report.failures[0].witness == std::array<Element, 3>{0, 0, 1});
  }

  TEST_CASE("check_cd3 flags a non-idempotent extra operation") {
    const auto zero = OperationTable::from_function(2, 2, [](std::span<const Element>) { return Element{0}; });
    const Algebra a(2, {{"p1", fx::maj2().p1()}, {"p2", fx::maj2().p2()}, {"z", zero}}, {"p1", "p2"});
    const auto report = check_cd3(a);
    REQUIRE_FALSE(report.ok);
    CHECK(report.failures[0].identity == "idempotent(z)");
  }

  TEST_CASE("catalogue algebras match their formulas") {
    CHECK(maj2() == fx::maj2());
    CHECK(dd2() == fx::dd2());
  }

  TEST_CASE("algebra construction rejects malformed signatures") {
    const auto binary = OperationTable::from_function(2, 2, [](std::span<const Element> a) { return a[0]; });
    CHECK_THROWS_AS(Algebra(2, {{"p1", binary}, {"p2", fx::maj2().p2()}}, {"p1", "p2"}), Error);
    CHECK_THROWS_AS(Algebra(2, {{"p1", fx::maj2().p1()}}, {"p1", "p2"}), Error);
    CHECK_THROWS_AS(Algebra(2, {{"p1", fx::maj2().p1()}, {"p1", fx::maj2().p2()}}, {"p1", "p1"}), Error);
  }

  TEST_CASE("subuniverse_closure") {
    const auto m = fx::maj2();
    CHECK(subuniverse_closure(m, {0}) == ElementSet{0});
    CHECK(subuniverse_closure(m, {}).empty());
    const auto m2 = product(m, m);
    const ElementSet anti{pair(0, 1), pair(1, 0)};
    CHECK(subuniverse_closure(m2, anti) == anti);
    CHECK(is_subuniverse(m2, anti));
    CHECK(subuniverse_closure(m2, {pair(0, 0), pair(1, 1)}) == ElementSet{pair(0, 0), pair(1, 1)});
  }

  TEST_CASE("closure is extensive, idempotent and monotone") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
      const Algebra a = gen_cd3_algebra(rng.between(2, 4), rng);
      const Element x = static_cast<Element>(rng.below(a.size()));
      const Element y = static_cast<Element>(rng.below(a.size()));
      const auto small = subuniverse_closure(a, make_element_set({x}));
      const auto big = subuniverse_closure(a, make_element_set({x, y}));
      CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
      CHECK(subuniverse_closure(a, big) == big);
      CHECK(std::binary_search(small.begin(), small.end(), x));
    }
  }

  TEST_CASE("restrict") {
    const auto m = fx::maj2();
    CHECK(restrict(m, {0}).algebra.size() == 1);
    const auto whole = restrict(m, {0, 1});
    CHECK(whole.algebra == m);
    CHECK(whole.embedding == std::vector<Element>{0, 1});
    const auto diag = restrict(product(m, m), {pair(0, 0), pair(1, 1)});
    CHECK(diag.algebra == m);
    CHECK(fx::error_kind([&] { restrict(m, {}); }) == ErrorKind::EmptySubuniverse);
    // every subset of MAJ2² is closed; DD2² is not
    const auto d2 = product(fx::dd2(), fx::dd2());
    CHECK(fx::error_kind([&] { restrict(d2, {pair(0, 0), pair(0, 1), pair(1, 0)}); }) == ErrorKind::NotASubuniverse);
  }

  TEST_CASE("principal congruences") {
    const auto m = fx::maj2();
    CHECK(principal_congruence(m, 0, 0).is_identity());
    CHECK(principal_congruence(m, 0, 1).is_total());
    const auto m2 = product(m, m);
    const auto cg = principal_congruence(m2, pair(0, 0), pair(0, 1));
    CHECK(cg.blocks() == std::vector<ElementSet>{{pair(0, 0), pair(0, 1)}, {pair(1, 0), pair(1, 1)}});
  }

  TEST_CASE("congruence labels are canonical") {
    const Congruence c({7, 3, 7, 5});
    CHECK(c.labels() == std::vector<std::size_t>{0, 1, 0, 2});
    CHECK(c.block_count() == 3);
    CHECK(c == Congruence({0, 1, 0, 2}));
    CHECK(Congruence::identity(4).refines(c));
    CHECK(c.refines(Congruence::total(4)));
    CHECK_FALSE(c.refines(Congruence::identity(4)));
  }

  TEST_CASE("maximal proper congruence") {
    const auto m = fx::maj2();
    CHECK_FALSE(maximal_proper_congruence(m).has_value());
    CHECK_FALSE(maximal_proper_congruence(restrict(m, {0}).algebra).has_value());
    const auto theta = maximal_proper_congruence(product(m, m));
    REQUIRE(theta.has_value());
    CHECK(*theta == Congruence({0, 0, 1, 1}));
  }

  TEST_CASE("quotients") {
    const auto m = fx::maj2();
    const auto q0 = quotient(m, Congruence::identity(2));
    CHECK(q0.algebra == m);
    CHECK(q0.projection == std::vector<Element>{0, 1});
    const auto q1 = quotient(m, Congruence::total(2));
    CHECK(q1.algebra.size() == 1);
    const auto m2 = product(m, m);
    const auto qk = quotient(m2, Congruence({0, 0, 1, 1}));
    CHECK(qk.algebra == m);
    CHECK(check_cd3(qk.algebra).ok);
    CHECK(fx::error_kind([&] { quotient(m2, Congruence({0, 1, 1, 0})); }) == ErrorKind::NotACongruence);
  }

  TEST_CASE("quotients of random algebras satisfy the identities") {
    Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
      const Algebra a = gen_cd3_algebra(rng.between(2, 4), rng);
      if (auto theta = maximal_proper_congruence(a)) CHECK(check_cd3(quotient(a, *theta).algebra).ok);
    }
  }

  TEST_CASE("simplicity") {
    const auto m = fx::maj2();
    CHECK(is_simple(m));
    CHECK(is_simple(fx::dd2()));
    CHECK_FALSE(is_simple(product(m, m)));
    CHECK(simplicity(restrict(m, {1}).algebra) == Simplicity::Trivial);
    CHECK_FALSE(is_simple(restrict(m, {1}).algebra));
  }

  TEST_CASE("products index pairs as a * |B| + b") {
    const auto p = product(fx::maj2(), fx::dd2());
    CHECK(p.size() == 4);
    // p1 = (majority, first projection) coordinatewise
    CHECK(p.p1()(pair(0, 1), pair(1, 0), pair(1, 0)) == pair(1, 1));
    CHECK(same_signature(p, fx::maj2()));
  }
}
