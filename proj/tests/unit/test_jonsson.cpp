#include <algorithm>

#include <doctest.h>

#include "fixtures.hpp"
#include "jcsp/consistency.hpp"
#include "jcsp/generate.hpp"
#include "jcsp/jonsson.hpp"

using namespace jcsp;
using fx::rel;

namespace {

bool restriction_in(const Tuple& t, const Scope& scope, const Scope& sub, const Relation& target) {
  Tuple r;
  for (auto v : sub) r.push_back(t[std::find(scope.begin(), scope.end(), v) - scope.begin()]);
  return target.contains(r);
}

}  // namespace

TEST_SUITE("jonsson") {
  TEST_CASE("multiplication") {
    CHECK(mult(fx::maj2(), 0, 1) == 1);
    CHECK(mult(fx::maj2(), 1, 0) == 0);
    CHECK(mult(fx::dd2(), 0, 1) == 0);
    CHECK(mult(fx::dd2(), 1, 0) == 1);
  }

  TEST_CASE("ideals of the two-element algebras") {
    CHECK(jonsson_ideal(fx::maj2(), {0}) == ElementSet{0});
    CHECK(jonsson_ideal(fx::dd2(), {0}) == ElementSet{0, 1});
    CHECK(is_jonsson_ideal(fx::maj2(), {1}));
    CHECK_FALSE(is_jonsson_trivial(fx::maj2()));
    CHECK(is_jonsson_trivial(fx::dd2()));
    REQUIRE(some_proper_ideal(fx::maj2()).has_value());
    CHECK(*some_proper_ideal(fx::maj2()) == ElementSet{0});
    CHECK_FALSE(some_proper_ideal(fx::dd2()).has_value());
  }

  TEST_CASE("ideals are closed under left multiplication") {
    Rng rng(4);
    for (int trial = 0; trial < 60; ++trial) {
      const Algebra a = gen_cd3_algebra(rng.between(2, 4), rng);
      const Element g = static_cast<Element>(rng.below(a.size()));
      const auto j = jonsson_ideal(a, {g});
      CHECK(std::binary_search(j.begin(), j.end(), g));
      CHECK(is_subuniverse(a, j));
      for (Element u = 0; u < a.size(); ++u)
        for (auto x : j) CHECK(std::binary_search(j.begin(), j.end(), mult(a, u, x)));
    }
  }

  TEST_CASE("distance profile") {
    const auto s = rel({3, 2}, {{0, 0}, {1, 0}, {1, 1}, {2, 1}});
    const auto d = distance_profile(s);
    CHECK(d.distance(0, 0) == 0u);
    CHECK(d.distance(0, 1) == 1u);
    CHECK(d.distance(0, 2) == 2u);
    CHECK(d.connected());
    CHECK(d.layers()[1] == rel({3, 3}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}}));
    const auto split = distance_profile(rel({2, 2}, {{0, 0}, {1, 1}}));
    CHECK_FALSE(split.connected());
    CHECK_FALSE(split.distance(0, 1).has_value());
    CHECK(fx::error_kind([] { distance_profile(rel({2, 2}, {{0, 0}})); }) == ErrorKind::NotSubdirect);
  }

  TEST_CASE("classify_binary") {
    const auto d = fx::dd2();
    CHECK(classify_binary(fx::full2(), d, d).kind == BinaryShape::Kind::Full);
    const auto diag = classify_binary(fx::eq2(), d, d);
    CHECK(diag.kind == BinaryShape::Kind::HomGraph);
    CHECK(diag.map == std::vector<Element>{0, 1});
  }

  TEST_CASE("classify_binary on every binary relation over DD2") {
    const auto d = fx::dd2();
    const std::vector<Algebra> dd{d, d};
    int classified = 0;
    for (unsigned mask = 0; mask < 16; ++mask) {
      std::vector<Tuple> ts;
      for (Element i = 0; i < 4; ++i)
        if (mask >> i & 1u) ts.push_back({static_cast<Element>(i / 2), static_cast<Element>(i % 2)});
      const Relation s({2, 2}, ts);
      if (!is_subdirect(s, dd) || !is_invariant(s, dd)) continue;
      ++classified;
      const auto shape = classify_binary(s, d, d);
      if (shape.kind == BinaryShape::Kind::Full) {
        CHECK(s.size() == 4);
        continue;
      }
      std::vector<Tuple> graph;
      for (Element b = 0; b < 2; ++b) graph.push_back({shape.map[b], b});
      CHECK(Relation({2, 2}, graph) == s);
    }
    // diagonal, anti-diagonal, full
    CHECK(classified == 3);
  }

  TEST_CASE("Λ_J keeps the tuples that start inside the ideal") {
    const auto m = fx::maj2();
    const auto inst = fx::over(m, 3, {{{0, 1}, fx::eq2()}, {{1, 2}, fx::full2()}, {{0, 2}, fx::full2()}});
    const auto mi = k_minimalize(inst, 3);
    REQUIRE_FALSE(mi.empty);
    const auto red = build_lambda_J(mi.system, mi.base.domains, 0, {0});
    const auto& all = red.lambda.at({0, 1, 2});
    CHECK(all == rel({2, 2, 2}, {{0, 0, 0}, {0, 0, 1}}));
    const std::vector<std::size_t> yz{1, 2};
    CHECK(project(all, yz) == rel({2, 2}, {{0, 0}, {0, 1}}));
  }

  TEST_CASE("R_J against a direct restriction check") {
    Rng rng(17);
    int reduced = 0;
    for (int trial = 0; trial < 150 && reduced < 40; ++trial) {
      const Algebra a = gen_cd3_algebra(2, rng);
      if (!some_proper_ideal(a)) continue;
      GeneratorConfig cfg;
      cfg.num_vars = 4;
      cfg.num_constraints = rng.between(1, 3);
      cfg.min_arity = 4;
      cfg.max_arity = 4;
      const std::vector<Algebra> domains(4, a);
      const auto raw = k_minimalize(gen_instance(domains, cfg, rng), 3);
      if (raw.empty) continue;
      const auto mi = make_subdirect(raw);
      const std::size_t coord = rng.below(4);
      const auto ideal = some_proper_ideal(mi.base.domains[coord]);
      if (!ideal) continue;
      const auto red = build_lambda_J(mi.system, mi.base.domains, coord, *ideal);
      for (const auto& [scope, lam] : red.lambda) {
        if (std::find(scope.begin(), scope.end(), coord) == scope.end()) continue;
        const std::size_t pos = std::find(scope.begin(), scope.end(), coord) - scope.begin();
        std::vector<Tuple> expected;
        for (const auto& t : mi.system.at(scope))
          if (std::binary_search(ideal->begin(), ideal->end(), t[pos])) expected.push_back(t);
        CHECK(lam == Relation(lam.sizes(), expected));
      }
      const Scope full{0, 1, 2, 3};
      for (const auto& c : mi.base.constraints) {
        const auto rj = reduce_constraint_RJ(c.relation, c.scope, red);
        std::vector<Tuple> expected;
        for (const auto& t : c.relation) {
          bool keep = true;
          for (const auto& [scope, lam] : red.lambda) keep = keep && restriction_in(t, full, scope, lam);
          if (keep) expected.push_back(t);
        }
        CHECK(rj == Relation(c.relation.sizes(), expected));
        CHECK_FALSE(rj.empty());
      }
      ++reduced;
    }
    CHECK(reduced >= 20);
  }
}
