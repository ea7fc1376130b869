#include <doctest.h>

#include "fixtures.hpp"
#include "jcsp/consistency.hpp"
#include "jcsp/generate.hpp"
#include "jcsp/solver.hpp"

using namespace jcsp;
using fx::rel;

TEST_SUITE("consistency") {
  TEST_CASE("small_subsets orders by size then lexicographically") {
    CHECK(small_subsets(3, 2) == std::vector<Scope>{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}});
    CHECK(small_subsets(4, 4).size() == 15);
    CHECK(small_subsets(2, 5).size() == 3);
  }

  TEST_CASE("an odd cycle of equalities and a disequality empties at k = 3") {
    const auto inst = fx::over(fx::maj2(), 3, {{{0, 1}, fx::eq2()}, {{1, 2}, fx::eq2()}, {{0, 2}, fx::neq2()}});
    const auto mi = k_minimalize(inst, 3);
    CHECK(mi.empty);
    REQUIRE(mi.certificate.has_value());
    CHECK_FALSE(fx::all_solutions(inst).size());
  }

  TEST_CASE("pairwise consistency alone does not see the contradiction") {
    const auto inst = fx::over(fx::maj2(), 3, {{{0, 1}, fx::eq2()}, {{1, 2}, fx::eq2()}, {{0, 2}, fx::neq2()}});
    CHECK_FALSE(k_minimalize(inst, 2).empty);
  }

  TEST_CASE("a single equality is already minimal") {
    const auto inst = fx::over(fx::maj2(), 2, {{{0, 1}, fx::eq2()}});
    const auto mi = k_minimalize(inst, 2);
    REQUIRE_FALSE(mi.empty);
    CHECK(mi.base.constraints[0].relation == fx::eq2());
    CHECK(mi.system.at({0, 1}) == fx::eq2());
    CHECK(mi.system.at({0}) == Relation::full({2}));
  }

  TEST_CASE("unary projections shrink at k = 1") {
    const auto inst = fx::over(fx::maj2(), 2, {{{0, 1}, rel({2, 2}, {{0, 0}})}});
    const auto mi = k_minimalize(inst, 1);
    REQUIRE_FALSE(mi.empty);
    CHECK(mi.system.at({0}) == rel({2}, {{0}}));
    CHECK(mi.system.at({1}) == rel({2}, {{0}}));
  }

  TEST_CASE("make_subdirect re-indexes shrunken domains") {
    const auto m = fx::maj2();
    const auto inst = fx::over(m, 2, {{{0, 1}, rel({2, 2}, {{0, 1}, {1, 0}, {1, 1}})}, {{0}, rel({2}, {{0}})}});
    const auto mi = make_subdirect(k_minimalize(inst, 3));
    REQUIRE_FALSE(mi.empty);
    CHECK(mi.base.domains[0].size() == 1);
    CHECK(mi.base.domains[1].size() == 1);
    CHECK(mi.origin[0] == std::vector<Element>{0});
    CHECK(mi.origin[1] == std::vector<Element>{1});
  }

  TEST_CASE("is_k_minimal") {
    const auto m = fx::maj2();
    // {0, 2} is not covered by any scope
    CHECK_FALSE(is_k_minimal(fx::over(m, 3, {{{0, 1}, fx::eq2()}, {{1, 2}, fx::eq2()}}), 2));
    // the projections of the two constraints onto {1} disagree
    CHECK_FALSE(is_k_minimal(fx::over(m, 2, {{{0, 1}, rel({2, 2}, {{0, 0}})}, {{1}, Relation::full({2})}}), 1));
    const auto inst = fx::over(m, 3, {{{0, 1}, fx::eq2()}, {{1, 2}, fx::neq2()}});
    CHECK(is_k_minimal(to_instance(k_minimalize(inst, 2)), 2));
    CHECK(is_k_minimal(collapse(k_minimalize(inst, 3)), 3));
  }

  TEST_CASE("minimalization preserves the solution set") {
    Rng rng(21);
    for (int trial = 0; trial < 120; ++trial) {
      GeneratorConfig cfg;
      cfg.num_vars = rng.between(2, 5);
      cfg.num_constraints = rng.between(1, 5);
      cfg.max_arity = std::min<std::size_t>(3, cfg.num_vars);
      const Algebra a = gen_cd3_algebra(rng.between(2, 3), rng);
      const std::vector<Algebra> domains(cfg.num_vars, a);
      const auto inst = gen_instance(domains, cfg, rng);
      const std::size_t k = rng.between(1, 3);
      const auto mi = k_minimalize(inst, k);
      const auto expected = fx::all_solutions(inst);
      if (mi.empty) {
        CHECK(expected.empty());
        continue;
      }
      CHECK(fx::all_solutions(to_instance(mi)) == expected);
      CHECK(is_k_minimal(to_instance(mi), k));
    }
  }
}
