#include <doctest.h>

#include "fixtures.hpp"
#include "jcsp/algebra.hpp"
#include "jcsp/generate.hpp"

using namespace jcsp;
using fx::rel;

namespace {

// Applies every operation to every choice of argument tuples, independently
// of the library's invariance check.
bool invariant_oracle(const Relation& r, const std::vector<Algebra>& algs) {
  const auto& ts = r.tuples();
  for (const auto& o : algs[0].ops()) {
    for (const auto& a : ts)
      for (const auto& b : ts)
        for (const auto& c : ts) {
          Tuple out(a.size());
          for (std::size_t i = 0; i < a.size(); ++i) out[i] = algs[i].op(o.name)(a[i], b[i], c[i]);
          if (!r.contains(out)) return false;
        }
  }
  return true;
}

}  // namespace

TEST_SUITE("relation") {
  TEST_CASE("canonical form") {
    const auto r = rel({2, 2}, {{1, 1}, {0, 1}, {1, 1}});
    CHECK(r.tuples() == std::vector<Tuple>{{0, 1}, {1, 1}});
    CHECK(r == rel({2, 2}, {{0, 1}, {1, 1}}));
    CHECK_THROWS_AS(rel({2, 2}, {{0, 2}}), Error);
    CHECK_THROWS_AS(rel({2, 2}, {{0}}), Error);
    CHECK(Relation::full({2, 3}).size() == 6);
    CHECK(Relation::full({2, 3}).product_size() == 6);
  }

  TEST_CASE("project") {
    const std::vector<std::size_t> first{0}, tail{1, 2};
    CHECK(project(fx::eq2(), first) == rel({2}, {{0}, {1}}));
    CHECK(project(rel({2, 2, 2}, {{0, 1, 1}, {1, 0, 1}}), tail) == rel({2, 2}, {{0, 1}, {1, 1}}));
    const std::vector<std::size_t> all{0, 1};
    CHECK(project(fx::neq2(), all) == fx::neq2());
  }

  TEST_CASE("natural join") {
    auto j = natural_join({{0, 1}, fx::eq2()}, {{1, 2}, fx::eq2()});
    CHECK(j.scope == Scope{0, 1, 2});
    CHECK(j.relation == rel({2, 2, 2}, {{0, 0, 0}, {1, 1, 1}}));
    CHECK(natural_join({{0, 1}, fx::eq2()}, {{1, 2}, Relation::empty({2, 2})}).relation.empty());
    j = natural_join({{0, 1}, fx::neq2()}, {{1, 2}, fx::neq2()});
    CHECK(j.relation == rel({2, 2, 2}, {{0, 1, 0}, {1, 0, 1}}));
  }

  TEST_CASE("join on disjoint scopes projects back to its factors") {
    const auto a = rel({2, 3}, {{0, 2}, {1, 0}});
    const auto b = rel({2}, {{1}});
    const auto j = natural_join({{0, 2}, a}, {{1}, b});
    CHECK(j.scope == Scope{0, 1, 2});
    const std::vector<std::size_t> pa{0, 2}, pb{1};
    CHECK(project(j.relation, pa) == a);
    CHECK(project(j.relation, pb) == b);
  }

  TEST_CASE("natural join rejects mismatched shared domains") {
    CHECK_THROWS_AS(natural_join({{0, 1}, Relation::full({2, 2})}, {{1}, Relation::full({3})}), Error);
  }

  TEST_CASE("is_invariant") {
    const auto m = fx::maj2();
    CHECK(is_invariant(fx::neq2(), std::vector<Algebra>{m, m}));
    const auto one_hot = rel({2, 2, 2}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK_FALSE(is_invariant(one_hot, std::vector<Algebra>{m, m, m}));
    CHECK(is_invariant(rel({2, 2, 2}, {{1, 0, 1}}), std::vector<Algebra>{m, m, m}));
  }

  TEST_CASE("is_invariant agrees with a direct enumeration") {
    Rng rng(3);
    for (int trial = 0; trial < 80; ++trial) {
      const Algebra a = gen_cd3_algebra(rng.between(2, 3), rng);
      const std::vector<Algebra> algs{a, a};
      std::vector<Tuple> tuples;
      for (Element x = 0; x < a.size(); ++x)
        for (Element y = 0; y < a.size(); ++y)
          if (rng.below(2)) tuples.push_back({x, y});
      const Relation r({a.size(), a.size()}, tuples);
      CHECK(is_invariant(r, algs) == invariant_oracle(r, algs));
    }
  }

  TEST_CASE("is_subdirect") {
    const auto m = fx::maj2();
    const std::vector<Algebra> mm{m, m};
    CHECK(is_subdirect(fx::eq2(), mm));
    CHECK_FALSE(is_subdirect(rel({2, 2}, {{0, 0}, {0, 1}}), mm));
    CHECK(is_subdirect(fx::full2(), mm));
  }

  TEST_CASE("generated_subpower") {
    const auto m = fx::maj2();
    CHECK(generated_subpower(std::vector<Algebra>{m, m}, {{0, 1}, {1, 0}}) == fx::neq2());
    const auto r = generated_subpower(std::vector<Algebra>{m, m, m}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(r.contains(Tuple{0, 0, 0}));
    CHECK(generated_subpower(std::vector<Algebra>{m, fx::dd2()}, {{1, 0}}) == rel({2, 2}, {{1, 0}}));
  }

  TEST_CASE("generated subpowers are invariant") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
      const Algebra a = gen_cd3_algebra(rng.between(2, 3), rng);
      const std::vector<Algebra> algs{a, a, a};
      std::vector<Tuple> seeds(rng.between(1, 3), Tuple(3));
      for (auto& t : seeds)
        for (auto& e : t) e = static_cast<Element>(rng.below(a.size()));
      const auto r = generated_subpower(algs, seeds);
      CHECK(invariant_oracle(r, algs));
      for (const auto& t : seeds) CHECK(r.contains(t));
    }
  }

  TEST_CASE("normalize_constraint fuses repeated variables and sorts columns") {
    const auto c = normalize_constraint({2, 0, 2}, {2, 2, 2}, {{0, 1, 0}, {1, 1, 0}, {1, 0, 1}});
    CHECK(c.scope == Scope{0, 2});
    // kept (0,1,0) and (1,0,1); columns reordered to (var0, var2)
    CHECK(c.relation == rel({2, 2}, {{0, 1}, {1, 0}}));
  }

  TEST_CASE("validate and satisfies") {
    const auto m = fx::maj2();
    auto inst = fx::over(m, 2, {{{0, 1}, fx::neq2()}});
    CHECK_NOTHROW(validate(inst, true));
    CHECK(satisfies(inst, std::vector<Element>{0, 1}));
    CHECK_FALSE(satisfies(inst, std::vector<Element>{1, 1}));
    inst.constraints.push_back({{0, 1, 2}, rel({2, 2, 2}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})});
    CHECK_THROWS_AS(validate(inst, true), Error);
    inst.domains.push_back(m);
    CHECK(fx::error_kind([&] { validate(inst, true); }) == ErrorKind::InvarianceViolation);
    CHECK_NOTHROW(validate(inst, false));
    inst.constraints.push_back({{1, 0}, fx::eq2()});
    CHECK_THROWS_AS(validate(inst, false), Error);
  }
}
