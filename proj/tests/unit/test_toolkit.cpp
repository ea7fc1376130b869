#include <set>
#include <string>

#include <doctest.h>

#include "fixtures.hpp"
#include "jcsp/generate.hpp"
#include "jcsp/io.hpp"
#include "jcsp/suites.hpp"

using namespace jcsp;

namespace {

std::string parse_message(const std::string& text, bool instance) {
  try {
    if (instance) {
      instance_from_text(text);
    } else {
      algebra_from_text(text);
    }
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  FAIL("text parsed");
  return {};
}

}  // namespace

TEST_SUITE("toolkit") {
  TEST_CASE("algebra round trip") {
    const auto a = fx::maj2();
    const auto text = algebra_to_text(a);
    CHECK(algebra_from_text(text) == a);
    CHECK(algebra_to_text(algebra_from_text(text)) == text);
  }

  TEST_CASE("instance round trip") {
    GeneratorConfig cfg;
    cfg.seed = 8;
    cfg.domain_size = 3;
    cfg.num_vars = 5;
    cfg.num_constraints = 4;
    cfg.max_arity = 3;
    const auto inst = gen_instance(gen_cd3_algebra(cfg), cfg);
    const FileStamp stamp{std::string(Rng::kAlgorithm), cfg.seed, {{"vars", 5}}};
    const auto text = instance_to_text(inst, stamp);
    CHECK(instance_from_text(text) == inst);
    CHECK(instance_to_text(instance_from_text(text), stamp) == text);
  }

  TEST_CASE("generators are deterministic") {
    GeneratorConfig cfg;
    cfg.seed = 123;
    cfg.domain_size = 4;
    CHECK(algebra_to_text(gen_cd3_algebra(cfg)) == algebra_to_text(gen_cd3_algebra(cfg)));
    cfg.domain_size = 2;
    const auto a = gen_cd3_algebra(cfg);
    CHECK(instance_to_text(gen_instance(a, cfg)) == instance_to_text(gen_instance(a, cfg)));
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  }

  TEST_CASE("size-2 generator reaches exactly the four CD(3) algebras") {
    // Only p1(0,1,1)/p1(1,0,0) are free when n = 2 (shared with p2 there).
    std::set<std::string> seen;
    for (std::uint64_t s = 0; s < 200; ++s) {
      GeneratorConfig cfg;
      cfg.seed = s;
      const auto a = gen_cd3_algebra(cfg);
      CHECK(check_cd3(a).ok);
      seen.insert(algebra_to_text(a));
    }
    CHECK(seen.size() == 4);
  }

  TEST_CASE("generated algebras satisfy the identities") {
    Rng rng(2);
    for (int trial = 0; trial < 40; ++trial) CHECK(check_cd3(gen_cd3_algebra(rng.between(1, 5), rng)).ok);
  }

  TEST_CASE("generated relations are invariant") {
    Rng rng(6);
    for (int trial = 0; trial < 40; ++trial) {
      GeneratorConfig cfg;
      cfg.num_vars = 4;
      cfg.max_arity = 3;
      const std::vector<Algebra> domains(4, gen_cd3_algebra(rng.between(2, 3), rng));
      CHECK_NOTHROW(validate(gen_instance(domains, cfg, rng), true));
    }
  }

  TEST_CASE("generator configs are validated") {
    GeneratorConfig cfg;
    cfg.domain_size = 7;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.domain_size = 2;
    cfg.max_arity = 4;
    CHECK_THROWS_AS(cfg.validate(), Error);
  }

  TEST_CASE("syntax errors name the line and column") {
    const auto msg = parse_message("{\n  \"size\": 2,\n  oops\n}", false);
    CHECK(msg.find("line 3") != std::string::npos);
  }

  TEST_CASE("schema errors name the field") {
    auto text = algebra_to_text(fx::maj2());
    text.replace(text.find("\"size\": 2"), 9, "\"size\": -1");
    CHECK(parse_message(text, false).find("size") != std::string::npos);
    const auto inst = fx::over(fx::maj2(), 2, {{{0, 1}, fx::eq2()}});
    auto itext = instance_to_text(inst);
    itext.replace(itext.find("[1, 1]"), 6, "[1, 5]");
    CHECK(parse_message(itext, true).find("constraints[0]") != std::string::npos);
  }

  TEST_CASE("the property suites run clean on small budgets") {
    for (const auto& name : suite_names()) {
      const auto r = run_suite(name, 10, 1);
      INFO(name);
      CHECK(r.ok());
      CHECK(r.checks > 0);
    }
  }
}
