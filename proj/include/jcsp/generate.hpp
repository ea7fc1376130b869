#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "jcsp/relation.hpp"

namespace jcsp {

/// Seeded generator with a pinned reduction to ranges, so corpora regenerate
/// identically across standard libraries (std distributions are not portable).
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+rejection/1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi);

 private:
  std::mt19937_64 engine_;
};

/// Independent stream seed for trial `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct GeneratorConfig {
  std::uint64_t seed = 0;
  std::size_t domain_size = 2;
  std::size_t num_vars = 3;
  std::size_t num_constraints = 3;
  std::size_t min_arity = 1;
  std::size_t max_arity = 2;
  std::size_t subpower_seed_count = 2;

  /// Throws InvalidArgument unless all bounds are positive, domain_size <= 6
  /// and min_arity <= max_arity <= num_vars.
  void validate() const;
};

/// Random CD(3) algebra with operations "p1", "p2". Cells forced by the
/// identities are fixed; the shared values p1(x,y,y) = p2(x,y,y), x != y, are
/// drawn in lexicographic (x, y) order, then the all-distinct cells of p1 and
/// then of p2 in lexicographic order.
Algebra gen_cd3_algebra(std::size_t size, Rng& rng);
Algebra gen_cd3_algebra(const GeneratorConfig& cfg);

/// Random instance over one domain algebra per variable. Each constraint has
/// a random strictly increasing scope of arity in [min_arity, max_arity] and the
/// subpower generated by subpower_seed_count random tuples.
Instance gen_instance(std::span<const Algebra> domains, const GeneratorConfig& cfg, Rng& rng);
/// All variables over `alg`; uses cfg.seed.
Instance gen_instance(const Algebra& alg, const GeneratorConfig& cfg);

/// Two-element algebra with p1 = majority and p2 = third projection.
Algebra maj2();
/// Two-element algebra with p1 = first projection, p2(x,y,z) = x if y = z else z.
Algebra dd2();

}  // namespace jcsp
