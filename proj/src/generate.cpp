#include "jcsp/generate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "jcsp/errors.hpp"

namespace jcsp {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "empty range");
  // Reject the low values that would bias r % n.
  const std::uint64_t threshold = (std::numeric_limits<std::uint64_t>::max() - n + 1) % n;
  while (true) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

std::size_t Rng::between(std::size_t lo, std::size_t hi) {
  if (hi < lo) fail(ErrorKind::InvalidArgument, "empty range");
  return lo + static_cast<std::size_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void GeneratorConfig::validate() const {
  if (domain_size == 0 || num_vars == 0 || num_constraints == 0 || max_arity == 0 || subpower_seed_count == 0) {
    fail(ErrorKind::InvalidArgument, "generator bounds must be positive");
  }
  if (domain_size > 6) fail(ErrorKind::InvalidArgument, "domain_size must be at most 6");
  if (min_arity == 0 || min_arity > max_arity) fail(ErrorKind::InvalidArgument, "min_arity must be in 1..max_arity");
  if (max_arity > num_vars) fail(ErrorKind::InvalidArgument, "max_arity must not exceed num_vars");
}

Algebra gen_cd3_algebra(std::size_t n, Rng& rng) {
  if (n == 0 || n > 6) fail(ErrorKind::InvalidArgument, "algebra size must be in 1..6");
  auto cell = [n](Element x, Element y, Element z) { return (static_cast<std::size_t>(x) * n + y) * n + z; };
  std::vector<Element> p1(n * n * n), p2(n * n * n);
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) {
      p1[cell(x, y, x)] = x;
      p2[cell(x, y, x)] = x;
      p1[cell(x, x, y)] = x;
      p2[cell(x, x, y)] = y;
    }
  }
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) {
      if (x == y) continue;
      const auto v = static_cast<Element>(rng.below(n));
      p1[cell(x, y, y)] = v;
      p2[cell(x, y, y)] = v;
    }
  }
  for (auto* table : {&p1, &p2}) {
    for (Element x = 0; x < n; ++x) {
      for (Element y = 0; y < n; ++y) {
        for (Element z = 0; z < n; ++z) {
          if (x != y && y != z && x != z) (*table)[cell(x, y, z)] = static_cast<Element>(rng.below(n));
        }
      }
    }
  }
  return Algebra(n,
                 {{"p1", OperationTable(3, n, std::move(p1))}, {"p2", OperationTable(3, n, std::move(p2))}},
                 {"p1", "p2"});
}

Algebra gen_cd3_algebra(const GeneratorConfig& cfg) {
  if (cfg.domain_size == 0 || cfg.domain_size > 6) fail(ErrorKind::InvalidArgument, "domain_size must be in 1..6");
  Rng rng(cfg.seed);
  return gen_cd3_algebra(cfg.domain_size, rng);
}

Instance gen_instance(std::span<const Algebra> domains, const GeneratorConfig& cfg, Rng& rng) {
  if (domains.size() != cfg.num_vars) fail(ErrorKind::InvalidArgument, "one domain per variable required");
  GeneratorConfig bounds = cfg;
  bounds.domain_size = 1;
  bounds.validate();
  Instance inst;
  inst.domains.assign(domains.begin(), domains.end());
  std::vector<std::size_t> vars(cfg.num_vars);
  for (std::size_t c = 0; c < cfg.num_constraints; ++c) {
    const std::size_t arity = rng.between(cfg.min_arity, cfg.max_arity);
    std::iota(vars.begin(), vars.end(), std::size_t{0});
    for (std::size_t i = 0; i < arity; ++i) std::swap(vars[i], vars[rng.between(i, vars.size() - 1)]);
    Scope scope(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(arity));
    std::sort(scope.begin(), scope.end());
    std::vector<Tuple> seeds(cfg.subpower_seed_count, Tuple(arity));
    for (auto& t : seeds) {
      for (std::size_t i = 0; i < arity; ++i) t[i] = static_cast<Element>(rng.below(domains[scope[i]].size()));
    }
    auto algs = inst.scope_algebras(scope);
    inst.constraints.push_back({scope, generated_subpower(algs, std::move(seeds))});
  }
  return inst;
}

Instance gen_instance(const Algebra& alg, const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::vector<Algebra> domains(cfg.num_vars, alg);
  return gen_instance(domains, cfg, rng);
}

Algebra maj2() {
  auto p1 = OperationTable::from_function(3, 2, [](std::span<const Element> a) {
    return static_cast<Element>((a[0] + a[1] + a[2]) >= 2 ? 1 : 0);
  });
  auto p2 = OperationTable::from_function(3, 2, [](std::span<const Element> a) { return a[2]; });
  return Algebra(2, {{"p1", p1}, {"p2", p2}}, {"p1", "p2"});
}

Algebra dd2() {
  auto p1 = OperationTable::from_function(3, 2, [](std::span<const Element> a) { return a[0]; });
  auto p2 = OperationTable::from_function(3, 2, [](std::span<const Element> a) {
    return a[1] == a[2] ? a[0] : a[2];
  });
  return Algebra(2, {{"p1", p1}, {"p2", p2}}, {"p1", "p2"});
}

}  // namespace jcsp
