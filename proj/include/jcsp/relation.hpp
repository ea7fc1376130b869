#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jcsp/algebra.hpp"

namespace jcsp {

using Tuple = std::vector<Element>;

/// Sorted, duplicate-free list of variable indices.
using Scope = std::vector<std::size_t>;

/// A finitary relation over a sequence of finite domains. `sizes` is the
/// signature (one universe size per coordinate); tuples are kept in
/// lexicographic order without duplicates, so equality is structural.
class Relation {
 public:
  Relation() = default;
  Relation(std::vector<std::size_t> sizes, std::vector<Tuple> tuples);

  static Relation full(std::vector<std::size_t> sizes);
  static Relation empty(std::vector<std::size_t> sizes) { return Relation(std::move(sizes), {}); }

  std::size_t arity() const noexcept { return sizes_.size(); }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  const std::vector<Tuple>& tuples() const noexcept { return tuples_; }
  std::size_t size() const noexcept { return tuples_.size(); }
  bool empty() const noexcept { return tuples_.empty(); }
  bool contains(std::span<const Element> t) const;
  /// Number of tuples of the full product over the signature.
  std::size_t product_size() const;

  auto begin() const { return tuples_.begin(); }
  auto end() const { return tuples_.end(); }

  bool operator==(const Relation&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<Tuple> tuples_;
};

/// Projection onto strictly increasing coordinate positions.
Relation project(const Relation& rel, std::span<const std::size_t> positions);

Relation intersect(const Relation& a, const Relation& b);

/// Tuples of `rel` whose restriction to `positions` lies in `filter`.
Relation semijoin(const Relation& rel, std::span<const std::size_t> positions,
                  const Relation& filter);

struct ScopedRelation {
  Scope scope;
  Relation relation;
};

/// All tuples over scope1 ∪ scope2 whose restrictions lie in r1 and r2.
/// Shared variables must carry the same universe size.
ScopedRelation natural_join(const ScopedRelation& r1, const ScopedRelation& r2);

/// Positions of `sub` inside `scope`; both sorted, `sub` ⊆ `scope`.
std::vector<std::size_t> positions_in(const Scope& scope, const Scope& sub);

/// Multi-sorted invariance: every operation name is read as a family of
/// tables, one per coordinate algebra, applied coordinatewise.
bool is_invariant(const Relation& rel, std::span<const Algebra> algebras);
bool is_subdirect(const Relation& rel, std::span<const Algebra> algebras);

/// Closure of the seed tuples under every operation applied coordinatewise.
Relation generated_subpower(std::span<const Algebra> algebras, std::vector<Tuple> seeds);

// --- Instances -----------------------------------------------------------------

struct Constraint {
  Scope scope;
  Relation relation;

  bool operator==(const Constraint&) const = default;
};

/// A multi-sorted instance: one domain algebra per variable.
struct Instance {
  std::vector<Algebra> domains;
  std::vector<Constraint> constraints;

  std::size_t num_vars() const noexcept { return domains.size(); }
  std::vector<Algebra> scope_algebras(const Scope& scope) const;
  std::vector<std::size_t> scope_sizes(const Scope& scope) const;

  bool operator==(const Instance&) const = default;
};

/// Builds a constraint from a scope that may be unsorted or repeat variables:
/// repeated positions are fused by keeping tuples that agree on them, then
/// columns are reordered to increasing variable order.
Constraint normalize_constraint(const std::vector<std::size_t>& raw_scope,
                                const std::vector<std::size_t>& raw_sizes,
                                const std::vector<Tuple>& raw_tuples);

/// Structural checks (scopes, ranges, signatures) and, optionally, invariance
/// of every constraint relation. Throws on the first problem.
void validate(const Instance& inst, bool check_invariance);

bool satisfies(const Instance& inst, std::span<const Element> assignment);

}  // namespace jcsp
