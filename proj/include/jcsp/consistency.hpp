#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "jcsp/relation.hpp"

namespace jcsp {

/// Partial-solution relations for every nonempty variable set of size at most
/// k, keyed by the sorted variable set.
struct KSystem {
  std::size_t k = 0;
  std::map<Scope, Relation> entries;

  const Relation& at(const Scope& scope) const;
};

/// Where propagation first produced an empty relation: either an input
/// constraint (by index) or a system entry.
struct EmptinessCertificate {
  Scope scope;
  std::optional<std::size_t> constraint;
};

struct MinimalizedInstance {
  /// Input constraints (same scopes, same order) with refined relations.
  Instance base;
  KSystem system;
  bool empty = false;
  std::optional<EmptinessCertificate> certificate;
  /// For each variable, the element of the originally supplied domain that
  /// each current element stands for. Identity unless domains were shrunk.
  std::vector<std::vector<Element>> origin;
};

/// Every nonempty subset of {0..n-1} with at most k elements, by size then
/// lexicographically.
std::vector<Scope> small_subsets(std::size_t n, std::size_t k);

/// Relational k-minimality: adds a constraint (I, Λ(I)) for every |I| <= k and
/// propagates projection consistency between all constraints to a fixpoint.
/// Only tuples that cannot occur in any solution are removed.
MinimalizedInstance k_minimalize(const Instance& inst, std::size_t k);

/// Base constraints plus every system entry, as an ordinary instance.
Instance to_instance(const MinimalizedInstance& mi);

/// Like `to_instance`, but drops base constraints of arity <= k, which equal
/// their system entries after minimalization.
Instance collapse(const MinimalizedInstance& mi);

/// Shrinks every domain to Λ({i}) and re-indexes all relations.
MinimalizedInstance make_subdirect(const MinimalizedInstance& mi);

/// (1) every set of at most k variables lies in some scope, and (2) all
/// constraints covering such a set agree on their projections to it.
bool is_k_minimal(const Instance& inst, std::size_t k);

}  // namespace jcsp
