#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jcsp/consistency.hpp"
#include "jcsp/jonsson.hpp"

namespace jcsp {

struct Solution {
  std::vector<Element> assignment;
};

struct NoSolution {
  /// Present when the verdict came from an emptied relation during
  /// minimalization; the brute-force oracle has no certificate.
  std::optional<EmptinessCertificate> certificate;
};

struct SolveStats {
  std::size_t k = 0;
  std::size_t minimalizations = 0;
  std::size_t ideal_reductions = 0;
  std::size_t quotient_reductions = 0;
  std::size_t base_cases = 0;
  /// Instances with fewer than k variables, read off the full system entry.
  std::size_t exact_decisions = 0;
  std::size_t max_depth = 0;
};

struct SolveOutcome {
  std::variant<Solution, NoSolution> result;
  SolveStats stats;
  /// Non-fatal lemma violations (e.g. a base case that needed the fallback).
  std::vector<std::string> diagnostics;

  bool satisfiable() const { return std::holds_alternative<Solution>(result); }
  const std::vector<Element>& assignment() const { return std::get<Solution>(result).assignment; }
};

struct SolveOptions {
  std::optional<std::size_t> k;
  IdealMode mode = IdealMode::Global;
  bool check_invariance = true;
};

/// 3 when every constraint has arity at most 3. Otherwise the smaller of the
/// largest arity and M², M the largest domain size (never below 3).
std::size_t choose_k(const Instance& inst);

/// Decision procedure for instances over CD(3) domains: k-minimalize, shrink
/// to subdirect, reduce to Jónsson-trivial domains by ideals, reduce to simple
/// domains by quotients with pullback, then assemble the base-case solution.
/// Returned solutions are re-checked against the input constraints.
SolveOutcome solve(const Instance& inst, const SolveOptions& options = {});

/// Backtracking over variables in index order and values in element order;
/// finds the lexicographically least solution.
SolveOutcome brute_force_solve(const Instance& inst);

/// Calls `visit` on every solution in lexicographic order until it returns
/// false.
void for_each_solution(const Instance& inst,
                       const std::function<bool(std::span<const Element>)>& visit);

// --- Pipeline stages -------------------------------------------------------------

/// Replaces the instance by one over J at `coord` (Λ_J constraints in Local
/// mode, R_J relations in Global mode), re-minimalizes and shrinks to
/// subdirect. The result is asserted nonempty and k-minimal. `origin` of the
/// result refers to the domains that `state.origin` refers to.
MinimalizedInstance reduce_to_ideal(const MinimalizedInstance& state, std::size_t coord,
                                    const ElementSet& ideal, IdealMode mode = IdealMode::Global,
                                    bool verify_invariance = false);

struct QuotientPlan {
  std::size_t coord = 0;
  /// θ_i per variable: ker π_i for i in W, 0 otherwise.
  std::vector<Congruence> thetas;
  Scope w;
  /// π_i : A_i -> A_coord/θ_coord for i in W (the block map for coord).
  std::map<std::size_t, std::vector<Element>> maps;
};

struct QuotientReduction {
  QuotientPlan plan;
  MinimalizedInstance quotient;
};

/// Quotients the subdirect, k-minimal state by Θ built from a maximal proper
/// congruence of domain `coord`. All domains must be Jónsson trivial.
QuotientReduction quotient_reduce(const MinimalizedInstance& state, std::size_t coord);

/// Restricts each domain in W to the θ_i-block chosen by a solution of the
/// quotient and intersects every relation with the restricted domains.
MinimalizedInstance pullback(const QuotientPlan& plan, std::span<const Element> quotient_solution,
                             const MinimalizedInstance& state);

/// Coordinates grouped by the linkage i ~ j (binary projection is the graph of
/// a bijection); every other pair is asserted to be full.
struct AlmostTrivialDecomposition {
  /// Classes in order of least member; members increasing.
  std::vector<std::vector<std::size_t>> classes;
  /// bijections[c][m] maps the class representative's (first member's) domain
  /// onto the domain of classes[c][m]. bijections[c][0] is the identity.
  std::vector<std::vector<std::vector<Element>>> bijections;
};

using PairRelation = std::function<Relation(std::size_t, std::size_t)>;

/// Builds the decomposition from the binary projections `pair(i, j)`, i < j,
/// over coordinates with the given universe sizes. Throws LemmaViolation when
/// a pair is neither full nor a bijection graph, or linkage is not coherent.
AlmostTrivialDecomposition decompose_pairs(std::span<const std::size_t> sizes, const PairRelation& pair);

/// Decomposition of a relation from its own binary projections, verified to
/// reproduce the relation exactly as a product of bijection-diagonal blocks.
AlmostTrivialDecomposition almost_trivial_decomposition(const Relation& rel);

struct BaseCaseResult {
  std::vector<Element> assignment;
  AlmostTrivialDecomposition decomposition;
  bool fallback = false;
};

/// Base case: subdirect, k-minimal (k >= 3), every domain simple (or one
/// element) and Jónsson trivial. Assigns the least value to each class
/// representative and propagates it along the class bijections; if that ever
/// fails to satisfy the instance, brute force is used and `fallback` is set.
BaseCaseResult base_case_solve(const MinimalizedInstance& state);

}  // namespace jcsp
