#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jcsp/solver.hpp"

namespace jcsp {

/// Outcome of a randomized property suite. `trials` counts the objects that
/// met the suite's preconditions and were examined; `checks` counts the
/// individual assertions evaluated on them.
struct SuiteReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  /// Human-readable lines: a summary plus the first few violations.
  std::vector<std::string> notes;

  bool ok() const { return violations == 0; }
};

// --- Algebra-level suites ---------------------------------------------------------

/// Jónsson ideals against the least closed superset found by enumerating all
/// subsets; triviality and some_proper_ideal against the same oracle.
SuiteReport ideal_suite(std::size_t trials, std::uint64_t seed);

/// Principal congruences, the congruence test and the lexicographic maximal
/// proper congruence against enumeration of all partitions (sizes 1..4, plus
/// fixed two-factor products). One round per seed index.
SuiteReport congruence_suite(std::size_t seeds, std::uint64_t seed);

/// Distance inequality and layer properties on random connected subdirect
/// invariant S <= A x B.
SuiteReport distance_suite(std::size_t trials, std::uint64_t seed);

/// Exhaustive: every subdirect invariant S <= A x B with A simple and
/// Jónsson trivial classifies as Full or HomGraph, re-checked structurally.
SuiteReport connected_simple_suite(std::size_t seeds, std::uint64_t seed);

/// Subdirect invariant subpowers of 2..4 simple Jónsson-trivial factors
/// decompose into bijection-diagonal blocks; all binary subuniverses of small
/// pairs are covered exhaustively.
SuiteReport almost_trivial_suite(std::size_t trials, std::uint64_t seed);

// --- Reduction suites -------------------------------------------------------------

/// Λ_J on subdirect 3-minimal systems with a proper ideal: nonemptiness,
/// projection onto the ideal, overlap compatibility, invariance.
SuiteReport gamma_j_suite(std::size_t trials, std::uint64_t seed);

/// R_J on 4-minimal instances over two-element domains with arities 5..6.
SuiteReport rj_suite(std::size_t trials, std::uint64_t seed);

/// Quotient reduction plus pullback on instances over direct squares.
SuiteReport pullback_suite(std::size_t trials, std::uint64_t seed);

// --- Instance-level suites --------------------------------------------------------

struct CompareConfig {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  /// Algebra size; 0 draws 2 or 3 per algebra.
  std::size_t size = 0;
  /// Number of distinct algebras; trial t uses algebra t % algebras.
  std::size_t algebras = 10;
  std::size_t max_vars = 6;
  std::size_t max_constraints = 6;
  std::size_t max_arity = 3;
  std::size_t max_seed_count = 3;
};

struct TrialVerdict {
  std::size_t trial = 0;
  bool solver_sat = false;
  bool oracle_sat = false;
  /// Solver and oracle agree, and a returned assignment satisfies the instance.
  bool agree = false;
  std::string error;
};

/// The instance that trial `t` of a compare/width run examines.
Instance compare_instance(const CompareConfig& cfg, std::size_t trial);

/// solve against brute_force_solve on generated instances.
SuiteReport compare_suite(const CompareConfig& cfg, std::vector<TrialVerdict>* verdicts = nullptr);

/// Every instance whose 3-minimalization is nonempty must have a solution.
SuiteReport width_suite(const CompareConfig& cfg);

/// Random 2-SAT formulas as binary relations over MAJ2; solve against brute
/// force and an implication-graph decision.
SuiteReport two_sat_suite(std::size_t trials, std::uint64_t seed);

/// Names accepted by run_suite.
std::vector<std::string> suite_names();

/// Dispatch by name; throws InvalidArgument for an unknown name.
SuiteReport run_suite(std::string_view name, std::size_t trials, std::uint64_t seed);

}  // namespace jcsp
