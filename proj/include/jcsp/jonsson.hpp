#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "jcsp/consistency.hpp"

namespace jcsp {

/// x·y = p1(x,y,y). Throws Cd3Violation when p2(x,y,y) disagrees.
Element mult(const Algebra& alg, Element x, Element y);

/// Least subuniverse containing X that is closed under u·(-) for every u.
ElementSet jonsson_ideal(const Algebra& alg, const ElementSet& generators);

bool is_jonsson_ideal(const Algebra& alg, const ElementSet& set);

/// No proper nonempty Jónsson ideals, i.e. J({b}) = A for every b.
bool is_jonsson_trivial(const Algebra& alg);

/// Smallest proper singleton-generated ideal (least generator on ties).
std::optional<ElementSet> some_proper_ideal(const Algebra& alg);

// --- Distances ---------------------------------------------------------------

/// Layers S_0 = 0_A, S_1, S_2 = S_1 ∘ S_1, ... of the linkage relation of a
/// subdirect S ≤ A × B, until they stop growing.
class DistanceProfile {
 public:
  DistanceProfile(Relation base, std::vector<Relation> layers,
                  std::vector<std::optional<std::size_t>> dist, std::size_t size_a);

  const Relation& base() const noexcept { return base_; }
  /// layers()[k] is S_k as a binary relation on A.
  const std::vector<Relation>& layers() const noexcept { return layers_; }
  std::optional<std::size_t> distance(Element a, Element b) const { return dist_[a * size_a_ + b]; }
  bool connected() const;
  std::size_t size_a() const noexcept { return size_a_; }

 private:
  Relation base_;
  std::vector<Relation> layers_;
  std::vector<std::optional<std::size_t>> dist_;
  std::size_t size_a_;
};

/// Throws NotSubdirect when S does not project onto both factors.
DistanceProfile distance_profile(const Relation& s);

struct BinaryShape {
  enum class Kind { Full, HomGraph };
  Kind kind = Kind::Full;
  /// For HomGraph: the onto homomorphism B -> A whose graph is S.
  std::vector<Element> map;
};

/// For A simple and Jónsson trivial, a subdirect invariant S ≤ A × B is either
/// A × B or the graph of an onto homomorphism B -> A. The shape is verified
/// structurally; anything else raises LemmaViolation.
BinaryShape classify_binary(const Relation& s, const Algebra& a, const Algebra& b);

// --- Ideal reduction -----------------------------------------------------------

enum class IdealMode {
  /// All scopes have at most k variables; constraints become Λ_J(I), |I| = k.
  Local,
  /// k ≥ M²; every constraint relation R is replaced by R_J.
  Global,
};

struct IdealReduction {
  std::size_t k = 0;
  std::size_t coord = 0;
  ElementSet ideal;
  /// Λ_J on every k-element variable set.
  std::map<Scope, Relation> lambda;
  IdealMode mode = IdealMode::Global;
  /// Domains of the reduced system; used when reduced relations are checked
  /// for invariance.
  std::vector<Algebra> domains;
  bool verify_invariance = false;
};

/// Λ_J(I) = {a ∈ Λ(I) : a(coord) ∈ J} when coord ∈ I; otherwise the tuples of
/// Λ(I) all of whose (k-1)-restrictions extend into Λ_J of the k-set formed
/// with coord. Nonemptiness, the coordinate projection onto J, and overlap
/// compatibility are asserted (LemmaViolation).
IdealReduction build_lambda_J(const KSystem& system, const std::vector<Algebra>& domains,
                              std::size_t coord, const ElementSet& ideal,
                              IdealMode mode = IdealMode::Global);

/// R_J: tuples of R all of whose k-restrictions lie in Λ_J. For scopes of at
/// least k variables, proj_I(R_J) = Λ_J(I) is asserted for every k-subset I.
/// Smaller scopes are cut down to the projection of a covering Λ_J entry.
Relation reduce_constraint_RJ(const Relation& rel, const Scope& scope,
                              const IdealReduction& reduction);

}  // namespace jcsp
