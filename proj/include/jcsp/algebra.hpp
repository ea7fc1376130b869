#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace jcsp {

using Element = std::uint32_t;

/// Sorted, duplicate-free list of elements of one universe.
using ElementSet = std::vector<Element>;

ElementSet make_element_set(std::vector<Element> elements);

/// A finitary operation on {0..size-1} stored as a flat row-major table: the
/// first argument is the most significant digit.
class OperationTable {
 public:
  OperationTable(std::size_t arity, std::size_t size, std::vector<Element> table);

  static OperationTable from_function(std::size_t arity, std::size_t size,
                                      const std::function<Element(std::span<const Element>)>& f);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return size_; }
  const std::vector<Element>& table() const noexcept { return table_; }

  Element operator()(std::span<const Element> args) const;
  Element operator()(Element x, Element y, Element z) const {
    return table_[(static_cast<std::size_t>(x) * size_ + y) * size_ + z];
  }

  bool operator==(const OperationTable&) const = default;

 private:
  std::size_t arity_;
  std::size_t size_;
  std::vector<Element> table_;
};

bool is_idempotent(const OperationTable& op);

struct NamedOperation {
  std::string name;
  OperationTable table;

  bool operator==(const NamedOperation&) const = default;
};

/// A finite algebra with a designated pair (p1, p2) of ternary operations that
/// are meant to be Jónsson terms. The outer projections are never stored.
/// Operations are kept sorted by name so that equal algebras compare equal.
class Algebra {
 public:
  Algebra(std::size_t size, std::vector<NamedOperation> ops, std::array<std::string, 2> jonsson);

  std::size_t size() const noexcept { return size_; }
  const std::vector<NamedOperation>& ops() const noexcept { return ops_; }
  const std::array<std::string, 2>& jonsson_names() const noexcept { return jonsson_; }

  const OperationTable& op(const std::string& name) const;
  const OperationTable& p1() const { return ops_[p1_].table; }
  const OperationTable& p2() const { return ops_[p2_].table; }

  /// Arity of every stored operation, in storage order.
  std::vector<std::size_t> arities() const;

  bool operator==(const Algebra& other) const {
    return size_ == other.size_ && ops_ == other.ops_ && jonsson_ == other.jonsson_;
  }

 private:
  std::size_t size_;
  std::vector<NamedOperation> ops_;
  std::array<std::string, 2> jonsson_;
  std::size_t p1_ = 0;
  std::size_t p2_ = 0;
};

/// True when both algebras store the same operation names with the same
/// arities and the same Jónsson pair; sizes may differ.
bool same_signature(const Algebra& a, const Algebra& b);

// --- Jónsson identities -----------------------------------------------------

struct IdentityFailure {
  std::string identity;
  std::array<Element, 3> witness;
};

struct Cd3Report {
  bool ok = true;
  std::vector<IdentityFailure> failures;
};

/// Checks the CD(3) Jónsson identities for (p1, p2):
///   p1(x,y,x)=x, p2(x,y,x)=x, p1(x,x,y)=x, p2(x,x,y)=y, p1(x,y,y)=p2(x,y,y)
/// plus idempotency of every extra stored operation. Each failed identity is
/// reported once, with the lexicographically first violating cell.
Cd3Report check_cd3(const Algebra& alg);

// --- Subuniverses ------------------------------------------------------------

ElementSet subuniverse_closure(const Algebra& alg, const ElementSet& seed);
bool is_subuniverse(const Algebra& alg, const ElementSet& set);

struct Restriction {
  Algebra algebra;
  std::vector<Element> embedding;  // new index -> old element
};

/// Induced algebra on a nonempty subuniverse, re-indexed in increasing order.
Restriction restrict(const Algebra& alg, const ElementSet& sub);

/// Direct product; the pair (a, b) becomes element a * |B| + b.
Algebra product(const Algebra& a, const Algebra& b);

// --- Congruences -------------------------------------------------------------

/// A partition of {0..n-1}, stored as a block label per element. Labels are
/// canonical: blocks are numbered in order of their least element.
class Congruence {
 public:
  explicit Congruence(std::vector<std::size_t> labels);

  static Congruence identity(std::size_t n);
  static Congruence total(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t block_count() const noexcept { return blocks_; }
  std::size_t block_of(Element e) const { return labels_[e]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  bool related(Element a, Element b) const { return labels_[a] == labels_[b]; }
  std::vector<ElementSet> blocks() const;

  bool is_identity() const noexcept { return blocks_ == labels_.size(); }
  bool is_total() const noexcept { return blocks_ <= 1; }
  /// Inclusion as binary relations.
  bool refines(const Congruence& other) const;

  bool operator==(const Congruence&) const = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t blocks_ = 0;
};

bool is_congruence(const Algebra& alg, const Congruence& theta);

/// Least congruence containing every listed pair.
Congruence congruence_generated_by(const Algebra& alg,
                                   std::span<const std::pair<Element, Element>> pairs);
Congruence principal_congruence(const Algebra& alg, Element a, Element b);
Congruence join(const Algebra& alg, const Congruence& x, const Congruence& y);

/// A congruence that is maximal below 1_A, or nothing when the algebra has no
/// proper nontrivial congruence (simple or one-element). Pairs are scanned
/// lexicographically and Cg(a, b) is joined in whenever the join stays proper.
std::optional<Congruence> maximal_proper_congruence(const Algebra& alg);

struct Quotient {
  Algebra algebra;
  std::vector<Element> projection;  // element -> block index
};

Quotient quotient(const Algebra& alg, const Congruence& theta);

enum class Simplicity { Trivial, Simple, NotSimple };

/// One-element algebras are reported as Trivial rather than simple.
Simplicity simplicity(const Algebra& alg);
bool is_simple(const Algebra& alg);

}  // namespace jcsp
