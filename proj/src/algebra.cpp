#include "jcsp/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "jcsp/detail/closure.hpp"
#include "jcsp/errors.hpp"

namespace jcsp {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  std::vector<std::size_t> labels() {
    std::vector<std::size_t> out(parent_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = find(i);
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Evaluates `op` on every argument vector in which position `pos` is free
// and the others range over the universe, passing (args-with-x, args-with-y)
// images to `sink`. These are the basic translations used for congruence
// generation.
template <class Sink>
void for_each_translation(const OperationTable& op, Element x, Element y, Sink&& sink) {
  const std::size_t m = op.arity();
  const std::size_t n = op.size();
  std::vector<Element> args(m);
  for (std::size_t pos = 0; pos < m; ++pos) {
    const std::size_t others = ipow(n, m - 1);
    for (std::size_t code = 0; code < others; ++code) {
      std::size_t c = code;
      for (std::size_t j = m; j-- > 0;) {
        if (j == pos) continue;
        args[j] = static_cast<Element>(c % n);
        c /= n;
      }
      args[pos] = x;
      const Element fx = op(args);
      args[pos] = y;
      const Element fy = op(args);
      sink(fx, fy);
    }
  }
}

}  // namespace

ElementSet make_element_set(std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return elements;
}

// --- OperationTable ----------------------------------------------------------

OperationTable::OperationTable(std::size_t arity, std::size_t size, std::vector<Element> table)
    : arity_(arity), size_(size), table_(std::move(table)) {
  if (size_ == 0) fail(ErrorKind::InvalidArgument, "operation on an empty universe");
  if (table_.size() != ipow(size_, arity_)) {
    std::ostringstream os;
    os << "operation table has " << table_.size() << " entries, expected " << ipow(size_, arity_);
    fail(ErrorKind::InvalidArgument, os.str());
  }
  for (Element v : table_) {
    if (v >= size_) fail(ErrorKind::InvalidArgument, "operation value out of range");
  }
}

OperationTable OperationTable::from_function(
    std::size_t arity, std::size_t size,
    const std::function<Element(std::span<const Element>)>& f) {
  const std::size_t cells = ipow(size, arity);
  std::vector<Element> table(cells);
  std::vector<Element> args(arity);
  for (std::size_t code = 0; code < cells; ++code) {
    std::size_t c = code;
    for (std::size_t j = arity; j-- > 0;) {
      args[j] = static_cast<Element>(c % size);
      c /= size;
    }
    table[code] = f(args);
  }
  return OperationTable(arity, size, std::move(table));
}

Element OperationTable::operator()(std::span<const Element> args) const {
  std::size_t code = 0;
  for (Element a : args) code = code * size_ + a;
  return table_[code];
}

bool is_idempotent(const OperationTable& op) {
  std::vector<Element> args(op.arity());
  for (Element a = 0; a < op.size(); ++a) {
    std::fill(args.begin(), args.end(), a);
    if (op(args) != a) return false;
  }
  return true;
}

// --- Algebra -----------------------------------------------------------------

Algebra::Algebra(std::size_t size, std::vector<NamedOperation> ops,
                 std::array<std::string, 2> jonsson)
    : size_(size), ops_(std::move(ops)), jonsson_(std::move(jonsson)) {
  if (size_ == 0) fail(ErrorKind::InvalidArgument, "algebra with empty universe");
  std::sort(ops_.begin(), ops_.end(),
            [](const NamedOperation& a, const NamedOperation& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (i > 0 && ops_[i].name == ops_[i - 1].name) {
      fail(ErrorKind::InvalidArgument, "duplicate operation name '" + ops_[i].name + "'");
    }
    if (ops_[i].table.size() != size_) {
      fail(ErrorKind::InvalidArgument, "operation '" + ops_[i].name + "' has wrong universe size");
    }
  }
  auto locate = [&](const std::string& name) {
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (ops_[i].name == name) {
        if (ops_[i].table.arity() != 3) {
          fail(ErrorKind::InvalidArgument, "Jónsson operation '" + name + "' is not ternary");
        }
        return i;
      }
    }
    fail(ErrorKind::InvalidArgument, "Jónsson operation '" + name + "' is not defined");
  };
  p1_ = locate(jonsson_[0]);
  p2_ = locate(jonsson_[1]);
}

const OperationTable& Algebra::op(const std::string& name) const {
  for (const auto& o : ops_) {
    if (o.name == name) return o.table;
  }
  fail(ErrorKind::InvalidArgument, "no operation named '" + name + "'");
}

std::vector<std::size_t> Algebra::arities() const {
  std::vector<std::size_t> out;
  out.reserve(ops_.size());
  for (const auto& o : ops_) out.push_back(o.table.arity());
  return out;
}

bool same_signature(const Algebra& a, const Algebra& b) {
  if (a.jonsson_names() != b.jonsson_names() || a.ops().size() != b.ops().size()) return false;
  for (std::size_t i = 0; i < a.ops().size(); ++i) {
    if (a.ops()[i].name != b.ops()[i].name) return false;
    if (a.ops()[i].table.arity() != b.ops()[i].table.arity()) return false;
  }
  return true;
}

Cd3Report check_cd3(const Algebra& alg) {
  Cd3Report report;
  const auto& p1 = alg.p1();
  const auto& p2 = alg.p2();
  const Element n = static_cast<Element>(alg.size());

  struct Identity {
    const char* name;
    std::function<bool(Element, Element)> holds;
    std::function<std::array<Element, 3>(Element, Element)> cell;
  };
  const std::vector<Identity> identities = {
      {"p1(x,y,x)=x", [&](Element x, Element y) { return p1(x, y, x) == x; },
       [](Element x, Element y) { return std::array<Element, 3>{x, y, x}; }},
      {"p2(x,y,x)=x", [&](Element x, Element y) { return p2(x, y, x) == x; },
       [](Element x, Element y) { return std::array<Element, 3>{x, y, x}; }},
      {"p1(x,x,y)=x", [&](Element x, Element y) { return p1(x, x, y) == x; },
       [](Element x, Element y) { return std::array<Element, 3>{x, x, y}; }},
      {"p2(x,x,y)=y", [&](Element x, Element y) { return p2(x, x, y) == y; },
       [](Element x, Element y) { return std::array<Element, 3>{x, x, y}; }},
      {"p1(x,y,y)=p2(x,y,y)", [&](Element x, Element y) { return p1(x, y, y) == p2(x, y, y); },
       [](Element x, Element y) { return std::array<Element, 3>{x, y, y}; }},
  };
  for (const auto& id : identities) {
    bool done = false;
    for (Element x = 0; x < n && !done; ++x) {
      for (Element y = 0; y < n && !done; ++y) {
        if (!id.holds(x, y)) {
          report.failures.push_back({id.name, id.cell(x, y)});
          done = true;
        }
      }
    }
  }
  for (const auto& o : alg.ops()) {
    if (o.name == alg.jonsson_names()[0] || o.name == alg.jonsson_names()[1]) continue;
    if (!is_idempotent(o.table)) {
      std::vector<Element> args(o.table.arity());
      for (Element a = 0; a < n; ++a) {
        std::fill(args.begin(), args.end(), a);
        if (o.table(args) != a) {
          report.failures.push_back({"idempotent(" + o.name + ")", {a, a, a}});
          break;
        }
      }
    }
  }
  report.ok = report.failures.empty();
  return report;
}

// --- Subuniverses ------------------------------------------------------------

ElementSet subuniverse_closure(const Algebra& alg, const ElementSet& seed) {
  for (Element e : seed) {
    if (e >= alg.size()) fail(ErrorKind::InvalidArgument, "seed element out of range");
  }
  const auto arities = alg.arities();
  std::vector<Element> scratch;
  auto closed = detail::close_under<Element>(
      seed, arities, [&](std::size_t f, std::span<const Element* const> args) {
        scratch.resize(args.size());
        for (std::size_t j = 0; j < args.size(); ++j) scratch[j] = *args[j];
        return alg.ops()[f].table(scratch);
      });
  return make_element_set(std::move(closed));
}

bool is_subuniverse(const Algebra& alg, const ElementSet& set) {
  return subuniverse_closure(alg, set) == make_element_set(set);
}

Restriction restrict(const Algebra& alg, const ElementSet& sub_in) {
  const ElementSet sub = make_element_set(sub_in);
  if (sub.empty()) fail(ErrorKind::EmptySubuniverse, "cannot restrict to the empty set");
  if (!is_subuniverse(alg, sub)) fail(ErrorKind::NotASubuniverse, "set is not closed under the operations");
  std::vector<Element> index(alg.size(), 0);
  for (std::size_t i = 0; i < sub.size(); ++i) index[sub[i]] = static_cast<Element>(i);
  std::vector<NamedOperation> ops;
  std::vector<Element> args;
  for (const auto& o : alg.ops()) {
    auto table = OperationTable::from_function(
        o.table.arity(), sub.size(), [&](std::span<const Element> a) {
          args.resize(a.size());
          for (std::size_t j = 0; j < a.size(); ++j) args[j] = sub[a[j]];
          return index[o.table(args)];
        });
    ops.push_back({o.name, std::move(table)});
  }
  return {Algebra(sub.size(), std::move(ops), alg.jonsson_names()), sub};
}

Algebra product(const Algebra& a, const Algebra& b) {
  if (!same_signature(a, b)) fail(ErrorKind::InvalidArgument, "product of dissimilar algebras");
  const std::size_t nb = b.size();
  std::vector<NamedOperation> ops;
  std::vector<Element> xa, xb;
  for (std::size_t i = 0; i < a.ops().size(); ++i) {
    const auto& fa = a.ops()[i].table;
    const auto& fb = b.ops()[i].table;
    auto table = OperationTable::from_function(
        fa.arity(), a.size() * nb, [&](std::span<const Element> args) {
          xa.resize(args.size());
          xb.resize(args.size());
          for (std::size_t j = 0; j < args.size(); ++j) {
            xa[j] = static_cast<Element>(args[j] / nb);
            xb[j] = static_cast<Element>(args[j] % nb);
          }
          return static_cast<Element>(fa(xa) * nb + fb(xb));
        });
    ops.push_back({a.ops()[i].name, std::move(table)});
  }
  return Algebra(a.size() * nb, std::move(ops), a.jonsson_names());
}

// --- Congruences -------------------------------------------------------------

Congruence::Congruence(std::vector<std::size_t> labels) {
  std::vector<std::size_t> keys;
  labels_.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(keys.begin(), keys.end(), labels[i]);
    if (it == keys.end()) {
      keys.push_back(labels[i]);
      labels_[i] = keys.size() - 1;
    } else {
      labels_[i] = static_cast<std::size_t>(it - keys.begin());
    }
  }
  blocks_ = keys.size();
}

Congruence Congruence::identity(std::size_t n) {
  std::vector<std::size_t> l(n);
  std::iota(l.begin(), l.end(), 0);
  return Congruence(std::move(l));
}

Congruence Congruence::total(std::size_t n) { return Congruence(std::vector<std::size_t>(n, 0)); }

std::vector<ElementSet> Congruence::blocks() const {
  std::vector<ElementSet> out(blocks_);
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(static_cast<Element>(i));
  return out;
}

bool Congruence::refines(const Congruence& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (labels_[i] == labels_[j] && other.labels_[i] != other.labels_[j]) return false;
    }
  }
  return true;
}

bool is_congruence(const Algebra& alg, const Congruence& theta) {
  if (theta.size() != alg.size()) return false;
  // Compatibility with every basic translation of every related pair suffices.
  for (Element x = 0; x < alg.size(); ++x) {
    for (Element y = x + 1; y < alg.size(); ++y) {
      if (!theta.related(x, y)) continue;
      for (const auto& o : alg.ops()) {
        bool ok = true;
        for_each_translation(o.table, x, y, [&](Element fx, Element fy) {
          ok = ok && theta.related(fx, fy);
        });
        if (!ok) return false;
      }
    }
  }
  return true;
}

Congruence congruence_generated_by(const Algebra& alg,
                                   std::span<const std::pair<Element, Element>> pairs) {
  UnionFind uf(alg.size());
  std::vector<std::pair<Element, Element>> work;
  for (const auto& [a, b] : pairs) {
    if (a >= alg.size() || b >= alg.size()) fail(ErrorKind::InvalidArgument, "pair out of range");
    if (uf.unite(a, b)) work.emplace_back(a, b);
  }
  // Each merged pair is pushed through every basic translation; the
  // equivalence closure of these images is the generated congruence.
  while (!work.empty()) {
    const auto [x, y] = work.back();
    work.pop_back();
    for (const auto& o : alg.ops()) {
      for_each_translation(o.table, x, y, [&](Element fx, Element fy) {
        if (uf.unite(fx, fy)) work.emplace_back(fx, fy);
      });
    }
  }
  return Congruence(uf.labels());
}

Congruence principal_congruence(const Algebra& alg, Element a, Element b) {
  const std::pair<Element, Element> p{a, b};
  return congruence_generated_by(alg, std::span<const std::pair<Element, Element>>(&p, 1));
}

Congruence join(const Algebra& alg, const Congruence& x, const Congruence& y) {
  std::vector<std::pair<Element, Element>> pairs;
  for (const auto* c : {&x, &y}) {
    for (const auto& block : c->blocks()) {
      for (std::size_t i = 1; i < block.size(); ++i) pairs.emplace_back(block[0], block[i]);
    }
  }
  return congruence_generated_by(alg, pairs);
}

std::optional<Congruence> maximal_proper_congruence(const Algebra& alg) {
  const std::size_t n = alg.size();
  if (n < 2) return std::nullopt;
  Congruence theta = Congruence::identity(n);
  for (Element a = 0; a < n; ++a) {
    for (Element b = a + 1; b < n; ++b) {
      if (theta.related(a, b)) continue;
      Congruence cg = principal_congruence(alg, a, b);
      if (cg.is_total()) continue;
      Congruence joined = join(alg, theta, cg);
      if (!joined.is_total()) theta = std::move(joined);
    }
  }
  if (theta.is_identity()) return std::nullopt;
  return theta;
}

Quotient quotient(const Algebra& alg, const Congruence& theta) {
  if (theta.size() != alg.size() || !is_congruence(alg, theta)) {
    fail(ErrorKind::NotACongruence, "partition is not invariant under the operations");
  }
  const auto blocks = theta.blocks();
  std::vector<NamedOperation> ops;
  std::vector<Element> args;
  for (const auto& o : alg.ops()) {
    auto table = OperationTable::from_function(
        o.table.arity(), blocks.size(), [&](std::span<const Element> a) {
          args.resize(a.size());
          for (std::size_t j = 0; j < a.size(); ++j) args[j] = blocks[a[j]].front();
          return static_cast<Element>(theta.block_of(o.table(args)));
        });
    ops.push_back({o.name, std::move(table)});
  }
  std::vector<Element> projection(alg.size());
  for (Element e = 0; e < alg.size(); ++e) projection[e] = static_cast<Element>(theta.block_of(e));
  return {Algebra(blocks.size(), std::move(ops), alg.jonsson_names()), std::move(projection)};
}

Simplicity simplicity(const Algebra& alg) {
  if (alg.size() == 1) return Simplicity::Trivial;
  for (Element a = 0; a < alg.size(); ++a) {
    for (Element b = a + 1; b < alg.size(); ++b) {
      if (!principal_congruence(alg, a, b).is_total()) return Simplicity::NotSimple;
    }
  }
  return Simplicity::Simple;
}

bool is_simple(const Algebra& alg) { return simplicity(alg) == Simplicity::Simple; }

}  // namespace jcsp
