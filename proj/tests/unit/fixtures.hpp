#pragma once

#include <functional>
#include <vector>

#include "jcsp/errors.hpp"
#include "jcsp/relation.hpp"

namespace fx {

using jcsp::Algebra;
using jcsp::Element;
using jcsp::Relation;
using jcsp::Tuple;

// Built from formulas here rather than through the library's catalogue, so the
// catalogue itself is under test.
inline Algebra ternary(std::function<Element(Element, Element, Element)> p1,
                       std::function<Element(Element, Element, Element)> p2, std::size_t n = 2) {
  auto wrap = [n](auto f) {
    return jcsp::OperationTable::from_function(3, n, [f](std::span<const Element> a) { return f(a[0], a[1], a[2]); });
  };
  return Algebra(n, {{"p1", wrap(p1)}, {"p2", wrap(p2)}}, {"p1", "p2"});
}

inline Algebra maj2() {
  return ternary([](Element x, Element y, Element z) { return static_cast<Element>(x + y + z >= 2); },
                 [](Element, Element, Element z) { return z; });
}

inline Algebra dd2() {
  return ternary([](Element x, Element, Element) { return x; },
                 [](Element x, Element y, Element z) { return y == z ? x : z; });
}

inline Relation rel(std::vector<std::size_t> sizes, std::vector<Tuple> tuples) {
  return Relation(std::move(sizes), std::move(tuples));
}

inline Relation eq2() { return rel({2, 2}, {{0, 0}, {1, 1}}); }
inline Relation neq2() { return rel({2, 2}, {{0, 1}, {1, 0}}); }
inline Relation full2() { return Relation::full({2, 2}); }

inline jcsp::Instance over(const Algebra& a, std::size_t n, std::vector<jcsp::Constraint> cs) {
  jcsp::Instance inst;
  inst.domains.assign(n, a);
  inst.constraints = std::move(cs);
  return inst;
}

// (x, y) of a two-factor product over sizes (n, m) -> element index
inline Element pair(Element x, Element y, std::size_t m = 2) { return static_cast<Element>(x * m + y); }

// Every assignment, in lexicographic order, that satisfies the instance.
inline std::vector<std::vector<Element>> all_solutions(const jcsp::Instance& inst) {
  std::vector<std::vector<Element>> out;
  const std::size_t n = inst.num_vars();
  std::vector<Element> a(n, 0);
  while (true) {
    bool ok = true;
    for (const auto& c : inst.constraints) {
      Tuple t;
      for (auto v : c.scope) t.push_back(a[v]);
      ok = ok && c.relation.contains(t);
    }
    if (ok) out.push_back(a);
    std::size_t p = n;
    while (p > 0 && ++a[p - 1] == inst.domains[p - 1].size()) a[--p] = 0;
    if (p == 0) break;
  }
  return out;
}

template <class F>
jcsp::ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const jcsp::Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected a library error");
}

}  // namespace fx
