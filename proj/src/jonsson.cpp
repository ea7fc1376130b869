#include "jcsp/jonsson.hpp"

#include <algorithm>
#include <sstream>

#include "jcsp/detail/closure.hpp"
#include "jcsp/errors.hpp"

namespace jcsp {

namespace {

std::string show(const Scope& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << '}';
  return os.str();
}

Scope without(const Scope& s, std::size_t v) {
  Scope out;
  for (auto x : s) {
    if (x != v) out.push_back(x);
  }
  return out;
}

Scope with(const Scope& s, std::size_t v) {
  Scope out = s;
  out.insert(std::lower_bound(out.begin(), out.end(), v), v);
  return out;
}

std::vector<Scope> k_subsets(const Scope& scope, std::size_t k) {
  std::vector<Scope> out;
  if (k > scope.size()) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    Scope s;
    for (auto i : idx) s.push_back(scope[i]);
    out.push_back(std::move(s));
    std::size_t j = k;
    while (j > 0 && idx[j - 1] == scope.size() - k + j - 1) --j;
    if (j == 0) break;
    ++idx[j - 1];
    for (std::size_t t = j; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

}  // namespace

Element mult(const Algebra& alg, Element x, Element y) {
  const Element a = alg.p1()(x, y, y);
  if (a != alg.p2()(x, y, y)) {
    std::ostringstream os;
    os << "p1(" << x << ',' << y << ',' << y << ") != p2(" << x << ',' << y << ',' << y << ')';
    fail(ErrorKind::Cd3Violation, os.str());
  }
  return a;
}

ElementSet jonsson_ideal(const Algebra& alg, const ElementSet& generators) {
  if (generators.empty()) return {};
  const std::size_t n = alg.size();
  for (Element g : generators) {
    if (g >= n) fail(ErrorKind::InvalidArgument, "ideal generator out of range");
  }
  // Basic operations first, then one unary "left multiplication by u" per u.
  auto arities = alg.arities();
  const std::size_t nops = arities.size();
  arities.resize(nops + n, 1);
  std::vector<Element> mt(n * n);
  for (Element u = 0; u < n; ++u) {
    for (Element y = 0; y < n; ++y) mt[u * n + y] = mult(alg, u, y);
  }
  std::vector<Element> scratch;
  auto closed = detail::close_under<Element>(
      generators, arities, [&](std::size_t f, std::span<const Element* const> args) {
        if (f >= nops) return mt[(f - nops) * n + *args[0]];
        scratch.resize(args.size());
        for (std::size_t j = 0; j < args.size(); ++j) scratch[j] = *args[j];
        return alg.ops()[f].table(scratch);
      });
  return make_element_set(std::move(closed));
}

bool is_jonsson_ideal(const Algebra& alg, const ElementSet& set) {
  return jonsson_ideal(alg, set) == make_element_set(set);
}

bool is_jonsson_trivial(const Algebra& alg) {
  for (Element b = 0; b < alg.size(); ++b) {
    if (jonsson_ideal(alg, {b}).size() != alg.size()) return false;
  }
  return true;
}

std::optional<ElementSet> some_proper_ideal(const Algebra& alg) {
  std::optional<ElementSet> best;
  for (Element b = 0; b < alg.size(); ++b) {
    ElementSet j = jonsson_ideal(alg, {b});
    if (j.size() == alg.size()) continue;
    if (!best || j.size() < best->size()) best = std::move(j);
  }
  return best;
}

// --- Distances ---------------------------------------------------------------

DistanceProfile::DistanceProfile(Relation base, std::vector<Relation> layers,
                                 std::vector<std::optional<std::size_t>> dist, std::size_t size_a)
    : base_(std::move(base)), layers_(std::move(layers)), dist_(std::move(dist)), size_a_(size_a) {}

bool DistanceProfile::connected() const {
  return std::all_of(dist_.begin(), dist_.end(), [](const auto& d) { return d.has_value(); });
}

DistanceProfile distance_profile(const Relation& s) {
  if (s.arity() != 2) fail(ErrorKind::InvalidArgument, "distance profile needs a binary relation");
  const std::size_t na = s.sizes()[0];
  const std::size_t nb = s.sizes()[1];
  {
    std::vector<bool> ha(na, false), hb(nb, false);
    for (const auto& t : s) {
      ha[t[0]] = true;
      hb[t[1]] = true;
    }
    if (std::count(ha.begin(), ha.end(), false) || std::count(hb.begin(), hb.end(), false)) {
      fail(ErrorKind::NotSubdirect, "relation does not project onto both factors");
    }
  }
  using Matrix = std::vector<bool>;
  auto to_relation = [&](const Matrix& m) {
    std::vector<Tuple> tuples;
    for (Element a = 0; a < na; ++a) {
      for (Element c = 0; c < na; ++c) {
        if (m[a * na + c]) tuples.push_back({a, c});
      }
    }
    return Relation({na, na}, std::move(tuples));
  };
  Matrix s0(na * na, false);
  for (std::size_t a = 0; a < na; ++a) s0[a * na + a] = true;
  Matrix s1(na * na, false);
  for (const auto& x : s) {
    for (const auto& y : s) {
      if (x[1] == y[1]) s1[x[0] * na + y[0]] = true;
    }
  }
  std::vector<std::optional<std::size_t>> dist(na * na);
  for (std::size_t a = 0; a < na; ++a) dist[a * na + a] = 0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (s1[i] && !dist[i]) dist[i] = 1;
  }
  std::vector<Relation> layers{to_relation(s0), to_relation(s1)};
  Matrix cur = s1;
  for (std::size_t k = 2;; ++k) {
    Matrix next(na * na, false);
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t c = 0; c < na; ++c) {
        if (!cur[a * na + c]) continue;
        for (std::size_t b = 0; b < na; ++b) {
          if (s1[c * na + b]) next[a * na + b] = true;
        }
      }
    }
    if (next == cur) break;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (next[i] && !dist[i]) dist[i] = k;
    }
    layers.push_back(to_relation(next));
    cur = std::move(next);
  }
  return DistanceProfile(s, std::move(layers), std::move(dist), na);
}

BinaryShape classify_binary(const Relation& s, const Algebra& a, const Algebra& b) {
  if (s.arity() != 2 || s.sizes()[0] != a.size() || s.sizes()[1] != b.size()) {
    fail(ErrorKind::DomainMismatch, "relation signature does not match the algebras");
  }
  if (simplicity(a) == Simplicity::NotSimple || !is_jonsson_trivial(a)) {
    fail(ErrorKind::InvalidArgument, "first factor must be simple and Jónsson trivial");
  }
  const std::vector<Algebra> algs{a, b};
  if (!is_subdirect(s, algs)) fail(ErrorKind::NotSubdirect, "binary relation is not subdirect");
  BinaryShape shape;
  if (s.size() == a.size() * b.size()) return shape;
  constexpr Element kUnset = static_cast<Element>(-1);
  shape.kind = BinaryShape::Kind::HomGraph;
  shape.map.assign(b.size(), kUnset);
  for (const auto& t : s) {
    if (shape.map[t[1]] != kUnset) {
      fail(ErrorKind::LemmaViolation, "relation is neither full nor the graph of a map B -> A");
    }
    shape.map[t[1]] = t[0];
  }
  // Subdirectness already gives ontoness and totality; check homomorphism.
  std::vector<Element> xb, xa;
  for (std::size_t f = 0; f < b.ops().size(); ++f) {
    const auto& fb = b.ops()[f].table;
    const auto& fa = a.ops()[f].table;
    const std::size_t m = fb.arity();
    xb.assign(m, 0);
    xa.resize(m);
    while (true) {
      for (std::size_t j = 0; j < m; ++j) xa[j] = shape.map[xb[j]];
      if (shape.map[fb(xb)] != fa(xa)) {
        fail(ErrorKind::LemmaViolation, "graph of a map B -> A that is not a homomorphism");
      }
      std::size_t j = 0;
      while (j < m && xb[j] + 1 == b.size()) xb[j++] = 0;
      if (j == m) break;
      ++xb[j];
    }
  }
  return shape;
}

// --- Ideal reduction -----------------------------------------------------------

IdealReduction build_lambda_J(const KSystem& system, const std::vector<Algebra>& domains,
                              std::size_t coord, const ElementSet& ideal_in, IdealMode mode) {
  const std::size_t k = system.k;
  const std::size_t n = domains.size();
  if (k < 3) fail(ErrorKind::InvalidArgument, "ideal reduction needs k >= 3");
  if (n < k) fail(ErrorKind::InvalidArgument, "ideal reduction needs at least k variables");
  if (coord >= n) fail(ErrorKind::InvalidArgument, "coordinate out of range");
  const ElementSet ideal = make_element_set(ideal_in);
  const Algebra& dom = domains[coord];
  if (ideal.empty() || ideal.size() >= dom.size() || ideal.back() >= dom.size() ||
      !is_jonsson_ideal(dom, ideal)) {
    fail(ErrorKind::NotAnIdeal, "not a proper nonempty Jónsson ideal of domain " + std::to_string(coord));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (system.at({v}).size() != domains[v].size()) {
      fail(ErrorKind::NotSubdirect, "k-system is not subdirect at variable " + std::to_string(v));
    }
  }

  IdealReduction red;
  red.k = k;
  red.coord = coord;
  red.ideal = ideal;
  red.mode = mode;
  red.domains = domains;

  Scope all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const auto ksets = k_subsets(all, k);

  std::vector<Tuple> ideal_tuples;
  for (Element e : ideal) ideal_tuples.push_back({e});
  const Relation ideal_rel({dom.size()}, std::move(ideal_tuples));
  for (const auto& I : ksets) {
    if (!std::binary_search(I.begin(), I.end(), coord)) continue;
    red.lambda.emplace(I, semijoin(system.at(I), positions_in(I, {coord}), ideal_rel));
  }
  for (const auto& I : ksets) {
    if (std::binary_search(I.begin(), I.end(), coord)) continue;
    Relation rel = system.at(I);
    for (auto i : I) {
      const Scope rest = without(I, i);
      const Scope K = with(rest, coord);
      const Relation ext = project(red.lambda.at(K), positions_in(K, rest));
      rel = semijoin(rel, positions_in(I, rest), ext);
    }
    red.lambda.emplace(I, std::move(rel));
  }

  // Claim (1): nonempty everywhere; projection onto coord is J.
  for (const auto& [I, rel] : red.lambda) {
    if (rel.empty()) fail(ErrorKind::LemmaViolation, "Λ_J" + show(I) + " is empty");
    if (std::binary_search(I.begin(), I.end(), coord)) {
      const Relation p = project(rel, positions_in(I, {coord}));
      ElementSet got;
      for (const auto& t : p) got.push_back(t[0]);
      if (got != ideal) fail(ErrorKind::LemmaViolation, "Λ_J" + show(I) + " does not project onto J");
    }
  }
  // Claim (2): compatibility on overlaps.
  for (auto it = red.lambda.begin(); it != red.lambda.end(); ++it) {
    for (auto jt = std::next(it); jt != red.lambda.end(); ++jt) {
      Scope common;
      std::set_intersection(it->first.begin(), it->first.end(), jt->first.begin(), jt->first.end(),
                            std::back_inserter(common));
      if (common.empty()) continue;
      if (project(it->second, positions_in(it->first, common)) !=
          project(jt->second, positions_in(jt->first, common))) {
        fail(ErrorKind::LemmaViolation,
             "Λ_J" + show(it->first) + " and Λ_J" + show(jt->first) + " disagree on " + show(common));
      }
    }
  }
  return red;
}

Relation reduce_constraint_RJ(const Relation& rel, const Scope& scope, const IdealReduction& red) {
  const std::size_t k = red.k;
  if (rel.arity() != scope.size()) fail(ErrorKind::InvalidArgument, "scope does not match relation arity");
  Relation out;
  if (scope.size() < k) {
    auto cover = std::find_if(red.lambda.begin(), red.lambda.end(), [&](const auto& e) {
      return std::includes(e.first.begin(), e.first.end(), scope.begin(), scope.end());
    });
    if (cover == red.lambda.end()) fail(ErrorKind::InvalidArgument, "no k-set covers the scope");
    out = intersect(rel, project(cover->second, positions_in(cover->first, scope)));
    if (out.empty()) fail(ErrorKind::LemmaViolation, "R_J on " + show(scope) + " is empty");
  } else {
    if (scope.size() > k && red.mode == IdealMode::Local) {
      fail(ErrorKind::InvalidArgument, "local ideal reduction needs every scope to have at most k variables");
    }
    const auto subs = k_subsets(scope, k);
    out = rel;
    for (const auto& I : subs) out = semijoin(out, positions_in(scope, I), red.lambda.at(I));
    if (out.empty()) fail(ErrorKind::LemmaViolation, "R_J on " + show(scope) + " is empty");
    for (const auto& I : subs) {
      if (project(out, positions_in(scope, I)) != red.lambda.at(I)) {
        fail(ErrorKind::LemmaViolation,
             "projection of R_J" + show(scope) + " onto " + show(I) + " differs from Λ_J");
      }
    }
  }
  if (red.verify_invariance) {
    std::vector<Algebra> algs;
    for (auto v : scope) algs.push_back(red.domains.at(v));
    if (!is_invariant(out, algs)) fail(ErrorKind::LemmaViolation, "R_J" + show(scope) + " is not a subuniverse");
  }
  return out;
}

}  // namespace jcsp
