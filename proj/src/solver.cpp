#include "jcsp/solver.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "jcsp/errors.hpp"

namespace jcsp {

namespace {

// origin of a state derived from `outer`, where `inner` maps the derived
// state's elements to `outer`'s current elements.
std::vector<std::vector<Element>> compose_origin(const std::vector<std::vector<Element>>& outer,
                                                 const std::vector<std::vector<Element>>& inner) {
  std::vector<std::vector<Element>> out(inner.size());
  for (std::size_t v = 0; v < inner.size(); ++v) {
    for (Element e : inner[v]) out[v].push_back(outer[v][e]);
  }
  return out;
}

std::vector<std::vector<Element>> identity_origin(const Instance& inst) {
  std::vector<std::vector<Element>> out(inst.num_vars());
  for (std::size_t v = 0; v < inst.num_vars(); ++v) {
    out[v].resize(inst.domains[v].size());
    std::iota(out[v].begin(), out[v].end(), Element{0});
  }
  return out;
}

bool is_bijection_graph(const Relation& r) {
  const std::size_t na = r.sizes()[0];
  const std::size_t nb = r.sizes()[1];
  if (na != nb || r.size() != na) return false;
  std::vector<bool> ha(na, false), hb(nb, false);
  for (const auto& t : r) {
    if (ha[t[0]] || hb[t[1]]) return false;
    ha[t[0]] = hb[t[1]] = true;
  }
  return true;
}

// Keeps tuples whose every coordinate is allowed, renumbering survivors.
Relation restrict_relation(const Scope& scope, const Relation& rel,
                           const std::vector<std::vector<Element>>& renumber,
                           const std::vector<std::size_t>& new_sizes) {
  constexpr Element kMissing = static_cast<Element>(-1);
  std::vector<Tuple> tuples;
  std::vector<std::size_t> sizes;
  for (auto v : scope) sizes.push_back(new_sizes[v]);
  for (const auto& t : rel) {
    Tuple u(t.size());
    bool keep = true;
    for (std::size_t i = 0; i < t.size() && keep; ++i) {
      u[i] = renumber[scope[i]][t[i]];
      keep = u[i] != kMissing;
    }
    if (keep) tuples.push_back(std::move(u));
  }
  return Relation(std::move(sizes), std::move(tuples));
}

class Pipeline {
 public:
  Pipeline(std::size_t k, IdealMode mode, SolveOutcome& outcome)
      : k_(k), mode_(mode), out_(outcome) {}

  // Solves a nonempty k-minimal state; the assignment is expressed in the
  // domains that `mi.origin` refers to.
  std::vector<Element> run(MinimalizedInstance mi, std::size_t depth) {
    auto& stats = out_.stats;
    stats.max_depth = std::max(stats.max_depth, depth);
    while (true) {
      mi = make_subdirect(mi);
      const std::size_t n = mi.base.num_vars();
      if (n == 0) return {};
      if (n < k_) {
        Scope all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        const Relation& exact = mi.system.at(all);
        ++stats.exact_decisions;
        return lift(mi, exact.tuples().front());
      }
      if (reduce_some_ideal(mi)) continue;
      if (reduce_some_quotient(mi, depth)) continue;
      ++stats.base_cases;
      auto base = base_case_solve(mi);
      if (base.fallback) {
        out_.diagnostics.push_back("base case: classwise assignment failed verification; used brute force");
      }
      return lift(mi, base.assignment);
    }
  }

 private:
  static std::vector<Element> lift(const MinimalizedInstance& mi, std::span<const Element> local) {
    std::vector<Element> out(local.size());
    for (std::size_t v = 0; v < local.size(); ++v) out[v] = mi.origin[v][local[v]];
    return out;
  }

  bool reduce_some_ideal(MinimalizedInstance& mi) {
    for (std::size_t v = 0; v < mi.base.num_vars(); ++v) {
      auto ideal = some_proper_ideal(mi.base.domains[v]);
      if (!ideal) continue;
      mi = reduce_to_ideal(mi, v, *ideal, mode_);
      ++out_.stats.ideal_reductions;
      ++out_.stats.minimalizations;
      return true;
    }
    return false;
  }

  bool reduce_some_quotient(MinimalizedInstance& mi, std::size_t depth) {
    for (std::size_t v = 0; v < mi.base.num_vars(); ++v) {
      if (simplicity(mi.base.domains[v]) != Simplicity::NotSimple) continue;
      auto qr = quotient_reduce(mi, v);
      ++out_.stats.quotient_reductions;
      auto qmi = k_minimalize(collapse(qr.quotient), k_);
      ++out_.stats.minimalizations;
      if (qmi.empty) fail(ErrorKind::LemmaViolation, "quotient of a k-minimal instance emptied");
      const auto qsol = run(std::move(qmi), depth + 1);
      mi = pullback(qr.plan, qsol, mi);
      return true;
    }
    return false;
  }

  std::size_t k_;
  IdealMode mode_;
  SolveOutcome& out_;
};

}  // namespace

std::size_t choose_k(const Instance& inst) {
  std::size_t arity = 0;
  for (const auto& c : inst.constraints) arity = std::max(arity, c.scope.size());
  if (arity <= 3) return 3;
  std::size_t m = 1;
  for (const auto& d : inst.domains) m = std::max(m, d.size());
  return std::max<std::size_t>(3, std::min(arity, m * m));
}

SolveOutcome solve(const Instance& inst, const SolveOptions& options) {
  validate(inst, options.check_invariance);
  for (std::size_t v = 0; v < inst.num_vars(); ++v) {
    auto report = check_cd3(inst.domains[v]);
    if (!report.ok) {
      fail(ErrorKind::NotCd3, "domain of variable " + std::to_string(v) + " fails " + report.failures[0].identity);
    }
  }
  const std::size_t k = options.k.value_or(choose_k(inst));
  if (k < 3) fail(ErrorKind::InvalidArgument, "the decision procedure needs k >= 3");

  SolveOutcome outcome{NoSolution{}, {}, {}};
  outcome.stats.k = k;
  auto mi = k_minimalize(inst, k);
  ++outcome.stats.minimalizations;
  if (mi.empty) {
    outcome.result = NoSolution{mi.certificate};
    return outcome;
  }
  Pipeline pipeline(k, options.mode, outcome);
  auto assignment = pipeline.run(std::move(mi), 0);
  if (!satisfies(inst, assignment)) {
    fail(ErrorKind::LemmaViolation, "assembled assignment does not satisfy the input instance");
  }
  outcome.result = Solution{std::move(assignment)};
  return outcome;
}

void for_each_solution(const Instance& inst,
                       const std::function<bool(std::span<const Element>)>& visit) {
  const std::size_t n = inst.num_vars();
  // Constraints are checked as soon as their last variable is assigned.
  std::vector<std::vector<const Constraint*>> due(n);
  for (const auto& c : inst.constraints) {
    if (!c.scope.empty()) due[c.scope.back()].push_back(&c);
  }
  std::vector<Element> a(n, 0);
  Tuple t;
  auto consistent = [&](std::size_t v) {
    for (const Constraint* c : due[v]) {
      t.resize(c->scope.size());
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = a[c->scope[i]];
      if (!c->relation.contains(t)) return false;
    }
    return true;
  };
  if (n == 0) {
    visit(a);
    return;
  }
  std::size_t v = 0;
  bool fresh = true;
  while (true) {
    if (!fresh) {
      // advance variable v
      if (a[v] + 1 < inst.domains[v].size()) {
        ++a[v];
      } else {
        a[v] = 0;
        if (v == 0) return;
        --v;
        continue;
      }
    }
    fresh = false;
    if (!consistent(v)) continue;
    if (v + 1 == n) {
      if (!visit(a)) return;
      continue;
    }
    ++v;
    a[v] = 0;
    fresh = true;
  }
}

SolveOutcome brute_force_solve(const Instance& inst) {
  validate(inst, false);
  SolveOutcome outcome{NoSolution{}, {}, {}};
  for_each_solution(inst, [&](std::span<const Element> a) {
    outcome.result = Solution{std::vector<Element>(a.begin(), a.end())};
    return false;
  });
  return outcome;
}

// --- Ideal reduction -----------------------------------------------------------

MinimalizedInstance reduce_to_ideal(const MinimalizedInstance& state, std::size_t coord,
                                    const ElementSet& ideal, IdealMode mode, bool verify_invariance) {
  const std::size_t k = state.system.k;
  auto red = build_lambda_J(state.system, state.base.domains, coord, ideal, mode);
  red.verify_invariance = verify_invariance;

  Instance next;
  next.domains = state.base.domains;
  if (mode == IdealMode::Local) {
    for (const auto& c : state.base.constraints) {
      if (c.scope.size() > k) {
        fail(ErrorKind::InvalidArgument, "local ideal reduction needs every scope to have at most k variables");
      }
    }
    for (const auto& [scope, rel] : red.lambda) next.constraints.push_back({scope, rel});
  } else {
    for (const auto& c : collapse(state).constraints) {
      next.constraints.push_back({c.scope, reduce_constraint_RJ(c.relation, c.scope, red)});
    }
  }
  if (!is_k_minimal(next, k)) fail(ErrorKind::LemmaViolation, "ideal-reduced instance is not k-minimal");

  auto mi = k_minimalize(next, k);
  if (mi.empty) fail(ErrorKind::LemmaViolation, "ideal-reduced instance emptied under minimalization");
  mi = make_subdirect(mi);
  if (mi.base.domains[coord].size() != red.ideal.size()) {
    fail(ErrorKind::LemmaViolation, "reduced domain differs from the ideal");
  }
  mi.origin = compose_origin(state.origin, mi.origin);
  return mi;
}

// --- Quotient reduction ----------------------------------------------------------

QuotientReduction quotient_reduce(const MinimalizedInstance& state, std::size_t coord) {
  const auto& domains = state.base.domains;
  const std::size_t n = domains.size();
  if (coord >= n) fail(ErrorKind::InvalidArgument, "coordinate out of range");
  if (state.system.k < 2) fail(ErrorKind::InvalidArgument, "quotient reduction needs k >= 2");
  for (const auto& d : domains) {
    if (!is_jonsson_trivial(d)) fail(ErrorKind::InvalidArgument, "quotient reduction needs Jónsson-trivial domains");
  }
  auto theta1 = maximal_proper_congruence(domains[coord]);
  if (!theta1) fail(ErrorKind::InvalidArgument, "domain " + std::to_string(coord) + " has no proper nontrivial congruence");
  const Quotient top = quotient(domains[coord], *theta1);

  QuotientReduction out;
  QuotientPlan& plan = out.plan;
  plan.coord = coord;
  plan.thetas.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == coord) {
      plan.thetas.push_back(*theta1);
      plan.w.push_back(i);
      plan.maps[i] = top.projection;
      continue;
    }
    const Scope pair = i < coord ? Scope{i, coord} : Scope{coord, i};
    const std::size_t ci = i < coord ? 1 : 0;  // position of coord in the pair
    std::vector<Tuple> tuples;
    for (const auto& t : state.system.at(pair)) tuples.push_back({top.projection[t[ci]], t[1 - ci]});
    const Relation s({top.algebra.size(), domains[i].size()}, std::move(tuples));
    const BinaryShape shape = classify_binary(s, top.algebra, domains[i]);
    if (shape.kind == BinaryShape::Kind::HomGraph) {
      plan.w.push_back(i);
      plan.maps[i] = shape.map;
      plan.thetas.emplace_back(std::vector<std::size_t>(shape.map.begin(), shape.map.end()));
    } else {
      plan.thetas.push_back(Congruence::identity(domains[i].size()));
    }
  }

  std::vector<Quotient> quotients;
  for (std::size_t i = 0; i < n; ++i) quotients.push_back(quotient(domains[i], plan.thetas[i]));
  MinimalizedInstance& q = out.quotient;
  q.system.k = state.system.k;
  for (auto& qt : quotients) q.base.domains.push_back(qt.algebra);
  q.origin = identity_origin(q.base);
  auto image = [&](const Scope& scope, const Relation& rel) {
    std::vector<Tuple> tuples;
    tuples.reserve(rel.size());
    for (const auto& t : rel) {
      Tuple u(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) u[j] = quotients[scope[j]].projection[t[j]];
      tuples.push_back(std::move(u));
    }
    return Relation(q.base.scope_sizes(scope), std::move(tuples));
  };
  for (const auto& c : state.base.constraints) q.base.constraints.push_back({c.scope, image(c.scope, c.relation)});
  for (const auto& [scope, rel] : state.system.entries) q.system.entries.emplace(scope, image(scope, rel));

  for (std::size_t i = 0; i < n; ++i) {
    if (q.system.at({i}).size() != q.base.domains[i].size()) {
      fail(ErrorKind::LemmaViolation, "quotient instance is not subdirect");
    }
    if (!is_jonsson_trivial(q.base.domains[i])) {
      fail(ErrorKind::LemmaViolation, "quotient domain is not Jónsson trivial");
    }
  }
  if (!is_k_minimal(to_instance(q), q.system.k)) fail(ErrorKind::LemmaViolation, "quotient instance is not k-minimal");
  return out;
}

MinimalizedInstance pullback(const QuotientPlan& plan, std::span<const Element> qsol,
                             const MinimalizedInstance& state) {
  const auto& domains = state.base.domains;
  const std::size_t n = domains.size();
  if (qsol.size() != n || plan.thetas.size() != n) fail(ErrorKind::InvalidArgument, "quotient solution has wrong length");
  constexpr Element kMissing = static_cast<Element>(-1);

  MinimalizedInstance out;
  out.system.k = state.system.k;
  std::vector<std::vector<Element>> renumber(n);
  std::vector<std::vector<Element>> inner(n);
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool in_w = std::binary_search(plan.w.begin(), plan.w.end(), i);
    ElementSet keep;
    for (Element e = 0; e < domains[i].size(); ++e) {
      if (!in_w || plan.thetas[i].block_of(e) == qsol[i]) keep.push_back(e);
    }
    if (keep.empty()) fail(ErrorKind::InvalidArgument, "quotient solution names a nonexistent block");
    auto r = restrict(domains[i], keep);
    renumber[i].assign(domains[i].size(), kMissing);
    for (std::size_t j = 0; j < r.embedding.size(); ++j) renumber[i][r.embedding[j]] = static_cast<Element>(j);
    inner[i] = r.embedding;
    sizes[i] = r.algebra.size();
    out.base.domains.push_back(std::move(r.algebra));
  }
  if (out.base.domains[plan.coord].size() >= domains[plan.coord].size()) {
    fail(ErrorKind::LemmaViolation, "pullback did not shrink the distinguished domain");
  }
  for (const auto& c : state.base.constraints) {
    out.base.constraints.push_back({c.scope, restrict_relation(c.scope, c.relation, renumber, sizes)});
    if (out.base.constraints.back().relation.empty()) fail(ErrorKind::LemmaViolation, "pullback emptied a constraint");
  }
  for (const auto& [scope, rel] : state.system.entries) {
    auto r = restrict_relation(scope, rel, renumber, sizes);
    if (r.empty()) fail(ErrorKind::LemmaViolation, "pullback emptied a system entry");
    out.system.entries.emplace(scope, std::move(r));
  }
  if (!is_k_minimal(to_instance(out), out.system.k)) fail(ErrorKind::LemmaViolation, "pullback instance is not k-minimal");
  out.origin = compose_origin(state.origin, inner);
  return out;
}

// --- Base case -------------------------------------------------------------------

AlmostTrivialDecomposition decompose_pairs(std::span<const std::size_t> sizes, const PairRelation& pair) {
  const std::size_t n = sizes.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // linked[i][j] (i < j) holds the bijection A_i -> A_j when i ~ j.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Element>> linked;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Relation r = pair(i, j);
      if (r.size() == sizes[i] * sizes[j]) continue;
      if (!is_bijection_graph(r)) {
        std::ostringstream os;
        os << "projection onto (" << i << ',' << j << ") is neither full nor a bijection graph";
        fail(ErrorKind::LemmaViolation, os.str());
      }
      std::vector<Element> f(sizes[i]);
      for (const auto& t : r) f[t[0]] = t[1];
      linked[{i, j}] = std::move(f);
      const std::size_t a = find(i), b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  AlmostTrivialDecomposition dec;
  std::map<std::size_t, std::size_t> class_of_root;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    auto [it, inserted] = class_of_root.emplace(root, dec.classes.size());
    if (inserted) {
      dec.classes.emplace_back();
      dec.bijections.emplace_back();
    }
    dec.classes[it->second].push_back(i);
  }
  for (std::size_t c = 0; c < dec.classes.size(); ++c) {
    const auto& members = dec.classes[c];
    const std::size_t rep = members[0];
    for (auto m : members) {
      if (m == rep) {
        std::vector<Element> id(sizes[rep]);
        std::iota(id.begin(), id.end(), Element{0});
        dec.bijections[c].push_back(std::move(id));
        continue;
      }
      auto it = linked.find({rep, m});
      if (it == linked.end()) fail(ErrorKind::LemmaViolation, "linkage between coordinates is not transitive");
      dec.bijections[c].push_back(it->second);
    }
    // Every linked pair inside the class must agree with the composition
    // through the representative.
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        auto it = linked.find({members[x], members[y]});
        if (it == linked.end()) fail(ErrorKind::LemmaViolation, "linkage between coordinates is not transitive");
        for (Element a = 0; a < sizes[rep]; ++a) {
          if (it->second[dec.bijections[c][x][a]] != dec.bijections[c][y][a]) {
            fail(ErrorKind::LemmaViolation, "class bijections do not commute");
          }
        }
      }
    }
  }
  return dec;
}

AlmostTrivialDecomposition almost_trivial_decomposition(const Relation& rel) {
  const auto& sizes = rel.sizes();
  auto dec = decompose_pairs(sizes, [&](std::size_t i, std::size_t j) {
    const std::vector<std::size_t> pos{i, j};
    return project(rel, pos);
  });
  std::size_t expected = 1;
  for (const auto& cls : dec.classes) expected *= sizes[cls[0]];
  if (rel.size() != expected) fail(ErrorKind::LemmaViolation, "relation is not the product of its class diagonals");
  for (const auto& t : rel) {
    for (std::size_t c = 0; c < dec.classes.size(); ++c) {
      const Element a = t[dec.classes[c][0]];
      for (std::size_t m = 0; m < dec.classes[c].size(); ++m) {
        if (t[dec.classes[c][m]] != dec.bijections[c][m][a]) {
          fail(ErrorKind::LemmaViolation, "relation tuple leaves a class diagonal");
        }
      }
    }
  }
  return dec;
}

BaseCaseResult base_case_solve(const MinimalizedInstance& state) {
  const auto& domains = state.base.domains;
  const std::size_t n = domains.size();
  if (state.empty) fail(ErrorKind::InvalidArgument, "base case needs a nonempty instance");
  if (state.system.k < 3) fail(ErrorKind::InvalidArgument, "base case needs k >= 3");
  std::vector<std::size_t> sizes;
  for (std::size_t v = 0; v < n; ++v) {
    if (simplicity(domains[v]) == Simplicity::NotSimple || !is_jonsson_trivial(domains[v])) {
      fail(ErrorKind::InvalidArgument, "base case needs simple, Jónsson-trivial domains");
    }
    if (state.system.at({v}).size() != domains[v].size()) fail(ErrorKind::NotSubdirect, "base case needs a subdirect instance");
    sizes.push_back(domains[v].size());
  }
  BaseCaseResult result;
  result.decomposition = decompose_pairs(sizes, [&](std::size_t i, std::size_t j) { return state.system.at({i, j}); });
  result.assignment.assign(n, 0);
  const auto& dec = result.decomposition;
  for (std::size_t c = 0; c < dec.classes.size(); ++c) {
    for (std::size_t m = 0; m < dec.classes[c].size(); ++m) {
      result.assignment[dec.classes[c][m]] = dec.bijections[c][m][0];
    }
  }
  const Instance whole = to_instance(state);
  if (!satisfies(whole, result.assignment)) {
    result.fallback = true;
    auto bf = brute_force_solve(whole);
    if (!bf.satisfiable()) fail(ErrorKind::LemmaViolation, "base-case instance has no solution");
    result.assignment = bf.assignment();
  }
  return result;
}

}  // namespace jcsp
