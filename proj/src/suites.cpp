#include "jcsp/suites.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "jcsp/errors.hpp"
#include "jcsp/generate.hpp"

namespace jcsp {

namespace {

constexpr std::size_t kMaxNotes = 8;

void violation(SuiteReport& r, std::size_t trial, const std::string& what) {
  ++r.violations;
  if (r.notes.size() < kMaxNotes) r.notes.push_back("trial " + std::to_string(trial) + ": " + what);
}

void check(SuiteReport& r, std::size_t trial, bool ok, std::string_view what) {
  ++r.checks;
  if (!ok) violation(r, trial, std::string(what));
}

// Runs f, turning any library error into a counted violation.
template <class F>
bool guarded(SuiteReport& r, std::size_t trial, F&& f) {
  try {
    f();
    return true;
  } catch (const Error& e) {
    ++r.checks;
    violation(r, trial, e.what());
    return false;
  }
}

void summary(SuiteReport& r, const std::string& extra = {}) {
  std::ostringstream os;
  os << r.name << ": " << r.trials << " trials, " << r.checks << " checks, " << r.violations << " violations";
  if (!extra.empty()) os << " (" << extra << ")";
  r.notes.insert(r.notes.begin(), os.str());
}

bool simple_jonsson_trivial(const Algebra& a) {
  return a.size() >= 2 && simplicity(a) != Simplicity::NotSimple && is_jonsson_trivial(a);
}

using Mask = std::uint32_t;

ElementSet to_set(Mask m) {
  ElementSet out;
  for (Element e = 0; m >> e; ++e) {
    if (m >> e & 1U) out.push_back(e);
  }
  return out;
}

Mask to_mask(const ElementSet& s) {
  Mask m = 0;
  for (Element e : s) m |= Mask{1} << e;
  return m;
}

// Every stored operation maps tuples from `m` into `m`.
bool closed_mask(const Algebra& alg, Mask m) {
  const ElementSet elems = to_set(m);
  if (elems.empty()) return true;
  for (const auto& o : alg.ops()) {
    const std::size_t ar = o.table.arity();
    std::vector<std::size_t> idx(ar, 0);
    std::vector<Element> args(ar);
    while (true) {
      for (std::size_t i = 0; i < ar; ++i) args[i] = elems[idx[i]];
      if (!(m >> o.table(args) & 1U)) return false;
      std::size_t p = ar;
      while (p > 0 && ++idx[p - 1] == elems.size()) idx[--p] = 0;
      if (p == 0) break;
    }
  }
  return true;
}

// Closed under the operations and under u * (-) for every u.
bool ideal_mask(const Algebra& alg, Mask m) {
  if (!closed_mask(alg, m)) return false;
  for (Element u = 0; u < alg.size(); ++u) {
    for (Element s : to_set(m)) {
      if (!(m >> alg.p1()(u, s, s) & 1U)) return false;
    }
  }
  return true;
}

Mask least_ideal_oracle(const Algebra& alg, Mask x) {
  const Mask full = (Mask{1} << alg.size()) - 1;
  Mask least = full;
  for (Mask s = 1; s <= full; ++s) {
    if ((s & x) == x && ideal_mask(alg, s)) least &= s;
  }
  return least;
}

// --- partitions ------------------------------------------------------------------

void partitions_from(std::size_t i, std::size_t labels, std::vector<std::size_t>& rgs,
                     std::vector<std::vector<std::size_t>>& out) {
  if (i == rgs.size()) {
    out.push_back(rgs);
    return;
  }
  for (std::size_t l = 0; l <= labels; ++l) {
    rgs[i] = l;
    partitions_from(i + 1, std::max(labels, l + 1), rgs, out);
  }
}

// Restricted growth strings: every partition of {0..n-1} exactly once.
std::vector<std::vector<std::size_t>> all_partitions(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> rgs(n, 0);
  if (n == 0) return {rgs};
  rgs[0] = 0;
  partitions_from(1, 1, rgs, out);
  return out;
}

// Compatibility checked one argument position at a time.
bool congruence_oracle(const Algebra& alg, const std::vector<std::size_t>& labels) {
  const std::size_t n = alg.size();
  for (const auto& o : alg.ops()) {
    const std::size_t ar = o.table.arity();
    std::vector<Element> args(ar, 0), alt(ar);
    while (true) {
      for (std::size_t pos = 0; pos < ar; ++pos) {
        alt = args;
        for (Element b = 0; b < n; ++b) {
          if (labels[b] != labels[args[pos]]) continue;
          alt[pos] = b;
          if (labels[o.table(args)] != labels[o.table(alt)]) return false;
        }
      }
      std::size_t p = ar;
      while (p > 0 && ++args[p - 1] == n) args[--p] = 0;
      if (p == 0) break;
    }
  }
  return true;
}

Congruence meet(const Congruence& a, const Congruence& b) {
  std::vector<std::size_t> labels(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) labels[i] = a.block_of(static_cast<Element>(i)) * a.size() + b.block_of(static_cast<Element>(i));
  return Congruence(std::move(labels));
}

// Least congruence in `cons` above every pair related by `x` or `y`.
Congruence least_above(const std::vector<Congruence>& cons, const Congruence& x, const Congruence& y) {
  Congruence out = Congruence::total(x.size());
  for (const auto& c : cons) {
    if (x.refines(c) && y.refines(c)) out = meet(out, c);
  }
  return out;
}

Congruence pair_partition(std::size_t n, Element a, Element b) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  labels[b] = labels[a];
  return Congruence(std::move(labels));
}

// --- small subuniverse enumeration for A x B -------------------------------------

std::vector<Mask> binary_subdirect_subuniverses(const Algebra& a, const Algebra& b) {
  const Algebra p = product(a, b);
  const std::size_t nb = b.size();
  const std::size_t bits = p.size();
  std::vector<Mask> out;
  for (Mask m = 1; m < (Mask{1} << bits); ++m) {
    Mask left = 0, right = 0;
    for (std::size_t i = 0; i < bits; ++i) {
      if (m >> i & 1U) {
        left |= Mask{1} << (i / nb);
        right |= Mask{1} << (i % nb);
      }
    }
    if (std::popcount(left) != static_cast<int>(a.size()) || std::popcount(right) != static_cast<int>(nb)) continue;
    if (closed_mask(p, m)) out.push_back(m);
  }
  return out;
}

Relation mask_relation(Mask m, std::size_t na, std::size_t nb) {
  std::vector<Tuple> tuples;
  for (std::size_t i = 0; i < na * nb; ++i) {
    if (m >> i & 1U) tuples.push_back({static_cast<Element>(i / nb), static_cast<Element>(i % nb)});
  }
  return Relation({na, nb}, std::move(tuples));
}

void check_classification(SuiteReport& r, std::size_t trial, const Relation& s, const Algebra& a, const Algebra& b) {
  guarded(r, trial, [&] {
    const BinaryShape shape = classify_binary(s, a, b);
    if (shape.kind == BinaryShape::Kind::Full) {
      check(r, trial, s.size() == a.size() * b.size(), "Full reported for a proper relation");
      return;
    }
    check(r, trial, shape.map.size() == b.size(), "map has wrong length");
    std::vector<Tuple> graph;
    std::vector<bool> hit(a.size(), false);
    for (Element e = 0; e < b.size(); ++e) {
      graph.push_back({shape.map[e], e});
      hit[shape.map[e]] = true;
    }
    check(r, trial, std::all_of(hit.begin(), hit.end(), [](bool h) { return h; }), "map is not onto");
    check(r, trial, Relation({a.size(), b.size()}, graph) == s, "relation is not the graph of the map");
    for (const auto& o : b.ops()) {
      const auto& oa = a.op(o.name);
      bool hom = true;
      for (Element x = 0; x < b.size(); ++x)
        for (Element y = 0; y < b.size(); ++y)
          for (Element z = 0; z < b.size(); ++z)
            hom = hom && shape.map[o.table(x, y, z)] == oa(shape.map[x], shape.map[y], shape.map[z]);
      check(r, trial, hom, "map is not a homomorphism");
    }
  });
}

// Rebuilds the relation from a decomposition and compares, and checks every
// binary projection against the claimed shape.
void check_decomposition(SuiteReport& r, std::size_t trial, const Relation& s) {
  guarded(r, trial, [&] {
    const auto dec = almost_trivial_decomposition(s);
    const auto& sizes = s.sizes();
    const std::size_t m = sizes.size();
    std::vector<std::size_t> cls(m), member(m);
    for (std::size_t c = 0; c < dec.classes.size(); ++c) {
      for (std::size_t j = 0; j < dec.classes[c].size(); ++j) {
        cls[dec.classes[c][j]] = c;
        member[dec.classes[c][j]] = j;
      }
    }
    std::vector<Tuple> tuples;
    std::vector<Element> v(dec.classes.size(), 0);
    while (true) {
      Tuple t(m);
      for (std::size_t i = 0; i < m; ++i) t[i] = dec.bijections[cls[i]][member[i]][v[cls[i]]];
      tuples.push_back(std::move(t));
      std::size_t p = v.size();
      while (p > 0 && ++v[p - 1] == sizes[dec.classes[p - 1][0]]) v[--p] = 0;
      if (p == 0) break;
    }
    check(r, trial, Relation(sizes, std::move(tuples)) == s, "relation differs from its block product");
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const std::vector<std::size_t> pos{i, j};
        const Relation pr = project(s, pos);
        if (cls[i] != cls[j]) {
          check(r, trial, pr.size() == sizes[i] * sizes[j], "cross-class projection is not full");
        } else {
          check(r, trial, pr.size() == sizes[i] && sizes[i] == sizes[j], "in-class projection is not a bijection");
        }
      }
    }
  });
}

std::vector<Algebra> simple_jt_pool(std::uint64_t seed, std::size_t want) {
  std::vector<Algebra> pool{dd2()};
  for (std::size_t i = 0; pool.size() < want + 1 && i < 400; ++i) {
    Rng rng(derive_seed(seed, 1'000'000 + i));
    Algebra a = gen_cd3_algebra(3, rng);
    if (simple_jonsson_trivial(a)) pool.push_back(std::move(a));
  }
  return pool;
}

std::vector<Element> lift(const MinimalizedInstance& mi, std::span<const Element> local) {
  std::vector<Element> out(local.size());
  for (std::size_t v = 0; v < local.size(); ++v) out[v] = mi.origin[v][local[v]];
  return out;
}

std::size_t total_size(const Instance& inst) {
  std::size_t s = 0;
  for (const auto& d : inst.domains) s += d.size();
  return s;
}

}  // namespace

// --- Algebra-level suites ---------------------------------------------------------

SuiteReport ideal_suite(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"ideal", 0, 0, 0, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    const Algebra a = gen_cd3_algebra(rng.between(1, 4), rng);
    ++r.trials;
    guarded(r, t, [&] {
      const Mask full = (Mask{1} << a.size()) - 1;
      for (Mask x = 1; x <= full; ++x) {
        const Mask want = least_ideal_oracle(a, x);
        check(r, t, to_mask(jonsson_ideal(a, to_set(x))) == want, "jonsson_ideal differs from the least closed superset");
        check(r, t, is_jonsson_ideal(a, to_set(x)) == ideal_mask(a, x), "is_jonsson_ideal disagrees with the oracle");
      }
      bool trivial = true;
      std::optional<Mask> best;
      for (Element b = 0; b < a.size(); ++b) {
        const Mask m = least_ideal_oracle(a, Mask{1} << b);
        if (m == full) continue;
        trivial = false;
        if (!best || std::popcount(m) < std::popcount(*best)) best = m;
      }
      check(r, t, is_jonsson_trivial(a) == trivial, "is_jonsson_trivial disagrees with the oracle");
      const auto got = some_proper_ideal(a);
      check(r, t, got.has_value() == best.has_value() && (!got || to_mask(*got) == *best),
            "some_proper_ideal is not the smallest singleton-generated ideal");
    });
  }
  summary(r);
  return r;
}

SuiteReport congruence_suite(std::size_t seeds, std::uint64_t seed) {
  SuiteReport r{"congruence", 0, 0, 0, {}};
  for (std::size_t s = 0; s < seeds; ++s) {
    std::vector<Algebra> algs;
    Rng rng(derive_seed(seed, s));
    for (std::size_t n = 1; n <= 4; ++n) algs.push_back(gen_cd3_algebra(n, rng));
    if (s == 0) {
      algs.push_back(maj2());
      algs.push_back(dd2());
      algs.push_back(product(maj2(), maj2()));
      algs.push_back(product(dd2(), dd2()));
      algs.push_back(product(maj2(), dd2()));
    }
    for (const auto& a : algs) {
      ++r.trials;
      guarded(r, s, [&] {
        const std::size_t n = a.size();
        std::vector<Congruence> cons;
        for (const auto& p : all_partitions(n)) {
          const bool oracle = congruence_oracle(a, p);
          const Congruence c(p);
          check(r, s, is_congruence(a, c) == oracle, "is_congruence disagrees with the oracle");
          if (oracle) cons.push_back(c);
        }
        const Congruence zero = Congruence::identity(n);
        for (Element x = 0; x < n; ++x) {
          for (Element y = x; y < n; ++y) {
            const Congruence want = least_above(cons, zero, pair_partition(n, x, y));
            check(r, s, principal_congruence(a, x, y) == want, "principal congruence differs from the oracle");
          }
        }
        // The lexicographic scan, replayed with oracle joins.
        Congruence theta = zero;
        for (Element x = 0; x < n; ++x) {
          for (Element y = x + 1; y < n; ++y) {
            if (theta.related(x, y)) continue;
            Congruence cand = least_above(cons, theta, least_above(cons, zero, pair_partition(n, x, y)));
            if (!cand.is_total()) theta = std::move(cand);
          }
        }
        const auto got = maximal_proper_congruence(a);
        if (theta.is_identity()) {
          check(r, s, !got.has_value(), "maximal proper congruence reported for a simple algebra");
        } else {
          check(r, s, got.has_value() && *got == theta, "maximal proper congruence differs from the replayed scan");
          bool maximal = true;
          for (const auto& c : cons) {
            if (!c.is_total() && c != theta && theta.refines(c)) maximal = false;
          }
          check(r, s, maximal, "scan result is not maximal among proper congruences");
        }
        const Simplicity want = n == 1 ? Simplicity::Trivial : (cons.size() == 2 ? Simplicity::Simple : Simplicity::NotSimple);
        check(r, s, simplicity(a) == want, "simplicity disagrees with the oracle");
      });
    }
  }
  summary(r);
  return r;
}

SuiteReport distance_suite(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"distance", 0, 0, 0, {}};
  std::size_t attempt = 0;
  for (; r.trials < trials && attempt < trials * 200; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    const Algebra a = gen_cd3_algebra(rng.between(2, 3), rng);
    const Algebra b = gen_cd3_algebra(rng.between(1, 3), rng);
    const std::vector<Algebra> ab{a, b};
    std::vector<Tuple> seeds(rng.between(1, 4));
    for (auto& t : seeds) t = {static_cast<Element>(rng.below(a.size())), static_cast<Element>(rng.below(b.size()))};
    const Relation s = generated_subpower(ab, seeds);
    if (!is_subdirect(s, ab)) continue;
    const DistanceProfile prof = distance_profile(s);
    if (!prof.connected()) continue;
    ++r.trials;
    const std::size_t t = attempt;
    guarded(r, t, [&] {
      const std::vector<Algebra> aa{a, a};
      for (const auto& layer : prof.layers()) {
        bool refl = true, sym = true;
        for (Element x = 0; x < a.size(); ++x) refl = refl && layer.contains(std::vector<Element>{x, x});
        for (const auto& p : layer) sym = sym && layer.contains(std::vector<Element>{p[1], p[0]});
        check(r, t, refl, "layer is not reflexive");
        check(r, t, sym, "layer is not symmetric");
        check(r, t, is_invariant(layer, aa), "layer is not a subuniverse of A^2");
      }
      for (Element x = 0; x < a.size(); ++x) {
        for (Element y = 0; y < a.size(); ++y) {
          for (Element z = 0; z < a.size(); ++z) {
            const std::size_t dxy = *prof.distance(x, y);
            const std::size_t dyz = *prof.distance(y, z);
            const std::size_t lhs = *prof.distance(mult(a, x, y), z);
            check(r, t, lhs <= std::max((dxy + 1) / 2, dyz), "d(x*y, z) exceeds the bound");
          }
        }
      }
      if (is_jonsson_trivial(a)) {
        check(r, t, prof.layers()[1].size() == a.size() * a.size(), "Jónsson-trivial connected A has S1 != A^2");
      }
    });
  }
  summary(r, std::to_string(attempt) + " relations drawn");
  return r;
}

SuiteReport connected_simple_suite(std::size_t seeds, std::uint64_t seed) {
  SuiteReport r{"connected-simple", 0, 0, 0, {}};
  std::vector<Algebra> pool{dd2(), maj2()};
  for (std::size_t s = 0; s < seeds; ++s) {
    Rng rng(derive_seed(seed, s));
    pool.push_back(gen_cd3_algebra(2, rng));
    pool.push_back(gen_cd3_algebra(3, rng));
  }
  std::size_t candidates = 0;
  for (std::size_t ia = 0; ia < pool.size(); ++ia) {
    const Algebra& a = pool[ia];
    if (!simple_jonsson_trivial(a)) continue;
    ++candidates;
    for (std::size_t ib = 0; ib < pool.size(); ++ib) {
      const Algebra& b = pool[ib];
      for (Mask m : binary_subdirect_subuniverses(a, b)) {
        ++r.trials;
        check_classification(r, ia * pool.size() + ib, mask_relation(m, a.size(), b.size()), a, b);
      }
    }
  }
  summary(r, std::to_string(candidates) + " simple Jónsson-trivial algebras, pool of " + std::to_string(pool.size()));
  return r;
}

SuiteReport almost_trivial_suite(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"almost-trivial", 0, 0, 0, {}};
  const auto pool = simple_jt_pool(seed, 5);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = 0; j < pool.size(); ++j) {
      for (Mask m : binary_subdirect_subuniverses(pool[i], pool[j])) {
        ++r.trials;
        check_decomposition(r, i * pool.size() + j, mask_relation(m, pool[i].size(), pool[j].size()));
      }
    }
  }
  const std::size_t exhaustive = r.trials;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    std::vector<Algebra> factors(rng.between(2, 4), pool[0]);
    for (auto& f : factors) f = pool[rng.below(pool.size())];
    std::vector<Tuple> seeds(rng.between(1, 4), Tuple(factors.size()));
    for (auto& tup : seeds) {
      for (std::size_t i = 0; i < factors.size(); ++i) tup[i] = static_cast<Element>(rng.below(factors[i].size()));
    }
    const Relation s = generated_subpower(factors, seeds);
    if (!is_subdirect(s, factors)) continue;
    ++r.trials;
    check_decomposition(r, t, s);
  }
  summary(r, std::to_string(exhaustive) + " binary relations enumerated exhaustively, pool of " +
                 std::to_string(pool.size()));
  return r;
}

// --- Reduction suites -------------------------------------------------------------

SuiteReport gamma_j_suite(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"gamma-j", 0, 0, 0, {}};
  std::size_t attempt = 0, ideals = 0;
  for (; r.trials < trials && attempt < trials * 100; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    Algebra alg = gen_cd3_algebra(rng.between(2, 3), rng);
    if (!some_proper_ideal(alg)) continue;
    GeneratorConfig cfg;
    cfg.num_vars = rng.between(3, 5);
    cfg.num_constraints = rng.between(2, 5);
    cfg.max_arity = 3;
    cfg.subpower_seed_count = rng.between(1, 3);
    const std::vector<Algebra> domains(cfg.num_vars, alg);
    const Instance inst = gen_instance(domains, cfg, rng);
    auto mi = k_minimalize(inst, 3);
    if (mi.empty) continue;
    mi = make_subdirect(mi);
    std::vector<std::pair<std::size_t, ElementSet>> targets;
    for (std::size_t v = 0; v < mi.base.num_vars(); ++v) {
      if (auto j = some_proper_ideal(mi.base.domains[v])) targets.emplace_back(v, *j);
    }
    if (targets.empty()) continue;
    ++r.trials;
    const std::size_t t = attempt;
    for (const auto& [coord, ideal] : targets) {
      ++ideals;
      guarded(r, t, [&] {
        const auto red = build_lambda_J(mi.system, mi.base.domains, coord, ideal);
        for (const auto& [scope, lam] : red.lambda) {
          check(r, t, !lam.empty(), "empty Λ_J entry");
          bool inside = true;
          for (const auto& tup : lam) inside = inside && mi.system.at(scope).contains(tup);
          check(r, t, inside, "Λ_J entry leaves Λ");
          const auto pos = std::find(scope.begin(), scope.end(), coord);
          if (pos != scope.end()) {
            const std::vector<std::size_t> p{static_cast<std::size_t>(pos - scope.begin())};
            ElementSet seen;
            for (const auto& tup : project(lam, p)) seen.push_back(tup[0]);
            check(r, t, seen == ideal, "projection onto the ideal coordinate is not J");
          }
          check(r, t, is_invariant(lam, mi.base.scope_algebras(scope)), "Λ_J entry is not a subuniverse");
        }
        for (auto it = red.lambda.begin(); it != red.lambda.end(); ++it) {
          for (auto jt = std::next(it); jt != red.lambda.end(); ++jt) {
            Scope common;
            std::set_intersection(it->first.begin(), it->first.end(), jt->first.begin(), jt->first.end(),
                                  std::back_inserter(common));
            if (common.empty()) continue;
            check(r, t,
                  project(it->second, positions_in(it->first, common)) ==
                      project(jt->second, positions_in(jt->first, common)),
                  "Λ_J entries disagree on an overlap");
          }
        }
      });
    }
  }
  summary(r, std::to_string(ideals) + " ideal reductions over " + std::to_string(attempt) + " instances drawn");
  return r;
}

SuiteReport rj_suite(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"rj", 0, 0, 0, {}};
  constexpr std::size_t k = 4;
  std::size_t attempt = 0, relations = 0;
  for (; r.trials < trials && attempt < trials * 200; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    Algebra alg = gen_cd3_algebra(2, rng);
    if (!some_proper_ideal(alg)) continue;
    GeneratorConfig cfg;
    cfg.num_vars = rng.between(5, 7);
    cfg.num_constraints = rng.between(1, 3);
    cfg.min_arity = 5;
    cfg.max_arity = std::min<std::size_t>(6, cfg.num_vars);
    cfg.subpower_seed_count = rng.between(1, 3);
    const std::vector<Algebra> domains(cfg.num_vars, alg);
    const Instance inst = gen_instance(domains, cfg, rng);
    auto mi = k_minimalize(inst, k);
    if (mi.empty) continue;
    mi = make_subdirect(mi);
    std::optional<std::pair<std::size_t, ElementSet>> target;
    for (std::size_t v = 0; v < mi.base.num_vars() && !target; ++v) {
      if (auto j = some_proper_ideal(mi.base.domains[v])) target.emplace(v, *j);
    }
    if (!target) continue;
    ++r.trials;
    const std::size_t t = attempt;
    guarded(r, t, [&] {
      auto red = build_lambda_J(mi.system, mi.base.domains, target->first, target->second, IdealMode::Global);
      red.verify_invariance = true;
      for (const auto& c : mi.base.constraints) {
        if (c.scope.size() < k) continue;
        ++relations;
        const Relation rj = reduce_constraint_RJ(c.relation, c.scope, red);
        check(r, t, !rj.empty(), "R_J is empty");
        check(r, t, is_invariant(rj, mi.base.scope_algebras(c.scope)), "R_J is not a subuniverse");
        std::vector<Tuple> direct;
        std::vector<Scope> ksets;
        std::vector<bool> pick(c.scope.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
          Scope s;
          for (std::size_t i = 0; i < pick.size(); ++i) {
            if (pick[i]) s.push_back(c.scope[i]);
          }
          ksets.push_back(std::move(s));
        } while (std::prev_permutation(pick.begin(), pick.end()));
        for (const auto& tup : c.relation) {
          bool keep = true;
          for (const auto& s : ksets) {
            Tuple sub;
            for (auto p : positions_in(c.scope, s)) sub.push_back(tup[p]);
            keep = keep && red.lambda.at(s).contains(sub);
          }
          if (keep) direct.push_back(tup);
        }
        check(r, t, Relation(c.relation.sizes(), direct) == rj, "R_J differs from the direct filter");
        for (const auto& s : ksets) {
          check(r, t, project(rj, positions_in(c.scope, s)) == red.lambda.at(s), "proj_I(R_J) != Λ_J(I)");
        }
      }
    });
  }
  summary(r, std::to_string(relations) + " relations reduced over " + std::to_string(attempt) + " instances drawn");
  return r;
}

SuiteReport pullback_suite(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"pullback", 0, 0, 0, {}};
  const std::vector<Algebra> menu{product(dd2(), dd2()), product(dd2(), dd2()), dd2(), product(maj2(), maj2())};
  std::size_t attempt = 0, quotients = 0;
  for (; r.trials < trials && attempt < trials * 100; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    GeneratorConfig cfg;
    cfg.num_vars = rng.between(3, 4);
    cfg.num_constraints = rng.between(2, 4);
    cfg.max_arity = 3;
    cfg.subpower_seed_count = rng.between(1, 3);
    std::vector<Algebra> domains{menu[0]};
    while (domains.size() < cfg.num_vars) domains.push_back(menu[rng.below(menu.size())]);
    const Instance inst = gen_instance(domains, cfg, rng);
    const std::size_t t = attempt;
    auto mi = k_minimalize(inst, 3);
    if (mi.empty) continue;
    guarded(r, t, [&] {
      const auto out = solve(inst);
      quotients += out.stats.quotient_reductions;
      check(r, t, out.satisfiable() && satisfies(inst, out.assignment()), "solver fails on a 3-minimal nonempty instance");
    });
    bool usable = guarded(r, t, [&] {
      mi = make_subdirect(mi);
      for (bool again = true; again;) {
        again = false;
        for (std::size_t v = 0; v < mi.base.num_vars() && !again; ++v) {
          if (auto j = some_proper_ideal(mi.base.domains[v])) {
            mi = reduce_to_ideal(mi, v, *j);
            again = true;
          }
        }
      }
    });
    if (!usable) {
      ++r.trials;
      continue;
    }
    std::optional<std::size_t> coord;
    for (std::size_t v = 0; v < mi.base.num_vars() && !coord; ++v) {
      if (simplicity(mi.base.domains[v]) == Simplicity::NotSimple) coord = v;
    }
    if (!coord) continue;
    ++r.trials;
    guarded(r, t, [&] {
      const auto qr = quotient_reduce(mi, *coord);
      const auto& plan = qr.plan;
      check(r, t, std::binary_search(plan.w.begin(), plan.w.end(), *coord), "coord is not in W");
      const std::size_t top = plan.thetas[*coord].block_count();
      for (const auto& [i, map] : plan.maps) {
        ElementSet image(map.begin(), map.end());
        image = make_element_set(image);
        check(r, t, image.size() == top, "π_i is not onto");
        check(r, t, plan.thetas[i] == Congruence(std::vector<std::size_t>(map.begin(), map.end())), "θ_i != ker π_i");
      }
      for (std::size_t i = 0; i < plan.thetas.size(); ++i) {
        check(r, t, is_congruence(mi.base.domains[i], plan.thetas[i]), "θ_i is not a congruence");
      }
      const auto qs = brute_force_solve(collapse(qr.quotient));
      check(r, t, qs.satisfiable(), "k-minimal quotient instance has no solution");
      if (!qs.satisfiable()) return;
      const auto pb = pullback(plan, qs.assignment(), mi);
      const Instance whole = to_instance(pb);
      check(r, t, pb.base.domains[*coord].size() < mi.base.domains[*coord].size(), "coord domain did not shrink");
      check(r, t, total_size(pb.base) < total_size(mi.base), "total domain size did not decrease");
      check(r, t, is_k_minimal(whole, 3), "pullback is not 3-minimal");
      bool nonempty = true;
      for (const auto& c : whole.constraints) nonempty = nonempty && !c.relation.empty();
      check(r, t, nonempty, "pullback has an empty relation");
      std::size_t found = 0;
      bool sound = true;
      for_each_solution(whole, [&](std::span<const Element> a) {
        sound = sound && satisfies(inst, lift(pb, a));
        return ++found < 5000;
      });
      check(r, t, found > 0, "pullback instance has no solution");
      check(r, t, sound, "a pullback solution does not solve the original instance");
    });
  }
  summary(r, std::to_string(attempt) + " instances drawn, " + std::to_string(quotients) +
                 " quotient reductions inside full solves");
  return r;
}

// --- Instance-level suites --------------------------------------------------------

Instance compare_instance(const CompareConfig& cfg, std::size_t trial) {
  const std::size_t ai = cfg.algebras == 0 ? 0 : trial % cfg.algebras;
  Rng arng(derive_seed(cfg.seed, 0x100000 + ai));
  const std::size_t size = cfg.size != 0 ? cfg.size : arng.between(2, 3);
  const Algebra alg = gen_cd3_algebra(size, arng);
  Rng rng(derive_seed(cfg.seed, trial));
  GeneratorConfig g;
  g.num_vars = rng.between(1, cfg.max_vars);
  g.num_constraints = rng.between(1, cfg.max_constraints);
  g.max_arity = std::min(cfg.max_arity, g.num_vars);
  g.subpower_seed_count = rng.between(1, cfg.max_seed_count);
  const std::vector<Algebra> domains(g.num_vars, alg);
  return gen_instance(domains, g, rng);
}

SuiteReport compare_suite(const CompareConfig& cfg, std::vector<TrialVerdict>* verdicts) {
  SuiteReport r{"compare", 0, 0, 0, {}};
  std::size_t sat = 0, ideals = 0, quotients = 0, bases = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const Instance inst = compare_instance(cfg, t);
    ++r.trials;
    TrialVerdict v;
    v.trial = t;
    const std::size_t before = r.violations;
    guarded(r, t, [&] {
      const auto bf = brute_force_solve(inst);
      v.oracle_sat = bf.satisfiable();
      const auto out = solve(inst);
      v.solver_sat = out.satisfiable();
      v.agree = v.solver_sat == v.oracle_sat && (!v.solver_sat || satisfies(inst, out.assignment()));
      check(r, t, v.agree, v.solver_sat == v.oracle_sat ? "solver assignment fails the instance" : "solver and oracle disagree");
      check(r, t, out.diagnostics.empty(), "base case needed the brute-force fallback");
      sat += v.oracle_sat ? 1 : 0;
      ideals += out.stats.ideal_reductions;
      quotients += out.stats.quotient_reductions;
      bases += out.stats.base_cases;
    });
    if (r.violations != before && v.error.empty() && !r.notes.empty()) v.error = r.notes.back();
    if (verdicts) verdicts->push_back(v);
  }
  summary(r, std::to_string(sat) + " satisfiable; " + std::to_string(ideals) + " ideal reductions, " +
                 std::to_string(quotients) + " quotient reductions, " + std::to_string(bases) + " base cases");
  return r;
}

SuiteReport width_suite(const CompareConfig& cfg) {
  SuiteReport r{"width", 0, 0, 0, {}};
  std::size_t nonempty = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const Instance inst = compare_instance(cfg, t);
    ++r.trials;
    guarded(r, t, [&] {
      const auto mi = k_minimalize(inst, 3);
      if (mi.empty) return;
      ++nonempty;
      check(r, t, brute_force_solve(inst).satisfiable(), "3-minimal nonempty instance has no solution");
    });
  }
  summary(r, std::to_string(nonempty) + " instances nonempty after 3-minimalization");
  return r;
}

SuiteReport two_sat_suite(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"two-sat", 0, 0, 0, {}};
  const Algebra m2 = maj2();
  std::size_t sat = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    const std::size_t n = rng.between(2, 8);
    const std::size_t clauses = rng.between(n, 3 * n);
    Instance inst;
    inst.domains.assign(n, m2);
    // reach[u][v]: literal node u = 2*var + value implies node v
    std::vector<std::vector<bool>> reach(2 * n, std::vector<bool>(2 * n, false));
    for (std::size_t u = 0; u < 2 * n; ++u) reach[u][u] = true;
    for (std::size_t c = 0; c < clauses; ++c) {
      if (rng.below(6) == 0) {
        const std::size_t v = rng.below(n);
        const auto s = static_cast<Element>(rng.below(2));
        inst.constraints.push_back({{v}, Relation({2}, {{s}})});
        reach[2 * v + (1 - s)][2 * v + s] = true;
        continue;
      }
      std::size_t i = rng.below(n), j = rng.below(n - 1);
      if (j >= i) ++j;
      if (i > j) std::swap(i, j);
      const auto si = static_cast<Element>(rng.below(2));
      const auto sj = static_cast<Element>(rng.below(2));
      std::vector<Tuple> tuples;
      for (Element a = 0; a < 2; ++a) {
        for (Element b = 0; b < 2; ++b) {
          if (a == si || b == sj) tuples.push_back({a, b});
        }
      }
      inst.constraints.push_back({{i, j}, Relation({2, 2}, std::move(tuples))});
      reach[2 * i + (1 - si)][2 * j + sj] = true;
      reach[2 * j + (1 - sj)][2 * i + si] = true;
    }
    for (std::size_t w = 0; w < 2 * n; ++w)
      for (std::size_t u = 0; u < 2 * n; ++u)
        for (std::size_t v = 0; v < 2 * n; ++v)
          if (reach[u][w] && reach[w][v]) reach[u][v] = true;
    bool implication_sat = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (reach[2 * v][2 * v + 1] && reach[2 * v + 1][2 * v]) implication_sat = false;
    }
    ++r.trials;
    guarded(r, t, [&] {
      const auto bf = brute_force_solve(inst);
      const auto out = solve(inst);
      check(r, t, bf.satisfiable() == implication_sat, "brute force and implication graph disagree");
      check(r, t, out.satisfiable() == bf.satisfiable(), "solver and oracle disagree");
      if (out.satisfiable()) check(r, t, satisfies(inst, out.assignment()), "solver assignment fails the formula");
      sat += bf.satisfiable() ? 1 : 0;
    });
  }
  summary(r, std::to_string(sat) + " satisfiable");
  return r;
}

std::vector<std::string> suite_names() {
  return {"ideal", "congruence", "distance", "connected-simple", "almost-trivial", "gamma-j",
          "rj",    "pullback",   "two-sat",  "compare",          "width"};
}

SuiteReport run_suite(std::string_view name, std::size_t trials, std::uint64_t seed) {
  if (name == "ideal") return ideal_suite(trials, seed);
  if (name == "congruence") return congruence_suite(trials, seed);
  if (name == "distance") return distance_suite(trials, seed);
  if (name == "connected-simple") return connected_simple_suite(trials, seed);
  if (name == "almost-trivial") return almost_trivial_suite(trials, seed);
  if (name == "gamma-j") return gamma_j_suite(trials, seed);
  if (name == "rj") return rj_suite(trials, seed);
  if (name == "pullback") return pullback_suite(trials, seed);
  if (name == "two-sat") return two_sat_suite(trials, seed);
  CompareConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  if (name == "compare") return compare_suite(cfg);
  if (name == "width") return width_suite(cfg);
  fail(ErrorKind::InvalidArgument, "unknown suite '" + std::string(name) + "'");
}

}  // namespace jcsp
