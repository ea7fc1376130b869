#include "jcsp/relation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "jcsp/detail/closure.hpp"
#include "jcsp/errors.hpp"

namespace jcsp {

namespace {

void check_ranges(const std::vector<std::size_t>& sizes, const Tuple& t) {
  if (t.size() != sizes.size()) fail(ErrorKind::InvalidArgument, "tuple arity does not match signature");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= sizes[i]) {
      std::ostringstream os;
      os << "tuple coordinate " << i << " value " << t[i] << " outside domain of size " << sizes[i];
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
}

void check_signature(std::span<const Algebra> algebras) {
  for (std::size_t i = 1; i < algebras.size(); ++i) {
    if (!same_signature(algebras[0], algebras[i])) {
      fail(ErrorKind::DomainMismatch, "coordinate algebras are not similar");
    }
  }
}

}  // namespace

Relation::Relation(std::vector<std::size_t> sizes, std::vector<Tuple> tuples)
    : sizes_(std::move(sizes)), tuples_(std::move(tuples)) {
  for (const auto& t : tuples_) check_ranges(sizes_, t);
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

Relation Relation::full(std::vector<std::size_t> sizes) {
  std::vector<Tuple> tuples;
  Tuple t(sizes.size(), 0);
  for (auto s : sizes) {
    if (s == 0) return Relation(std::move(sizes), {});
  }
  while (true) {
    tuples.push_back(t);
    std::size_t j = t.size();
    while (j > 0 && t[j - 1] + 1 == sizes[j - 1]) t[--j] = 0;
    if (j == 0) break;
    ++t[j - 1];
  }
  Relation r;
  r.sizes_ = std::move(sizes);
  r.tuples_ = std::move(tuples);  // generated in lexicographic order
  return r;
}

bool Relation::contains(std::span<const Element> t) const {
  return std::binary_search(tuples_.begin(), tuples_.end(), t,
                            [](const auto& a, const auto& b) {
                              return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                  b.end());
                            });
}

std::size_t Relation::product_size() const {
  std::size_t p = 1;
  for (auto s : sizes_) p *= s;
  return p;
}

Relation project(const Relation& rel, std::span<const std::size_t> positions) {
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] >= rel.arity() || (i > 0 && positions[i] <= positions[i - 1])) {
      fail(ErrorKind::InvalidArgument, "projection positions must be increasing and in range");
    }
    sizes.push_back(rel.sizes()[positions[i]]);
  }
  std::vector<Tuple> out;
  out.reserve(rel.size());
  for (const auto& t : rel) {
    Tuple p(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) p[i] = t[positions[i]];
    out.push_back(std::move(p));
  }
  return Relation(std::move(sizes), std::move(out));
}

Relation intersect(const Relation& a, const Relation& b) {
  if (a.sizes() != b.sizes()) fail(ErrorKind::DomainMismatch, "intersection of relations with different signatures");
  std::vector<Tuple> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Relation(a.sizes(), std::move(out));
}

Relation semijoin(const Relation& rel, std::span<const std::size_t> positions,
                  const Relation& filter) {
  std::vector<Tuple> out;
  Tuple p(positions.size());
  for (const auto& t : rel) {
    for (std::size_t i = 0; i < positions.size(); ++i) p[i] = t[positions[i]];
    if (filter.contains(p)) out.push_back(t);
  }
  return Relation(rel.sizes(), std::move(out));
}

std::vector<std::size_t> positions_in(const Scope& scope, const Scope& sub) {
  std::vector<std::size_t> pos;
  pos.reserve(sub.size());
  std::size_t j = 0;
  for (auto v : sub) {
    while (j < scope.size() && scope[j] < v) ++j;
    if (j == scope.size() || scope[j] != v) fail(ErrorKind::InvalidArgument, "subset is not contained in scope");
    pos.push_back(j);
  }
  return pos;
}

ScopedRelation natural_join(const ScopedRelation& r1, const ScopedRelation& r2) {
  Scope scope;
  std::set_union(r1.scope.begin(), r1.scope.end(), r2.scope.begin(), r2.scope.end(),
                 std::back_inserter(scope));
  std::vector<std::size_t> sizes(scope.size());
  // For each output position: where it comes from in r1 / r2 (or npos).
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> from1(scope.size(), npos), from2(scope.size(), npos);
  for (std::size_t i = 0; i < r1.scope.size(); ++i) {
    auto k = static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), r1.scope[i]) - scope.begin());
    from1[k] = i;
    sizes[k] = r1.relation.sizes()[i];
  }
  for (std::size_t i = 0; i < r2.scope.size(); ++i) {
    auto k = static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), r2.scope[i]) - scope.begin());
    if (from1[k] != npos && sizes[k] != r2.relation.sizes()[i]) {
      fail(ErrorKind::DomainMismatch, "shared variable has different domains in the two relations");
    }
    from2[k] = i;
    sizes[k] = r2.relation.sizes()[i];
  }
  // Index r2 by its shared coordinates.
  std::vector<std::size_t> shared1, shared2;
  for (std::size_t k = 0; k < scope.size(); ++k) {
    if (from1[k] != npos && from2[k] != npos) {
      shared1.push_back(from1[k]);
      shared2.push_back(from2[k]);
    }
  }
  std::map<Tuple, std::vector<const Tuple*>> index;
  for (const auto& t : r2.relation) {
    Tuple key(shared2.size());
    for (std::size_t i = 0; i < shared2.size(); ++i) key[i] = t[shared2[i]];
    index[key].push_back(&t);
  }
  std::vector<Tuple> out;
  Tuple key(shared1.size());
  for (const auto& a : r1.relation) {
    for (std::size_t i = 0; i < shared1.size(); ++i) key[i] = a[shared1[i]];
    auto it = index.find(key);
    if (it == index.end()) continue;
    for (const Tuple* b : it->second) {
      Tuple t(scope.size());
      for (std::size_t k = 0; k < scope.size(); ++k) t[k] = from1[k] != npos ? a[from1[k]] : (*b)[from2[k]];
      out.push_back(std::move(t));
    }
  }
  return {std::move(scope), Relation(std::move(sizes), std::move(out))};
}

bool is_invariant(const Relation& rel, std::span<const Algebra> algebras) {
  if (algebras.size() != rel.arity()) fail(ErrorKind::InvalidArgument, "one algebra per coordinate required");
  check_signature(algebras);
  for (std::size_t i = 0; i < rel.arity(); ++i) {
    if (algebras[i].size() != rel.sizes()[i]) fail(ErrorKind::DomainMismatch, "algebra size differs from signature");
  }
  if (rel.empty() || algebras.empty()) return true;
  const auto& tuples = rel.tuples();
  const std::size_t r = tuples.size();
  std::vector<std::size_t> idx;
  std::vector<Element> args;
  Tuple image(rel.arity());
  for (std::size_t f = 0; f < algebras[0].ops().size(); ++f) {
    const std::size_t m = algebras[0].ops()[f].table.arity();
    idx.assign(m, 0);
    args.resize(m);
    while (true) {
      for (std::size_t c = 0; c < rel.arity(); ++c) {
        for (std::size_t j = 0; j < m; ++j) args[j] = tuples[idx[j]][c];
        image[c] = algebras[c].ops()[f].table(args);
      }
      if (!rel.contains(image)) return false;
      std::size_t j = 0;
      while (j < m && idx[j] + 1 == r) idx[j++] = 0;
      if (j == m) break;
      ++idx[j];
    }
  }
  return true;
}

bool is_subdirect(const Relation& rel, std::span<const Algebra> algebras) {
  if (algebras.size() != rel.arity()) fail(ErrorKind::InvalidArgument, "one algebra per coordinate required");
  for (std::size_t i = 0; i < rel.arity(); ++i) {
    std::vector<bool> hit(algebras[i].size(), false);
    for (const auto& t : rel) hit[t[i]] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
  }
  return true;
}

Relation generated_subpower(std::span<const Algebra> algebras, std::vector<Tuple> seeds) {
  check_signature(algebras);
  std::vector<std::size_t> sizes;
  for (const auto& a : algebras) sizes.push_back(a.size());
  for (const auto& s : seeds) check_ranges(sizes, s);
  if (algebras.empty()) return Relation(sizes, std::move(seeds));
  const auto arities = algebras[0].arities();
  std::vector<Element> args;
  auto closed = detail::close_under<Tuple>(
      std::move(seeds), arities, [&](std::size_t f, std::span<const Tuple* const> in) {
        Tuple out(algebras.size());
        args.resize(in.size());
        for (std::size_t c = 0; c < algebras.size(); ++c) {
          for (std::size_t j = 0; j < in.size(); ++j) args[j] = (*in[j])[c];
          out[c] = algebras[c].ops()[f].table(args);
        }
        return out;
      });
  return Relation(std::move(sizes), std::move(closed));
}

// --- Instances -----------------------------------------------------------------

std::vector<Algebra> Instance::scope_algebras(const Scope& scope) const {
  std::vector<Algebra> out;
  out.reserve(scope.size());
  for (auto v : scope) out.push_back(domains.at(v));
  return out;
}

std::vector<std::size_t> Instance::scope_sizes(const Scope& scope) const {
  std::vector<std::size_t> out;
  out.reserve(scope.size());
  for (auto v : scope) out.push_back(domains.at(v).size());
  return out;
}

Constraint normalize_constraint(const std::vector<std::size_t>& raw_scope,
                                const std::vector<std::size_t>& raw_sizes,
                                const std::vector<Tuple>& raw_tuples) {
  if (raw_scope.empty()) fail(ErrorKind::InvalidArgument, "constraint scope is empty");
  if (raw_sizes.size() != raw_scope.size()) fail(ErrorKind::InvalidArgument, "scope and signature lengths differ");
  Scope scope(raw_scope.begin(), raw_scope.end());
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  // For each normalized variable, the first raw position carrying it.
  std::vector<std::size_t> first(scope.size());
  std::vector<std::size_t> sizes(scope.size());
  for (std::size_t k = 0; k < scope.size(); ++k) {
    auto it = std::find(raw_scope.begin(), raw_scope.end(), scope[k]);
    first[k] = static_cast<std::size_t>(it - raw_scope.begin());
    sizes[k] = raw_sizes[first[k]];
  }
  for (std::size_t i = 0; i < raw_scope.size(); ++i) {
    auto k = static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), raw_scope[i]) - scope.begin());
    if (raw_sizes[i] != sizes[k]) fail(ErrorKind::DomainMismatch, "repeated variable with different domain sizes");
  }
  std::vector<Tuple> tuples;
  for (const auto& t : raw_tuples) {
    check_ranges(raw_sizes, t);
    bool agree = true;
    for (std::size_t i = 0; i < raw_scope.size() && agree; ++i) {
      auto k = static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), raw_scope[i]) - scope.begin());
      agree = t[i] == t[first[k]];
    }
    if (!agree) continue;
    Tuple n(scope.size());
    for (std::size_t k = 0; k < scope.size(); ++k) n[k] = t[first[k]];
    tuples.push_back(std::move(n));
  }
  return {std::move(scope), Relation(std::move(sizes), std::move(tuples))};
}

void validate(const Instance& inst, bool check_invariance) {
  for (std::size_t i = 1; i < inst.domains.size(); ++i) {
    if (!same_signature(inst.domains[0], inst.domains[i])) {
      fail(ErrorKind::DomainMismatch, "domain algebras are not similar");
    }
  }
  for (std::size_t c = 0; c < inst.constraints.size(); ++c) {
    const auto& con = inst.constraints[c];
    const std::string where = "constraint " + std::to_string(c) + ": ";
    if (con.scope.empty()) fail(ErrorKind::InvalidArgument, where + "empty scope");
    for (std::size_t i = 0; i < con.scope.size(); ++i) {
      if (con.scope[i] >= inst.num_vars()) fail(ErrorKind::InvalidArgument, where + "variable out of range");
      if (i > 0 && con.scope[i] <= con.scope[i - 1]) fail(ErrorKind::InvalidArgument, where + "scope not strictly increasing");
    }
    if (con.relation.sizes() != inst.scope_sizes(con.scope)) {
      fail(ErrorKind::DomainMismatch, where + "relation signature does not match scoped domains");
    }
    if (check_invariance && !is_invariant(con.relation, inst.scope_algebras(con.scope))) {
      fail(ErrorKind::InvarianceViolation, where + "relation is not invariant under the domain operations");
    }
  }
}

bool satisfies(const Instance& inst, std::span<const Element> assignment) {
  if (assignment.size() != inst.num_vars()) return false;
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] >= inst.domains[v].size()) return false;
  }
  Tuple t;
  for (const auto& con : inst.constraints) {
    t.resize(con.scope.size());
    for (std::size_t i = 0; i < con.scope.size(); ++i) t[i] = assignment[con.scope[i]];
    if (!con.relation.contains(t)) return false;
  }
  return true;
}

}  // namespace jcsp
