#include "jcsp/consistency.hpp"

#include <algorithm>
#include <deque>

#include "jcsp/errors.hpp"

namespace jcsp {

namespace {

// Nonempty subsets of `scope` with at most k elements, as sorted scopes.
std::vector<Scope> subsets_of(const Scope& scope, std::size_t k) {
  std::vector<Scope> out;
  const std::size_t m = scope.size();
  if (m >= 63) fail(ErrorKind::InvalidArgument, "scope too large");
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > k) continue;
    Scope s;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1U) s.push_back(scope[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct Node {
  Scope scope;
  Relation rel;
  std::vector<std::size_t> subs;                // system node indices
  std::vector<std::vector<std::size_t>> pos;    // positions of each sub in scope
};

}  // namespace

const Relation& KSystem::at(const Scope& scope) const {
  auto it = entries.find(scope);
  if (it == entries.end()) fail(ErrorKind::InvalidArgument, "no k-system entry for the requested variable set");
  return it->second;
}

std::vector<Scope> small_subsets(std::size_t n, std::size_t k) {
  Scope all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  auto subs = subsets_of(all, k);
  std::stable_sort(subs.begin(), subs.end(), [](const Scope& a, const Scope& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return subs;
}

MinimalizedInstance k_minimalize(const Instance& inst, std::size_t k) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "k must be at least 1");
  validate(inst, false);
  const std::size_t n = inst.num_vars();
  const std::size_t nbase = inst.constraints.size();

  MinimalizedInstance mi;
  mi.base = inst;
  mi.system.k = k;
  mi.origin.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    mi.origin[v].resize(inst.domains[v].size());
    for (Element e = 0; e < inst.domains[v].size(); ++e) mi.origin[v][e] = e;
  }

  const auto subsets = small_subsets(n, k);
  std::map<Scope, std::size_t> index;  // subset -> node index
  std::vector<Node> nodes;
  nodes.reserve(nbase + subsets.size());
  for (const auto& c : inst.constraints) nodes.push_back({c.scope, c.relation, {}, {}});
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    index[subsets[s]] = nbase + s;
    nodes.push_back({subsets[s], Relation(), {}, {}});
  }

  // Initial system entries: intersect the projections of covering input
  // constraints, otherwise extend a smaller entry by one variable.
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    const Scope& I = subsets[s];
    std::optional<Relation> rel;
    for (const auto& c : inst.constraints) {
      if (!std::includes(c.scope.begin(), c.scope.end(), I.begin(), I.end())) continue;
      Relation p = project(c.relation, positions_in(c.scope, I));
      rel = rel ? intersect(*rel, p) : std::move(p);
    }
    if (!rel) {
      if (I.size() == 1) {
        rel = Relation::full({inst.domains[I[0]].size()});
      } else {
        Scope head(I.begin(), I.end() - 1);
        Scope tail{I.back()};
        auto joined = natural_join({head, nodes[index.at(head)].rel}, {tail, nodes[index.at(tail)].rel});
        rel = std::move(joined.relation);
      }
    }
    nodes[nbase + s].rel = std::move(*rel);
  }

  std::vector<std::vector<std::size_t>> dependents(nodes.size());
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    const bool is_system = x >= nbase;
    for (auto& I : subsets_of(nodes[x].scope, k)) {
      if (is_system && I == nodes[x].scope) continue;
      const std::size_t s = index.at(I);
      nodes[x].pos.push_back(positions_in(nodes[x].scope, I));
      nodes[x].subs.push_back(s);
      dependents[s].push_back(x);
    }
  }

  auto finish_empty = [&](std::size_t x) {
    mi.empty = true;
    EmptinessCertificate cert{nodes[x].scope, std::nullopt};
    if (x < nbase) cert.constraint = x;
    mi.certificate = cert;
  };

  std::deque<std::size_t> queue;
  std::vector<bool> queued(nodes.size(), true);
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    queue.push_back(x);
    if (nodes[x].rel.empty() && !mi.empty) finish_empty(x);
  }
  auto enqueue = [&](std::size_t x) {
    if (!queued[x]) {
      queued[x] = true;
      queue.push_back(x);
    }
  };

  while (!queue.empty() && !mi.empty) {
    const std::size_t x = queue.front();
    queue.pop_front();
    queued[x] = false;
    Node& node = nodes[x];
    for (std::size_t j = 0; j < node.subs.size() && !mi.empty; ++j) {
      const std::size_t s = node.subs[j];
      Relation narrowed = intersect(nodes[s].rel, project(node.rel, node.pos[j]));
      if (narrowed.size() != nodes[s].rel.size()) {
        nodes[s].rel = std::move(narrowed);
        if (nodes[s].rel.empty()) finish_empty(s);
        enqueue(s);
        for (auto d : dependents[s]) enqueue(d);
      }
    }
    if (mi.empty) break;
    Relation filtered = node.rel;
    for (std::size_t j = 0; j < node.subs.size(); ++j) {
      filtered = semijoin(filtered, node.pos[j], nodes[node.subs[j]].rel);
    }
    if (filtered.size() != node.rel.size()) {
      node.rel = std::move(filtered);
      if (node.rel.empty()) finish_empty(x);
      enqueue(x);
    }
  }

  for (std::size_t c = 0; c < nbase; ++c) mi.base.constraints[c].relation = std::move(nodes[c].rel);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    mi.system.entries.emplace(subsets[s], std::move(nodes[nbase + s].rel));
  }
  return mi;
}

Instance to_instance(const MinimalizedInstance& mi) {
  Instance out;
  out.domains = mi.base.domains;
  out.constraints = mi.base.constraints;
  for (const auto& [scope, rel] : mi.system.entries) out.constraints.push_back({scope, rel});
  return out;
}

Instance collapse(const MinimalizedInstance& mi) {
  Instance out;
  out.domains = mi.base.domains;
  for (const auto& c : mi.base.constraints) {
    if (c.scope.size() > mi.system.k) out.constraints.push_back(c);
  }
  for (const auto& [scope, rel] : mi.system.entries) out.constraints.push_back({scope, rel});
  return out;
}

MinimalizedInstance make_subdirect(const MinimalizedInstance& mi) {
  if (mi.empty) fail(ErrorKind::InvalidArgument, "cannot make an empty instance subdirect");
  const std::size_t n = mi.base.num_vars();
  constexpr Element kMissing = static_cast<Element>(-1);
  MinimalizedInstance out;
  out.system.k = mi.system.k;
  out.origin.resize(n);
  std::vector<std::vector<Element>> renumber(n);
  for (std::size_t v = 0; v < n; ++v) {
    ElementSet support;
    for (const auto& t : mi.system.at({v})) support.push_back(t[0]);
    if (support.empty()) fail(ErrorKind::EmptyDomain, "variable " + std::to_string(v) + " has no admissible value");
    auto r = restrict(mi.base.domains[v], support);
    renumber[v].assign(mi.base.domains[v].size(), kMissing);
    for (std::size_t i = 0; i < r.embedding.size(); ++i) {
      renumber[v][r.embedding[i]] = static_cast<Element>(i);
      out.origin[v].push_back(mi.origin[v][r.embedding[i]]);
    }
    out.base.domains.push_back(std::move(r.algebra));
  }
  auto remap = [&](const Scope& scope, const Relation& rel) {
    std::vector<Tuple> tuples;
    tuples.reserve(rel.size());
    for (const auto& t : rel) {
      Tuple u(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        u[i] = renumber[scope[i]][t[i]];
        if (u[i] == kMissing) fail(ErrorKind::LemmaViolation, "relation uses a value outside the unary projection");
      }
      tuples.push_back(std::move(u));
    }
    return Relation(out.base.scope_sizes(scope), std::move(tuples));
  };
  for (const auto& c : mi.base.constraints) out.base.constraints.push_back({c.scope, remap(c.scope, c.relation)});
  for (const auto& [scope, rel] : mi.system.entries) out.system.entries.emplace(scope, remap(scope, rel));
  return out;
}

bool is_k_minimal(const Instance& inst, std::size_t k) {
  for (const auto& I : small_subsets(inst.num_vars(), k)) {
    std::optional<Relation> seen;
    for (const auto& c : inst.constraints) {
      if (!std::includes(c.scope.begin(), c.scope.end(), I.begin(), I.end())) continue;
      Relation p = project(c.relation, positions_in(c.scope, I));
      if (!seen) {
        seen = std::move(p);
      } else if (*seen != p) {
        return false;
      }
    }
    if (!seen) return false;
  }
  return true;
}

}  // namespace jcsp
