#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <vector>

namespace jcsp::detail {

/// Least superset of `seed` closed under a family of operations.
///
/// `arities[f]` is the arity of operation f and `apply(f, args)` evaluates it
/// on a span of pointers into the current item list. Semi-naive: when item p
/// is first processed, only argument vectors drawn from items [0, p] that use
/// p at least once are evaluated, so every vector is evaluated exactly once.
/// Output keeps discovery order (seed order first).
template <class T, class Apply>
std::vector<T> close_under(std::vector<T> seed, std::span<const std::size_t> arities,
                           Apply&& apply) {
  std::set<T> seen;
  std::vector<T> items;
  for (auto& s : seed) {
    if (seen.insert(s).second) items.push_back(std::move(s));
  }
  std::vector<const T*> args;
  std::vector<std::size_t> idx;
  for (std::size_t p = 0; p < items.size(); ++p) {
    for (std::size_t f = 0; f < arities.size(); ++f) {
      const std::size_t m = arities[f];
      if (m == 0) continue;
      idx.assign(m, 0);
      args.resize(m);
      while (true) {
        bool uses_p = false;
        for (std::size_t j = 0; j < m; ++j) uses_p = uses_p || idx[j] == p;
        if (uses_p) {
          // `items` may reallocate while we push, so re-resolve pointers.
          for (std::size_t j = 0; j < m; ++j) args[j] = &items[idx[j]];
          T out = apply(f, std::span<const T* const>(args));
          if (seen.insert(out).second) items.push_back(std::move(out));
        }
        std::size_t j = 0;
        while (j < m && idx[j] == p) idx[j++] = 0;
        if (j == m) break;
        ++idx[j];
      }
    }
  }
  return items;
}

}  // namespace jcsp::detail
