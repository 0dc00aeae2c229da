#pragma once

#include <cstddef>
#include <vector>

namespace cst {

/// A function between canonical finite sets {0..n-1} -> {0..m-1}, stored as
/// the array of images.
using FiniteFunction = std::vector<std::size_t>;

/// Diagrammatic composite: first f, then g.
inline FiniteFunction then(const FiniteFunction& f, const FiniteFunction& g) {
  FiniteFunction out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = g[f[i]];
  return out;
}

inline FiniteFunction identity_function(std::size_t n) {
  FiniteFunction out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace cst
