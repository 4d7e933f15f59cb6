#pragma once

#include <functional>
#include <optional>

#include "fvm/structure.hpp"

namespace fvm {

// Backtracking homomorphism search with forward checking. Target universe
// must fit a 64-bit domain mask. Pointed sources must map to pointed
// targets (point to point); mixing pointedness is an error.
std::optional<StructureMap> find_homomorphism(const StructurePtr& a,
                                              const StructurePtr& b);

// Visits every homomorphism until the callback returns false or the space
// is exhausted. Returns the number visited.
long long for_each_homomorphism(
    const StructurePtr& a, const StructurePtr& b,
    const std::function<bool(const StructureMap&)>& fn);

inline long long count_homomorphisms(const StructurePtr& a, const StructurePtr& b) {
  return for_each_homomorphism(a, b, [](const StructureMap&) { return true; });
}

}  // namespace fvm
