#pragma once

#include <functional>
#include <optional>

#include "fvm/structure.hpp"

namespace fvm {

// All structures over sig with universe size n, one representative per
// isomorphism class (lex-min bitmask representative). The interpretation
// space must fit in 20 bits and n <= 4; larger requests throw GuardError.
std::vector<Structure> enumerate_structures(const Signature& sig, int n,
                                            bool up_to_iso = true);

// Same, pointed at 0; iso classes are orbits under point-fixing
// permutations.
std::vector<Structure> enumerate_pointed(const Signature& sig, int n,
                                         bool up_to_iso = true);

// Backtracking isomorphism search (point-respecting when pointed).
// Practical up to a dozen elements or so for sparse structures.
std::optional<std::vector<int>> find_isomorphism(const Structure& a,
                                                 const Structure& b);
inline bool isomorphic(const Structure& a, const Structure& b) {
  return find_isomorphism(a, b).has_value();
}

}  // namespace fvm
