#pragma once

#include <vector>

#include "fvm/structure.hpp"

namespace fvm {

// Joint color refinement over a batch of structures (same signature, arities
// <= 2). dim = 1 refines element colors; dim = 2 refines ordered-pair colors.
// with_equality adds identity bits to the initial colors and to each
// neighbour contribution. Returns one signature per structure: its sorted
// multiset of stable colors. Signatures are comparable only within a single
// call; two structures get equal signatures iff the refinement cannot tell
// them apart.
std::vector<std::vector<int>> wl_signatures(
    const std::vector<const Structure*>& batch, int dim, bool with_equality);

bool wl_equiv(const Structure& a, const Structure& b, int dim,
              bool with_equality);

}  // namespace fvm
