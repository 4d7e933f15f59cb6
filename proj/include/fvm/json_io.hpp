#pragma once

#include <string>

#include "fvm/structure.hpp"

namespace fvm {

// Wire format:
//   {"signature": {"E": 2, ...}, "universe": n,
//    "relations": {"E": [[0,1], ...], ...}, "point": i}
// Signature key order is the relation order. Relations absent from the
// "relations" object are empty; serialization emits every relation with
// tuples sorted lexicographically, so parse/serialize round trips are exact.
Structure structure_from_json(const std::string& text);
std::string structure_to_json(const Structure& s, bool pretty = false);

}  // namespace fvm
