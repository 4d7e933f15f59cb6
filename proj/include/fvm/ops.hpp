#pragma once

#include "fvm/structure.hpp"

namespace fvm {

// Index encodings (documented here once, relied on everywhere):
//   disjoint_union(A,B): A at 0..|A|-1, B at |A|..|A|+|B|-1.
//   pointed_coproduct(A,B): merged point at 0, then non-point elements of A
//     in increasing original order, then those of B.
//   product(As): row-major tuples, the last coordinate varies fastest.
//   merge_r / vee: new initial point at 0, A at 1..|A|, B at |A|+1..|A|+|B|.
Structure disjoint_union(const Structure& a, const Structure& b);
Structure pointed_coproduct(const Structure& a, const Structure& b);
Structure product(const std::vector<const Structure*>& as);
Structure product2(const Structure& a, const Structure& b);
Structure merge_r(const Structure& a, const Structure& b, const std::string& rel);
Structure vee(const Structure& a, const Structure& b);
Structure reduct(const Structure& a, const Signature& tau);

// Tuple index helpers for product (sizes = factor universe sizes).
int product_index(const std::vector<int>& sizes, const std::vector<int>& coords);
std::vector<int> product_coords(const std::vector<int>& sizes, int index);

// Adds binary I interpreted as the diagonal. Errors if I is taken.
Structure translate_equality(const Structure& a);
// Adds binary I (diagonal) and binary Con (same Gaifman component).
Structure translate_connectivity(const Structure& a);
// Adds binary G as the full square; pointed modal input.
Structure translate_global(const Structure& a);

enum class SilentMode {
  kDrop,    // saturate observables, empty out S (default; makes the
            // merge/vee square an isomorphism)
  kClose,   // S is saturated like every other relation
  kRaw,     // S left untouched
};
// Replaces every binary R with S* ; R ; S* (S* = reflexive-transitive
// closure of the silent relation); S itself per mode. Unary untouched.
Structure translate_weak(const Structure& a, const std::string& silent,
                         SilentMode mode = SilentMode::kDrop);

}  // namespace fvm
