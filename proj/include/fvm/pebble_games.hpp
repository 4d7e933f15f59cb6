#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "fvm/structure.hpp"

namespace fvm {

enum class PebbleMode { kPeForth, kExistForth, kFull, kCount };

// A position is a multiset of at most k pairs (a, b). The space of all
// positions for a given (|A|, |B|, k) shape is enumerated once — length-major,
// lexicographic within a length — together with removal/addition transition
// tables, and cached process-wide.
struct PebblePositionSpace {
  int na = 0, nb = 0, k = 0;
  int pairs = 0;            // na * nb
  int total = 0;            // all positions, lengths 0..k
  int inner = 0;            // positions with length <= k-1 (a prefix of 0..total)
  std::vector<int> len;     // [pos] multiset size
  std::vector<int> entry;   // flattened pair ids, k slots per position (-1 pad)
  std::vector<int> rem_off;  // [pos]..[pos+1] range into rem_sub
  std::vector<int> rem_sub;  // position index after removing one distinct pair
  std::vector<int> add_tab;  // [sub * pairs + pair] -> position index
  const int* pos_entries(int pos) const { return entry.data() + pos * k; }
};

std::shared_ptr<const PebblePositionSpace> pebble_space(int na, int nb, int k);

struct PebbleOutcome {
  bool empty_alive = false;  // the empty start position survives the gfp
  bool seed_alive = false;   // {(point_a, point_b)}, meaningful when pointed
  // Surviving positions as sorted pair lists; filled when want_witness.
  std::vector<std::vector<std::pair<int, int>>> winning;
};

// Greatest-fixpoint pebble game on (a, b): start from all atomically safe
// positions and repeatedly delete positions where Spoiler has a move that
// Duplicator cannot answer inside the surviving set.
PebbleOutcome pebble_gfp(const Structure& a, const Structure& b, int k,
                         PebbleMode mode, bool want_witness);

// Re-checks a claimed winning set: every listed position must be atomically
// safe and closed under every Spoiler move, and the start position(s) must be
// listed. Used by witness replay; trusts nothing from the solver.
bool pebble_replay(const Structure& a, const Structure& b, int k,
                   PebbleMode mode,
                   const std::vector<std::vector<std::pair<int, int>>>& wins);

}  // namespace fvm
