#pragma once

#include <optional>

#include "fvm/comonad.hpp"
#include "fvm/structure.hpp"

namespace fvm {

enum class Fragment { kPe, kExist, kCount, kFull };

Fragment fragment_from_string(const std::string& s);
std::string fragment_to_string(Fragment f);

struct Verdict {
  Fragment fragment = Fragment::kPe;
  Kind kind = Kind::kEf;
  int k = 0;
  bool result = false;
  std::string backend;
  // Present on positive results when requested: a homomorphism table, a
  // winning-position set, a bijection tree, or a Kleisli map pair,
  // serialized as JSON. replay_witness re-checks it from scratch.
  std::optional<std::string> witness_json;
};

struct DecideOptions {
  bool want_witness = false;
  bool force_wl = false;  // count(pebble): use the WL backend regardless of size
};

// Directional forth games (Spoiler moves in A only).
//   pe_forth: atomic preservation only.
//   exist_forth: atomic preservation and reflection (ef / pebble kinds).
Verdict pe_forth(Kind kind, const StructurePtr& a, const StructurePtr& b,
                 int k, const DecideOptions& opts = {});
Verdict exist_forth(Kind kind, const StructurePtr& a, const StructurePtr& b,
                    int k, const DecideOptions& opts = {});

// Symmetric games.
Verdict full_equiv(Kind kind, const StructurePtr& a, const StructurePtr& b,
                   int k, const DecideOptions& opts = {});
Verdict count_equiv(Kind kind, const StructurePtr& a, const StructurePtr& b,
                    int k, const DecideOptions& opts = {});

// Fragment-level equivalence: pe/exist hold in both directions.
Verdict equivalent(Kind kind, Fragment frag, const StructurePtr& a,
                   const StructurePtr& b, int k, const DecideOptions& opts = {});

// Independent oracle for pe_forth: materialize the carrier over a and run
// the homomorphism search into b. Pebble kind is rejected (its carrier is
// truncated, so the search would not be sound).
Verdict hom_exists(Kind kind, const StructurePtr& a, const StructurePtr& b,
                   int k, const DecideOptions& opts = {});

// Brute-force oracle for count_equiv on tiny inputs: search for Kleisli
// maps f : C(A) -> B, g : C(B) -> A with g o f* = counit and f o g* =
// counit. EF and Modal kinds; |A|, |B| <= 3 and k <= 2 enforced.
Verdict kleisli_iso_search(Kind kind, const StructurePtr& a,
                           const StructurePtr& b, int k,
                           const DecideOptions& opts = {});

// Re-checks a witness against the inputs without trusting the decider.
bool replay_witness(const Verdict& v, const StructurePtr& a,
                    const StructurePtr& b);

}  // namespace fvm
