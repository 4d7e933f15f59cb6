#pragma once

#include "fvm/comonad.hpp"

namespace fvm {

struct LawCheckResult {
  int samples = 0;  // Kleisli map pairs exercised
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Validates, elementwise over the whole carrier:
//   1. counit coextends to the identity
//   2. counit after coextension recovers the map
//   3. coextension composes:  (g o f*)* = g* o f*
//   4. counit splits comultiplication on both sides
//   5. comultiplication is coassociative
// plus the functor/coextension roundtrip  C(f) = (f o counit)*.
// Laws 2/3 quantify over sampled Kleisli maps: arbitrary tables for the
// word kinds, enumerated homomorphisms into the base for paths and walks.
// Laws 4/5 compare nested values directly, so no iterated carrier is
// materialized.
LawCheckResult check_comonad_laws(Kind kind, const StructurePtr& base, int k,
                                  uint64_t seed, int samples,
                                  const BuildOptions& opts = {});

}  // namespace fvm
