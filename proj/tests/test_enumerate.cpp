#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "fvm/enumerate.hpp"
#include "helpers.hpp"

using namespace fvm;
using namespace fvm::testing;

namespace {

// Independent class count: Burnside over element permutations acting on
// interpretation cells. Shares no code with the enumerator.
long long burnside_classes(const Signature& sig, int n, bool fix_zero) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long long total = 0, nperms = 0;
  do {
    if (fix_zero && perm[0] != 0) continue;
    ++nperms;
    // Count orbits of cells under the induced action.
    std::vector<int> cell_of;  // flattened (rel, tuple) -> image cell
    std::vector<int> offs;
    int bits = 0;
    for (int r = 0; r < sig.count(); ++r) {
      offs.push_back(bits);
      int cells = 1;
      for (int i = 0; i < sig.rel(r).arity; ++i) cells *= n;
      bits += cells;
    }
    cell_of.resize(bits);
    for (int r = 0; r < sig.count(); ++r) {
      int ar = sig.rel(r).arity;
      int cells = 1;
      for (int i = 0; i < ar; ++i) cells *= n;
      for (int idx = 0; idx < cells; ++idx) {
        int rem = idx, out = 0;
        std::vector<int> cs(ar);
        for (int i = ar - 1; i >= 0; --i) {
          cs[i] = rem % n;
          rem /= n;
        }
        for (int i = 0; i < ar; ++i) out = out * n + perm[cs[i]];
        cell_of[offs[r] + idx] = offs[r] + out;
      }
    }
    std::vector<bool> seen(bits, false);
    int orbits = 0;
    for (int b = 0; b < bits; ++b) {
      if (seen[b]) continue;
      ++orbits;
      for (int c = b; !seen[c]; c = cell_of[c]) seen[c] = true;
    }
    total += 1LL << orbits;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / nperms;
}

}  // namespace

TEST_CASE("class counts for one binary relation") {
  // [DERIVED] Burnside: 2, 10, 104, 3044 classes of binary relations on
  // 1..4 unlabeled points.
  CHECK(enumerate_structures(sig_e(), 1).size() == 2);
  CHECK(enumerate_structures(sig_e(), 2).size() == 10);
  CHECK(enumerate_structures(sig_e(), 3).size() == 104);
  CHECK(enumerate_structures(sig_e(), 4).size() == 3044);
  for (int n = 1; n <= 3; ++n)
    CHECK((long long)enumerate_structures(sig_e(), n).size() ==
          burnside_classes(sig_e(), n, false));
  CHECK(enumerate_structures(sig_e(), 2, false).size() == 16);
}

TEST_CASE("class counts with a unary predicate") {
  for (int n = 1; n <= 3; ++n)
    CHECK((long long)enumerate_structures(sig_pe(), n).size() ==
          burnside_classes(sig_pe(), n, false));
}

TEST_CASE("pointed classes fix the point") {
  // [DERIVED] Burnside with point-fixing perms: n=2 all 16 labeled
  // structures are distinct classes; n=3 gives (512+32)/2 = 272.
  CHECK(enumerate_pointed(sig_e(), 2).size() == 16);
  CHECK(enumerate_pointed(sig_e(), 3).size() == 272);
  for (int n = 1; n <= 3; ++n)
    CHECK((long long)enumerate_pointed(sig_e(), n).size() ==
          burnside_classes(sig_e(), n, true));
  for (const Structure& s : enumerate_pointed(sig_e(), 2)) CHECK(s.point() == 0);
}

TEST_CASE("guards") {
  CHECK_THROWS_AS(enumerate_structures(sig_e(), 5), GuardError);
  CHECK_THROWS_AS(enumerate_structures(Signature({{"T", 3}}), 3), GuardError);
}

TEST_CASE("representatives are pairwise non-isomorphic and cover everything") {
  auto reps = enumerate_structures(sig_e(), 2);
  for (size_t i = 0; i < reps.size(); ++i)
    for (size_t j = i + 1; j < reps.size(); ++j)
      CHECK_FALSE(isomorphic(reps[i], reps[j]));
  auto all = enumerate_structures(sig_e(), 2, false);
  for (const Structure& s : all) {
    int hits = 0;
    for (const Structure& r : reps)
      if (isomorphic(s, r)) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("isomorphism search") {
  // Directed 3-cycle vs a relabeling of itself.
  Structure c3 = digraph(3, {{0, 1}, {1, 2}, {2, 0}});
  Structure c3r = digraph(3, {{2, 1}, {1, 0}, {0, 2}});
  auto f = find_isomorphism(c3, c3r);
  REQUIRE(f.has_value());
  auto fm = StructureMap{make_structure(c3), make_structure(c3r), *f};
  CHECK(is_embedding(fm));

  // Chain vs fork: same size and edge count, different shape.
  CHECK_FALSE(isomorphic(digraph(3, {{0, 1}, {1, 2}}),
                         digraph(3, {{0, 1}, {0, 2}})));
  // 4-cycle vs two disjoint edges (degree profiles differ).
  CHECK_FALSE(isomorphic(ucycle(4), graph(4, {{0, 1}, {2, 3}})));
  // Pointed: the point must map to the point.
  CHECK_FALSE(isomorphic(digraph(2, {{0, 1}}, 0), digraph(2, {{0, 1}}, 1)));
  CHECK(isomorphic(digraph(2, {{0, 1}}, 0), digraph(2, {{1, 0}}, 1)));
}
