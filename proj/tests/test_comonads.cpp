#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fvm/comonad.hpp"
#include "fvm/comonad_laws.hpp"
#include "helpers.hpp"

using namespace fvm;
using namespace fvm::testing;

namespace {
std::string first_failure(const LawCheckResult& r) {
  return r.failures.empty() ? std::string("ok") : r.failures[0];
}
}  // namespace

TEST_CASE("word carrier over a two-element chain") {
  auto a = make_structure(digraph(2, {{0, 1}}));
  ComonadInstance c = build_comonad(Kind::kEf, a, 2);
  // [TRIVIAL] words of length <= 2 over two letters.
  REQUIRE(c.size() == 6);
  CHECK(c.key(0) == std::vector<int>{0});
  CHECK(c.key(3) == std::vector<int>{0, 1});
  CHECK(c.counit(3) == 1);
  CHECK(c.parent(3) == 0);
  CHECK(c.prefix(3, 1) == 0);
  CHECK(c.prefix(3, 2) == 3);
  // [DERIVED] comparability is unordered, so both ([0],[0,1]) and
  // ([1,0],[1]) have edge-related last letters; nothing else does.
  CHECK(c.carrier->tuples(0) == std::vector<Tuple>{{0, 3}, {4, 1}});
}

TEST_CASE("a loop induces a loop on the singleton word") {
  // [DERIVED] equal words are prefix-comparable, so a loop on the base
  // element gives a loop on every word over it.
  auto a = make_structure(digraph(1, {{0, 0}}));
  ComonadInstance c = build_comonad(Kind::kEf, a, 1);
  REQUIRE(c.size() == 1);
  CHECK(c.carrier->tuples(0) == std::vector<Tuple>{{0, 0}});
}

TEST_CASE("coextension and fmap on words") {
  auto a = make_structure(digraph(2, {{0, 1}}));
  auto loop = make_structure(digraph(1, {{0, 0}}));
  ComonadInstance ca = build_comonad(Kind::kEf, a, 2);
  ComonadInstance cl = build_comonad(Kind::kEf, loop, 2);
  // Constant Kleisli map: every word lands on the loop vertex.
  std::vector<int> f(ca.size(), 0);
  std::vector<int> ext = coextend(ca, cl, f);
  // [DERIVED] f*([0,1]) = [f([0]), f([0,1])] = [0,0], index 1 in the
  // loop's word carrier ([0] is 0, [0,0] is 1).
  CHECK(ext[3] == 1);
  CHECK(cl.counit(ext[3]) == 0);

  std::vector<int> h{0, 0};  // collapse the chain onto the loop
  std::vector<int> img = fmap(ca, cl, h);
  CHECK(img[3] == 1);  // [0,1] -> [0,0]
  CHECK(counit_map(ca).table == std::vector<int>{0, 1, 0, 1, 0, 1});
}

TEST_CASE("comultiplication materializes the nested carrier") {
  auto a = make_structure(digraph(2, {{0, 1}}));
  ComonadInstance ca = build_comonad(Kind::kEf, a, 2);
  Comultiplication d = comultiplication(ca);
  // [TRIVIAL] 6 + 36 words over the 6-element carrier.
  CHECK(d.outer.size() == 42);
  // delta([0,1]) = [[0],[0,1]] = word of carrier indices {0,3}.
  CHECK(d.outer.key(d.table[3]) == std::vector<int>{0, 3});
  CHECK(d.outer.counit(d.table[3]) == 3);
}

TEST_CASE("single pebble cannot hold an edge") {
  // [DERIVED] with one pebble every strict extension reuses it, so the
  // carrier of a loopless base keeps no related pairs at all.
  auto k2 = make_structure(clique(2));
  ComonadInstance c = build_comonad(Kind::kPebble, k2, 1);
  CHECK(c.size() == 6);  // trunc defaults to 2k = 2
  CHECK(c.carrier->tuples(0).empty());
}

TEST_CASE("two pebbles keep the edge alive") {
  auto k2 = make_structure(clique(2));
  ComonadInstance c = build_comonad(Kind::kPebble, k2, 2, {.trunc = 2});
  // [TRIVIAL] 4 + 16 pebble words.
  REQUIRE(c.size() == 20);
  int s = c.index_of_key({0, 0});        // [(0,0)]
  int t = c.index_of_key({0, 0, 1, 1});  // [(0,0),(1,1)]
  int u = c.index_of_key({0, 0, 0, 1});  // [(0,0),(0,1)] reuses pebble 0
  REQUIRE(s >= 0);
  REQUIRE(t >= 0);
  REQUIRE(u >= 0);
  CHECK(c.carrier->has2(0, s, t));
  CHECK(c.carrier->has2(0, t, s));
  CHECK_FALSE(c.carrier->has2(0, s, u));
  CHECK(c.pebble_of(t) == 1);
}

TEST_CASE("path carrier over a pointed two-cycle") {
  Structure base(sig_pe(), 2, {{{1}}, {{0, 1}, {1, 0}}}, 0);
  auto a = make_structure(base);
  ComonadInstance c = build_comonad(Kind::kModal, a, 2);
  // [DERIVED] paths from the point: [], [E,1], [E,1,E,0].
  REQUIRE(c.size() == 3);
  CHECK(c.carrier->pointed());
  CHECK(c.carrier->point() == 0);
  CHECK(c.counit(0) == 0);
  CHECK(c.counit(1) == 1);
  CHECK(c.counit(2) == 0);
  CHECK(c.length(2) == 2);
  CHECK(c.prefix(2, 0) == 0);
  CHECK(c.carrier->tuples(0) == std::vector<Tuple>{{1}});          // P
  CHECK(c.carrier->tuples(1) == std::vector<Tuple>{{0, 1}, {1, 2}});  // E
}

TEST_CASE("path steps remember their relation") {
  Signature rs({{"R", 2}, {"S", 2}});
  Structure base(rs, 3, {{{0, 1}}, {{0, 2}}}, 0);
  ComonadInstance c = build_comonad(Kind::kModal, make_structure(base), 1);
  REQUIRE(c.size() == 3);
  CHECK(c.key(1) == std::vector<int>{0, 1});  // one R-step to 1
  CHECK(c.key(2) == std::vector<int>{1, 2});  // one S-step to 2
  CHECK(c.label_of(1) == 0);
  CHECK(c.label_of(2) == 1);
  CHECK(c.carrier->tuples(0) == std::vector<Tuple>{{0, 1}});
  CHECK(c.carrier->tuples(1) == std::vector<Tuple>{{0, 2}});
}

TEST_CASE("round walks over an edge") {
  auto k2 = make_structure(clique(2));
  ComonadInstance c = build_comonad(Kind::kCos, k2, 0, {.trunc = 2});
  // [DERIVED] start-designated closed 2-walks: (0,1) and (1,0), each with
  // two marked positions.
  REQUIRE(c.size() == 4);
  CHECK(c.cos_walk(0) == std::vector<int>{0, 1});
  CHECK(c.cos_pos(1) == 1);
  CHECK(counit_map(c).table == std::vector<int>{0, 1, 1, 0});
  CHECK(c.carrier->tuples(0) ==
        std::vector<Tuple>{{0, 1}, {1, 0}, {2, 3}, {3, 2}});

  // [DERIVED] lengths 2,4,6 alternate between the endpoints: 6 walks,
  // 2+2 + 4+4 + 6+6 marked elements.
  ComonadInstance c6 = build_comonad(Kind::kCos, k2, 0);
  CHECK(c6.size() == 24);

  // [DERIVED] a 4-cycle has no odd closed walk: cap 3 sees only the
  // 8 directed edges as 2-walks.
  ComonadInstance c4 = build_comonad(Kind::kCos, make_structure(ucycle(4)), 0,
                                     {.trunc = 3});
  CHECK(c4.size() == 16);

  CHECK_THROWS_AS(build_comonad(Kind::kCos, make_structure(digraph(2, {{0, 1}})), 0),
                  Error);
  CHECK_THROWS_AS(build_comonad(Kind::kCos, make_structure(digraph(1, {{0, 0}})), 0),
                  Error);
}

TEST_CASE("coextension rejects maps that leave the carrier") {
  Structure base(sig_pe(), 2, {{{1}}, {{0, 1}, {1, 0}}}, 0);
  auto a = make_structure(base);
  ComonadInstance c = build_comonad(Kind::kModal, a, 2);
  std::vector<int> not_pointed{1, 0, 1};
  CHECK_THROWS_AS(coextend(c, c, not_pointed), Error);
  // Collapsing both base elements to the point breaks the edge relation.
  Structure target(sig_pe(), 2, {{{1}}, {{0, 1}}}, 0);
  ComonadInstance ct = build_comonad(Kind::kModal, make_structure(target), 2);
  CHECK_THROWS_AS(fmap(c, ct, std::vector<int>{0, 0}), Error);
}

TEST_CASE("carrier guard") {
  auto big = make_structure(digraph(40, {}));
  CHECK_THROWS_AS(build_comonad(Kind::kEf, big, 3), GuardError);
  ComonadInstance ok = build_comonad(Kind::kEf, big, 3, {.max_elems = 100000});
  CHECK(ok.size() == 40 + 1600 + 64000);
}

TEST_CASE("laws hold for words") {
  auto a = make_structure(digraph(3, {{0, 1}, {1, 2}, {2, 0}, {0, 0}}));
  for (int k = 1; k <= 3; ++k) {
    LawCheckResult r = check_comonad_laws(Kind::kEf, a, k, 17, 8);
    CHECK_MESSAGE(r.ok(), first_failure(r));
  }
  LawCheckResult rp = check_comonad_laws(Kind::kPebble, a, 2, 17, 4, {.trunc = 3});
  CHECK_MESSAGE(rp.ok(), first_failure(rp));
}

TEST_CASE("laws hold for paths and walks") {
  Structure base(sig_pe(), 3, {{{1}, {2}}, {{0, 1}, {1, 2}, {2, 1}, {0, 0}}}, 0);
  LawCheckResult rm = check_comonad_laws(Kind::kModal, make_structure(base), 2, 5, 8);
  CHECK_MESSAGE(rm.ok(), first_failure(rm));

  LawCheckResult rc =
      check_comonad_laws(Kind::kCos, make_structure(ucycle(4)), 0, 5, 8, {.trunc = 4});
  CHECK_MESSAGE(rc.ok(), first_failure(rc));
  LawCheckResult rk =
      check_comonad_laws(Kind::kCos, make_structure(clique(3)), 0, 5, 6, {.trunc = 4});
  CHECK_MESSAGE(rk.ok(), first_failure(rk));
}
