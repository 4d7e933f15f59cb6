#include "fvm/games.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <tuple>

#include "fvm/hom_search.hpp"
#include "fvm/pebble_games.hpp"
#include "fvm/wl.hpp"

namespace fvm {

using ojson = nlohmann::ordered_json;

namespace {

using Pairs = std::vector<std::pair<int, int>>;

// Empirically anchored against the bijective-game backend (see the decision
// table in the tests): the identity bits are part of the counting logic.
constexpr bool kWlWithEquality = true;

void check_common(const StructurePtr& a, const StructurePtr& b) {
  if (!(a->sig() == b->sig())) {
    throw GuardError("game deciders need equal signatures");
  }
  if (a->pointed() != b->pointed()) {
    throw GuardError("one structure is pointed, the other is not");
  }
}

Verdict make_verdict(Fragment f, Kind kind, int k, bool result,
                     std::string backend) {
  Verdict v;
  v.fragment = f;
  v.kind = kind;
  v.k = k;
  v.result = result;
  v.backend = std::move(backend);
  return v;
}

// ---------------------------------------------------------------------------
// EF games: positions are multisets of pairs, solved by depth recursion with
// a (position, rounds-left) memo.

struct EfEngine {
  const Structure& A;
  const Structure& B;
  AdjCache aa, ab;
  bool reflect;  // atoms must also be reflected (exist/full/count)
  bool full;     // Spoiler may also move on the B side
  bool has_high = false;
  std::map<std::pair<Pairs, int>, bool> memo;

  EfEngine(const Structure& a, const Structure& b, bool reflect_, bool full_)
      : A(a), B(b), aa(a), ab(b), reflect(reflect_), full(full_) {
    for (int r = 0; r < aa.nrel; ++r) {
      if (aa.arity[r] > 2) has_high = true;
    }
  }

  bool unary_ok(int x, int y) const {
    for (int r = 0; r < aa.nrel; ++r) {
      if (aa.arity[r] != 1) continue;
      bool ina = aa.r1(r, x), inb = ab.r1(r, y);
      if ((ina && !inb) || (reflect && inb && !ina)) return false;
    }
    return true;
  }

  bool bin_ok(int x, int u, int y, int v) const {
    for (int r = 0; r < aa.nrel; ++r) {
      if (aa.arity[r] != 2) continue;
      bool ina = aa.r2(r, x, u), inb = ab.r2(r, y, v);
      if ((ina && !inb) || (reflect && inb && !ina)) return false;
    }
    return true;
  }

  bool high_ok(const Pairs& pos) const {
    int l = static_cast<int>(pos.size());
    if (l == 0) return true;
    for (int r = 0; r < A.sig().count(); ++r) {
      int m = A.sig().rel(r).arity;
      if (m <= 2) continue;
      long long combos = 1;
      for (int i = 0; i < m; ++i) {
        combos *= l;
        if (combos > 100000) throw GuardError("ef game arity too large");
      }
      Tuple ta(m), tb(m);
      for (long long c = 0; c < combos; ++c) {
        long long v = c;
        for (int i = 0; i < m; ++i) {
          const auto& [x, y] = pos[v % l];
          v /= l;
          ta[i] = x;
          tb[i] = y;
        }
        bool ina = A.has_tuple(r, ta), inb = B.has_tuple(r, tb);
        if ((ina && !inb) || (reflect && inb && !ina)) return false;
      }
    }
    return true;
  }

  // Full atomic safety of a position (start seeds and replay).
  bool position_safe(const Pairs& pos) const {
    for (const auto& [x, y] : pos) {
      if (!unary_ok(x, y)) return false;
    }
    for (const auto& [x, y] : pos) {
      for (const auto& [u, v] : pos) {
        if (!bin_ok(x, u, y, v)) return false;
      }
    }
    return has_high ? high_ok(pos) : true;
  }

  // Safety of pos + (x, y), assuming pos itself is safe.
  bool pair_ok(const Pairs& pos, int x, int y) const {
    if (!unary_ok(x, y)) return false;
    if (!bin_ok(x, x, y, y)) return false;
    for (const auto& [u, v] : pos) {
      if (!bin_ok(x, u, y, v) || !bin_ok(u, x, v, y)) return false;
    }
    if (has_high) {
      Pairs nxt = pos;
      nxt.emplace_back(x, y);
      return high_ok(nxt);
    }
    return true;
  }

  static Pairs insert_sorted(const Pairs& pos, std::pair<int, int> p) {
    Pairs nxt = pos;
    nxt.insert(std::upper_bound(nxt.begin(), nxt.end(), p), p);
    return nxt;
  }

  bool win(const Pairs& pos, int r) {
    if (r == 0) return true;
    auto key = std::make_pair(pos, r);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool res = true;
    for (int x = 0; x < A.size() && res; ++x) {
      bool found = false;
      for (int y = 0; y < B.size() && !found; ++y) {
        if (pair_ok(pos, x, y) && win(insert_sorted(pos, {x, y}), r - 1)) {
          found = true;
        }
      }
      if (!found) res = false;
    }
    if (full) {
      for (int y = 0; y < B.size() && res; ++y) {
        bool found = false;
        for (int x = 0; x < A.size() && !found; ++x) {
          if (pair_ok(pos, x, y) && win(insert_sorted(pos, {x, y}), r - 1)) {
            found = true;
          }
        }
        if (!found) res = false;
      }
    }
    memo.emplace(std::move(key), res);
    return res;
  }

  // Bijective variant: Duplicator offers a bijection, Spoiler picks where to
  // extend. Bijections are tried in lexicographic order.
  bool win_count(const Pairs& pos, int r) {
    if (r == 0) return true;
    auto key = std::make_pair(pos, r);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int n = A.size();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    bool res = false;
    do {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x) {
        ok = pair_ok(pos, x, perm[x]) &&
             win_count(insert_sorted(pos, {x, perm[x]}), r - 1);
      }
      if (ok) res = true;
    } while (!res && std::next_permutation(perm.begin(), perm.end()));
    memo.emplace(std::move(key), res);
    return res;
  }

  // First lexicographic winning bijection at (pos, r); assumes win_count held.
  std::vector<int> first_bijection(const Pairs& pos, int r) {
    int n = A.size();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x) {
        ok = pair_ok(pos, x, perm[x]) &&
             win_count(insert_sorted(pos, {x, perm[x]}), r - 1);
      }
      if (ok) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    throw Error("bijection witness reconstruction failed");
  }

  ojson bijection_tree(const Pairs& pos, int r) {
    if (r == 0) return nullptr;
    auto h = first_bijection(pos, r);
    ojson node;
    node["bijection"] = h;
    ojson kids = ojson::array();
    for (int x = 0; x < A.size(); ++x) {
      kids.push_back(bijection_tree(insert_sorted(pos, {x, h[x]}), r - 1));
    }
    node["children"] = std::move(kids);
    return node;
  }
};

Pairs ef_start(const StructurePtr& a, const StructurePtr& b) {
  Pairs start;
  if (a->pointed()) start.emplace_back(a->point(), b->point());
  return start;
}

void ef_guards(const StructurePtr& a, const StructurePtr& b, int k) {
  if (k < 1) throw GuardError("ef games need k >= 1");
  if (a->size() > 16 || b->size() > 16) {
    throw GuardError("ef game guard: |A|, |B| <= 16");
  }
}

ojson positions_witness_ef(const EfEngine& eng, const Pairs& start, int k) {
  ojson entries = ojson::array();
  auto add_entry = [&entries](const Pairs& pos, int r) {
    ojson e;
    ojson pp = ojson::array();
    for (const auto& [x, y] : pos) pp.push_back(ojson::array({x, y}));
    e["pairs"] = std::move(pp);
    e["rounds"] = r;
    entries.push_back(std::move(e));
  };
  bool saw_start = false;
  for (const auto& [key, val] : eng.memo) {
    if (!val) continue;
    add_entry(key.first, key.second);
    if (key.first == start && key.second == k) saw_start = true;
  }
  if (!saw_start) add_entry(start, k);
  ojson w;
  w["type"] = "positions";
  w["entries"] = std::move(entries);
  return w;
}

// ---------------------------------------------------------------------------
// Modal games: one pebbled pair walking forward along binary relations.

struct ModalEngine {
  const Structure& A;
  const Structure& B;
  AdjCache aa, ab;
  bool bisim;
  std::map<std::tuple<int, int, int>, bool> memo;

  ModalEngine(const Structure& a, const Structure& b, bool bisim_)
      : A(a), B(b), aa(a), ab(b), bisim(bisim_) {}

  bool unary_ok(int x, int y) const {
    for (int r = 0; r < aa.nrel; ++r) {
      if (aa.arity[r] != 1) continue;
      bool ina = aa.r1(r, x), inb = ab.r1(r, y);
      if ((ina && !inb) || (bisim && inb && !ina)) return false;
    }
    return true;
  }

  bool sim(int x, int y, int r) {
    if (!unary_ok(x, y)) return false;
    if (r == 0) return true;
    auto key = std::make_tuple(x, y, r);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool res = true;
    for (int rel = 0; rel < aa.nrel && res; ++rel) {
      if (aa.arity[rel] != 2) continue;
      for (int x2 = 0; x2 < A.size() && res; ++x2) {
        if (!aa.r2(rel, x, x2)) continue;
        bool found = false;
        for (int y2 = 0; y2 < B.size() && !found; ++y2) {
          if (ab.r2(rel, y, y2) && sim(x2, y2, r - 1)) found = true;
        }
        if (!found) res = false;
      }
      if (!bisim) continue;
      for (int y2 = 0; y2 < B.size() && res; ++y2) {
        if (!ab.r2(rel, y, y2)) continue;
        bool found = false;
        for (int x2 = 0; x2 < A.size() && !found; ++x2) {
          if (aa.r2(rel, x, x2) && sim(x2, y2, r - 1)) found = true;
        }
        if (!found) res = false;
      }
    }
    memo.emplace(key, res);
    return res;
  }
};

void modal_guards(const StructurePtr& a, const StructurePtr& b, int k) {
  if (k < 0) throw GuardError("modal games need k >= 0");
  if (!a->pointed() || !b->pointed()) {
    throw GuardError("modal games require pointed structures");
  }
  if (!a->sig().is_modal()) {
    throw UnsupportedError("modal games need a modal signature (arities <= 2)");
  }
}

ojson positions_witness_modal(const ModalEngine& eng, int a0, int b0, int k) {
  ojson entries = ojson::array();
  auto add_entry = [&entries](int x, int y, int r) {
    ojson e;
    e["pairs"] = ojson::array({ojson::array({x, y})});
    e["rounds"] = r;
    entries.push_back(std::move(e));
  };
  bool saw_start = false;
  for (const auto& [key, val] : eng.memo) {
    if (!val) continue;
    auto [x, y, r] = key;
    add_entry(x, y, r);
    if (x == a0 && y == b0 && r == k) saw_start = true;
  }
  if (!saw_start) add_entry(a0, b0, k);
  ojson w;
  w["type"] = "positions";
  w["entries"] = std::move(entries);
  return w;
}

ojson positions_witness_pebble(const PebbleOutcome& out) {
  ojson entries = ojson::array();
  for (const auto& pos : out.winning) {
    ojson e;
    ojson pp = ojson::array();
    for (const auto& [x, y] : pos) pp.push_back(ojson::array({x, y}));
    e["pairs"] = std::move(pp);
    entries.push_back(std::move(e));
  }
  ojson w;
  w["type"] = "positions";
  w["entries"] = std::move(entries);
  return w;
}

PebbleMode pebble_mode_for(Fragment f) {
  switch (f) {
    case Fragment::kPe: return PebbleMode::kPeForth;
    case Fragment::kExist: return PebbleMode::kExistForth;
    case Fragment::kFull: return PebbleMode::kFull;
    case Fragment::kCount: return PebbleMode::kCount;
  }
  throw Error("unreachable fragment");
}

Verdict run_ef_game(Fragment frag, const StructurePtr& a, const StructurePtr& b,
                    int k, const DecideOptions& opts, bool reflect, bool full) {
  ef_guards(a, b, k);
  EfEngine eng(*a, *b, reflect, full);
  Pairs start = ef_start(a, b);
  bool ok = eng.position_safe(start) && eng.win(start, k);
  Verdict v = make_verdict(frag, Kind::kEf, k, ok, "ef-memo");
  if (ok && opts.want_witness) {
    v.witness_json = positions_witness_ef(eng, start, k).dump();
  }
  return v;
}

Verdict run_pebble_game(Fragment frag, const StructurePtr& a,
                        const StructurePtr& b, int k,
                        const DecideOptions& opts) {
  if (k < 1) throw GuardError("pebble games need k >= 1");
  PebbleOutcome out =
      pebble_gfp(*a, *b, k, pebble_mode_for(frag), opts.want_witness);
  bool pointed = a->pointed() && b->pointed();
  bool ok = pointed ? out.seed_alive : out.empty_alive;
  Verdict v = make_verdict(frag, Kind::kPebble, k, ok,
                           frag == Fragment::kCount ? "pebble-bijective"
                                                    : "pebble-gfp");
  if (ok && opts.want_witness) {
    v.witness_json = positions_witness_pebble(out).dump();
  }
  return v;
}

Verdict run_modal_game(Fragment frag, const StructurePtr& a,
                       const StructurePtr& b, int k, const DecideOptions& opts,
                       bool bisim) {
  modal_guards(a, b, k);
  ModalEngine eng(*a, *b, bisim);
  bool ok = eng.sim(a->point(), b->point(), k);
  Verdict v = make_verdict(frag, Kind::kModal, k, ok,
                           bisim ? "modal-bisim" : "modal-sim");
  if (ok && opts.want_witness) {
    v.witness_json =
        positions_witness_modal(eng, a->point(), b->point(), k).dump();
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

Fragment fragment_from_string(const std::string& s) {
  if (s == "pe") return Fragment::kPe;
  if (s == "exist") return Fragment::kExist;
  if (s == "count") return Fragment::kCount;
  if (s == "full") return Fragment::kFull;
  throw ParseError("unknown fragment: " + s);
}

std::string fragment_to_string(Fragment f) {
  switch (f) {
    case Fragment::kPe: return "pe";
    case Fragment::kExist: return "exist";
    case Fragment::kCount: return "count";
    case Fragment::kFull: return "full";
  }
  return "?";
}

Verdict pe_forth(Kind kind, const StructurePtr& a, const StructurePtr& b,
                 int k, const DecideOptions& opts) {
  check_common(a, b);
  switch (kind) {
    case Kind::kEf:
      return run_ef_game(Fragment::kPe, a, b, k, opts, false, false);
    case Kind::kPebble:
      return run_pebble_game(Fragment::kPe, a, b, k, opts);
    case Kind::kModal:
      return run_modal_game(Fragment::kPe, a, b, k, opts, false);
    case Kind::kCos:
      break;
  }
  throw UnsupportedError("no game decider for the round-walk kind");
}

Verdict exist_forth(Kind kind, const StructurePtr& a, const StructurePtr& b,
                    int k, const DecideOptions& opts) {
  check_common(a, b);
  switch (kind) {
    case Kind::kEf:
      return run_ef_game(Fragment::kExist, a, b, k, opts, true, false);
    case Kind::kPebble:
      return run_pebble_game(Fragment::kExist, a, b, k, opts);
    default:
      break;
  }
  throw UnsupportedError("exist_forth is defined for ef and pebble kinds");
}

Verdict full_equiv(Kind kind, const StructurePtr& a, const StructurePtr& b,
                   int k, const DecideOptions& opts) {
  check_common(a, b);
  switch (kind) {
    case Kind::kEf:
      return run_ef_game(Fragment::kFull, a, b, k, opts, true, true);
    case Kind::kPebble:
      return run_pebble_game(Fragment::kFull, a, b, k, opts);
    case Kind::kModal:
      return run_modal_game(Fragment::kFull, a, b, k, opts, true);
    case Kind::kCos:
      break;
  }
  throw UnsupportedError("no game decider for the round-walk kind");
}

Verdict count_equiv(Kind kind, const StructurePtr& a, const StructurePtr& b,
                    int k, const DecideOptions& opts) {
  check_common(a, b);
  if (kind == Kind::kModal || kind == Kind::kCos) {
    throw UnsupportedError("count_equiv is defined for ef and pebble kinds");
  }
  if (a->pointed() || b->pointed()) {
    throw GuardError("count_equiv requires unpointed structures");
  }
  if (opts.force_wl && kind != Kind::kPebble) {
    throw UnsupportedError("the WL backend applies to the pebble kind");
  }
  if (a->size() != b->size()) {
    return make_verdict(Fragment::kCount, kind, k, false, "size");
  }
  if (kind == Kind::kEf) {
    if (k < 1) throw GuardError("ef games need k >= 1");
    if (a->size() > 6) throw GuardError("count_equiv(ef) guard: |A| <= 6");
    EfEngine eng(*a, *b, true, false);
    bool ok = eng.win_count({}, k);
    Verdict v = make_verdict(Fragment::kCount, kind, k, ok, "ef-bijective");
    if (ok && opts.want_witness) {
      ojson w;
      w["type"] = "bijection_tree";
      w["tree"] = eng.bijection_tree({}, k);
      v.witness_json = w.dump();
    }
    return v;
  }
  // Pebble kind: exact fixpoint when small, WL refinement on request.
  if (opts.force_wl) {
    if (k != 2 && k != 3) {
      throw UnsupportedError("the WL backend supports k = 2 or 3");
    }
    bool ok = wl_equiv(*a, *b, k - 1, kWlWithEquality);
    return make_verdict(Fragment::kCount, kind, k, ok,
                        k == 2 ? "wl-1" : "wl-2");
  }
  return run_pebble_game(Fragment::kCount, a, b, k, opts);
}

Verdict equivalent(Kind kind, Fragment frag, const StructurePtr& a,
                   const StructurePtr& b, int k, const DecideOptions& opts) {
  if (frag == Fragment::kFull) return full_equiv(kind, a, b, k, opts);
  if (frag == Fragment::kCount) return count_equiv(kind, a, b, k, opts);
  auto one = frag == Fragment::kPe ? pe_forth : exist_forth;
  Verdict fwd = one(kind, a, b, k, opts);
  if (!fwd.result) {
    Verdict v = make_verdict(frag, kind, k, false, fwd.backend);
    return v;
  }
  Verdict bwd = one(kind, b, a, k, opts);
  Verdict v = make_verdict(frag, kind, k, bwd.result, fwd.backend);
  if (v.result && opts.want_witness && fwd.witness_json && bwd.witness_json) {
    ojson w;
    w["type"] = "pair";
    w["forward"] = ojson::parse(*fwd.witness_json);
    w["backward"] = ojson::parse(*bwd.witness_json);
    v.witness_json = w.dump();
  }
  return v;
}

Verdict hom_exists(Kind kind, const StructurePtr& a, const StructurePtr& b,
                   int k, const DecideOptions& opts) {
  check_common(a, b);
  if (kind == Kind::kPebble) {
    throw UnsupportedError("undecidable via truncated carrier; use pebble_forth");
  }
  if (kind == Kind::kCos) {
    throw UnsupportedError("no homomorphism decider for the round-walk kind");
  }
  ComonadInstance ca = build_comonad(kind, a, k);
  auto hom = find_homomorphism(ca.carrier, b);
  Verdict v = make_verdict(Fragment::kPe, kind, k, hom.has_value(),
                           "carrier-csp");
  if (hom && opts.want_witness) {
    ojson w;
    w["type"] = "hom";
    w["table"] = hom->table;
    v.witness_json = w.dump();
  }
  return v;
}

// ---------------------------------------------------------------------------
// Kleisli isomorphism search.

namespace {

// g* applied to element i of cb, as a key into ca; g must be assigned on i
// and all its prefixes.
std::vector<int> gstar_key(const ComonadInstance& cb, Kind kind, int i,
                           const std::vector<int>& g) {
  std::vector<int> key;
  if (kind == Kind::kEf) {
    int len = cb.length(i);
    key.resize(len);
    for (int j = 1; j <= len; ++j) key[j - 1] = g[cb.prefix(i, j)];
  } else {
    const std::vector<int>& bk = cb.key(i);
    key = bk;
    int len = cb.length(i);
    key[0] = g[cb.prefix(i, 0)];
    for (int t = 1; t <= len; ++t) key[2 * t] = g[cb.prefix(i, t)];
  }
  return key;
}

struct KleisliSearch {
  const ComonadInstance& ca;
  const ComonadInstance& cb;
  Kind kind;
  const Structure& base_a;
  const std::vector<int>& f;        // current candidate C(A) -> B
  std::vector<int> forced;          // from g o f* = counit_A
  std::vector<int> g;
  // carrier_b tuples grouped by their max element index.
  const std::vector<std::vector<std::pair<int, Tuple>>>& tup_by_max;

  bool extend(int i) {
    if (i == cb.size()) return true;
    int lo = 0, hi = base_a.size();
    if (forced[i] >= 0) {
      lo = forced[i];
      hi = forced[i] + 1;
    }
    for (int cand = lo; cand < hi; ++cand) {
      g[i] = cand;
      if (!hom_ok(i)) continue;
      auto key = gstar_key(cb, kind, i, g);
      int xa = ca.index_of_key(key);
      if (xa < 0 || f[xa] != cb.counit(i)) continue;
      if (extend(i + 1)) return true;
    }
    g[i] = -1;
    return false;
  }

  bool hom_ok(int i) const {
    for (const auto& [rel, t] : tup_by_max[i]) {
      Tuple img(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) img[j] = g[t[j]];
      if (!base_a.has_tuple(rel, img)) return false;
    }
    return true;
  }
};

}  // namespace

Verdict kleisli_iso_search(Kind kind, const StructurePtr& a,
                           const StructurePtr& b, int k,
                           const DecideOptions& opts) {
  check_common(a, b);
  if (kind != Kind::kEf && kind != Kind::kModal) {
    throw UnsupportedError("kleisli_iso_search supports ef and modal kinds");
  }
  if (a->size() > 3 || b->size() > 3) {
    throw GuardError("kleisli_iso_search guard: |A|, |B| <= 3");
  }
  if (k > 2) throw GuardError("kleisli_iso_search guard: k <= 2");
  if (kind == Kind::kEf && a->size() != b->size()) {
    // g(f*[x]) = x forces x -> f([x]) to be injective, and symmetrically.
    return make_verdict(Fragment::kCount, kind, k, false, "size");
  }

  ComonadInstance ca = build_comonad(kind, a, k);
  ComonadInstance cb = build_comonad(kind, b, k);

  std::vector<std::vector<std::pair<int, Tuple>>> tup_by_max(cb.size());
  for (int r = 0; r < cb.carrier->sig().count(); ++r) {
    for (const Tuple& t : cb.carrier->tuples(r)) {
      int mx = *std::max_element(t.begin(), t.end());
      tup_by_max[mx].emplace_back(r, t);
    }
  }

  bool found = false;
  std::vector<int> wit_f, wit_g;
  for_each_homomorphism(
      ca.carrier, b, [&](const StructureMap& fm) {
        std::vector<int> fstar = coextend(ca, cb, fm.table);
        std::vector<int> forced(cb.size(), -1);
        for (int x = 0; x < ca.size(); ++x) {
          int y = fstar[x], want = ca.counit(x);
          if (forced[y] >= 0 && forced[y] != want) return true;
          forced[y] = want;
        }
        KleisliSearch ks{ca, cb, kind, *a, fm.table, std::move(forced),
                         std::vector<int>(cb.size(), -1), tup_by_max};
        if (ks.extend(0)) {
          found = true;
          wit_f = fm.table;
          wit_g = ks.g;
          return false;
        }
        return true;
      });

  Verdict v = make_verdict(Fragment::kCount, kind, k, found, "kleisli-search");
  if (found && opts.want_witness) {
    ojson w;
    w["type"] = "kleisli_pair";
    w["f"] = wit_f;
    w["g"] = wit_g;
    v.witness_json = w.dump();
  }
  return v;
}

// ---------------------------------------------------------------------------
// Witness replay.

namespace {

bool replay_positions_ef(Fragment frag, const StructurePtr& a,
                         const StructurePtr& b, int k, const ojson& w) {
  bool reflect = frag != Fragment::kPe;
  bool full = frag == Fragment::kFull;
  EfEngine eng(*a, *b, reflect, full);
  std::map<Pairs, std::vector<char>> wins;  // position -> rounds present
  std::vector<std::pair<Pairs, int>> listed;
  for (const auto& e : w.at("entries")) {
    Pairs pos;
    for (const auto& pr : e.at("pairs")) {
      int x = pr.at(0).get<int>(), y = pr.at(1).get<int>();
      if (x < 0 || x >= a->size() || y < 0 || y >= b->size()) return false;
      pos.emplace_back(x, y);
    }
    std::sort(pos.begin(), pos.end());
    int r = e.at("rounds").get<int>();
    if (r < 0 || r > k) return false;
    auto& marks = wins[pos];
    marks.resize(k + 1, 0);
    marks[r] = 1;
    listed.emplace_back(std::move(pos), r);
  }
  auto in_set = [&wins](const Pairs& pos, int r) {
    auto it = wins.find(pos);
    return it != wins.end() && it->second[r];
  };
  Pairs start = ef_start(a, b);
  if (!in_set(start, k)) return false;
  for (const auto& [pos, r] : listed) {
    if (!eng.position_safe(pos)) return false;
    if (r == 0) continue;
    for (int x = 0; x < a->size(); ++x) {
      bool found = false;
      for (int y = 0; y < b->size() && !found; ++y) {
        found = eng.pair_ok(pos, x, y) &&
                (r == 1 || in_set(EfEngine::insert_sorted(pos, {x, y}), r - 1));
      }
      if (!found) return false;
    }
    if (!full) continue;
    for (int y = 0; y < b->size(); ++y) {
      bool found = false;
      for (int x = 0; x < a->size() && !found; ++x) {
        found = eng.pair_ok(pos, x, y) &&
                (r == 1 || in_set(EfEngine::insert_sorted(pos, {x, y}), r - 1));
      }
      if (!found) return false;
    }
  }
  return true;
}

bool replay_positions_modal(Fragment frag, const StructurePtr& a,
                            const StructurePtr& b, int k, const ojson& w) {
  ModalEngine eng(*a, *b, frag == Fragment::kFull);
  AdjCache aa(*a), ab(*b);
  std::map<std::pair<int, int>, std::vector<char>> wins;
  std::vector<std::tuple<int, int, int>> listed;
  for (const auto& e : w.at("entries")) {
    const auto& pp = e.at("pairs");
    if (pp.size() != 1) return false;
    int x = pp.at(0).at(0).get<int>(), y = pp.at(0).at(1).get<int>();
    if (x < 0 || x >= a->size() || y < 0 || y >= b->size()) return false;
    int r = e.at("rounds").get<int>();
    if (r < 0 || r > k) return false;
    auto& marks = wins[{x, y}];
    marks.resize(k + 1, 0);
    marks[r] = 1;
    listed.emplace_back(x, y, r);
  }
  auto in_set = [&wins](int x, int y, int r) {
    auto it = wins.find({x, y});
    return it != wins.end() && it->second[r];
  };
  if (!in_set(a->point(), b->point(), k)) return false;
  for (const auto& [x, y, r] : listed) {
    if (!eng.unary_ok(x, y)) return false;
    if (r == 0) continue;
    for (int rel = 0; rel < aa.nrel; ++rel) {
      if (aa.arity[rel] != 2) continue;
      for (int x2 = 0; x2 < a->size(); ++x2) {
        if (!aa.r2(rel, x, x2)) continue;
        bool found = false;
        for (int y2 = 0; y2 < b->size() && !found; ++y2) {
          found = ab.r2(rel, y, y2) && eng.unary_ok(x2, y2) &&
                  (r == 1 || in_set(x2, y2, r - 1));
        }
        if (!found) return false;
      }
      if (frag != Fragment::kFull) continue;
      for (int y2 = 0; y2 < b->size(); ++y2) {
        if (!ab.r2(rel, y, y2)) continue;
        bool found = false;
        for (int x2 = 0; x2 < a->size() && !found; ++x2) {
          found = aa.r2(rel, x, x2) && eng.unary_ok(x2, y2) &&
                  (r == 1 || in_set(x2, y2, r - 1));
        }
        if (!found) return false;
      }
    }
  }
  return true;
}

bool replay_positions_pebble(Fragment frag, const StructurePtr& a,
                             const StructurePtr& b, int k, const ojson& w) {
  std::vector<std::vector<std::pair<int, int>>> wins;
  for (const auto& e : w.at("entries")) {
    std::vector<std::pair<int, int>> pos;
    for (const auto& pr : e.at("pairs")) {
      pos.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
    }
    wins.push_back(std::move(pos));
  }
  return pebble_replay(*a, *b, k, pebble_mode_for(frag), wins);
}

bool replay_bijection_tree(const StructurePtr& a, const StructurePtr& b, int k,
                           const ojson& w) {
  if (a->size() != b->size()) return false;
  EfEngine eng(*a, *b, true, false);
  int n = a->size();
  // Recursive walk without std::function: explicit stack of (node, pos, r).
  struct Frame {
    const ojson* node;
    Pairs pos;
    int r;
  };
  std::vector<Frame> stack;
  stack.push_back({&w.at("tree"), {}, k});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (fr.r == 0) {
      if (!fr.node->is_null()) return false;
      continue;
    }
    if (!fr.node->is_object()) return false;
    const auto& hj = fr.node->at("bijection");
    if (static_cast<int>(hj.size()) != n) return false;
    std::vector<int> h(n), seen(n, 0);
    for (int i = 0; i < n; ++i) {
      h[i] = hj.at(i).get<int>();
      if (h[i] < 0 || h[i] >= n || seen[h[i]]++) return false;
    }
    const auto& kids = fr.node->at("children");
    if (static_cast<int>(kids.size()) != n) return false;
    for (int x = 0; x < n; ++x) {
      if (!eng.pair_ok(fr.pos, x, h[x])) return false;
      stack.push_back({&kids.at(x),
                       EfEngine::insert_sorted(fr.pos, {x, h[x]}), fr.r - 1});
    }
  }
  return true;
}

bool replay_hom(Kind kind, const StructurePtr& a, const StructurePtr& b, int k,
                const ojson& w) {
  ComonadInstance ca = build_comonad(kind, a, k);
  std::vector<int> table = w.at("table").get<std::vector<int>>();
  if (static_cast<int>(table.size()) != ca.size()) return false;
  for (int v : table) {
    if (v < 0 || v >= b->size()) return false;
  }
  StructureMap f{ca.carrier, b, table};
  return is_homomorphism(f);
}

bool replay_kleisli(Kind kind, const StructurePtr& a, const StructurePtr& b,
                    int k, const ojson& w) {
  ComonadInstance ca = build_comonad(kind, a, k);
  ComonadInstance cb = build_comonad(kind, b, k);
  std::vector<int> f = w.at("f").get<std::vector<int>>();
  std::vector<int> g = w.at("g").get<std::vector<int>>();
  if (static_cast<int>(f.size()) != ca.size()) return false;
  if (static_cast<int>(g.size()) != cb.size()) return false;
  for (int v : f) {
    if (v < 0 || v >= b->size()) return false;
  }
  for (int v : g) {
    if (v < 0 || v >= a->size()) return false;
  }
  if (!is_homomorphism({ca.carrier, b, f})) return false;
  if (!is_homomorphism({cb.carrier, a, g})) return false;
  std::vector<int> fstar = coextend(ca, cb, f);
  std::vector<int> gstar = coextend(cb, ca, g);
  for (int x = 0; x < ca.size(); ++x) {
    if (g[fstar[x]] != ca.counit(x)) return false;
  }
  for (int y = 0; y < cb.size(); ++y) {
    if (f[gstar[y]] != cb.counit(y)) return false;
  }
  return true;
}

}  // namespace

bool replay_witness(const Verdict& v, const StructurePtr& a,
                    const StructurePtr& b) {
  if (!v.witness_json) return false;
  ojson w = ojson::parse(*v.witness_json);
  std::string type = w.at("type").get<std::string>();
  if (type == "pair") {
    Verdict sub = v;
    sub.witness_json = w.at("forward").dump();
    if (!replay_witness(sub, a, b)) return false;
    sub.witness_json = w.at("backward").dump();
    return replay_witness(sub, b, a);
  }
  if (type == "hom") return replay_hom(v.kind, a, b, v.k, w);
  if (type == "kleisli_pair") return replay_kleisli(v.kind, a, b, v.k, w);
  if (type == "bijection_tree") return replay_bijection_tree(a, b, v.k, w);
  if (type == "positions") {
    switch (v.kind) {
      case Kind::kEf:
        return replay_positions_ef(v.fragment, a, b, v.k, w);
      case Kind::kPebble:
        return replay_positions_pebble(v.fragment, a, b, v.k, w);
      case Kind::kModal:
        return replay_positions_modal(v.fragment, a, b, v.k, w);
      case Kind::kCos:
        return false;
    }
  }
  return false;
}

}  // namespace fvm
