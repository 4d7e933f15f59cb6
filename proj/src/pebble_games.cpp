#include "fvm/pebble_games.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>

namespace fvm {
namespace {

constexpr int kMaxK = 6;

std::mutex g_space_mutex;
std::map<std::tuple<int, int, int>, std::shared_ptr<const PebblePositionSpace>>
    g_spaces;

// Multisets are packed as one byte per entry (pair id + 1), length-extended;
// fits k <= 6 with pair ids below 255.
std::uint64_t pack_multiset(const int* entries, int len) {
  std::uint64_t key = static_cast<std::uint64_t>(len);
  for (int i = 0; i < len; ++i) {
    key |= static_cast<std::uint64_t>(entries[i] + 1) << (8 * (i + 1));
  }
  return key;
}

long long count_positions(int pairs, int k) {
  long long total = 0;
  long long c = 1;  // C(pairs - 1 + l, l) for l = 0
  for (int l = 0;; ++l) {
    total += c;
    if (l == k) break;
    c = c * (pairs + l) / (l + 1);
    if (c > 100000000 || total > 100000000) return -1;
  }
  return total;
}

std::shared_ptr<const PebblePositionSpace> build_space(int na, int nb, int k) {
  if (na < 1 || nb < 1) throw GuardError("pebble game needs nonempty structures");
  if (k < 1 || k > kMaxK) throw GuardError("pebble game supports 1 <= k <= 6");
  if (na * nb > 254) throw GuardError("pebble game supports |A|*|B| <= 254");
  int pairs = na * nb;
  long long predicted = count_positions(pairs, k);
  if (predicted < 0 || predicted > 1000000 ||
      predicted * pairs > 20000000) {
    throw GuardError("pebble game position space too large");
  }

  auto sp = std::make_shared<PebblePositionSpace>();
  sp->na = na;
  sp->nb = nb;
  sp->k = k;
  sp->pairs = pairs;
  sp->total = static_cast<int>(predicted);
  sp->len.reserve(sp->total);
  sp->entry.assign(static_cast<std::size_t>(sp->total) * k, -1);

  std::map<std::uint64_t, int> index;
  std::vector<int> scratch(k, 0);
  // Length-major generation: each length-l position extends a length-(l-1)
  // one by a pair id >= its last entry, which keeps entries sorted and the
  // order within a length lexicographic.
  index.emplace(pack_multiset(nullptr, 0), 0);
  sp->len.push_back(0);
  int level_begin = 0;
  for (int l = 1; l <= k; ++l) {
    int level_end = static_cast<int>(sp->len.size());
    for (int parent = level_begin; parent < level_end; ++parent) {
      const int* pe = sp->pos_entries(parent);
      int last = (l == 1) ? 0 : pe[l - 2];
      for (int p = last; p < pairs; ++p) {
        int id = static_cast<int>(sp->len.size());
        sp->len.push_back(l);
        for (int i = 0; i < l - 1; ++i) sp->entry[id * k + i] = pe[i];
        sp->entry[id * k + (l - 1)] = p;
        index.emplace(pack_multiset(sp->pos_entries(id), l), id);
      }
    }
    level_begin = level_end;
  }
  if (static_cast<int>(sp->len.size()) != sp->total) {
    throw Error("pebble position enumeration mismatch");
  }
  sp->inner = sp->total;
  for (int s = 0; s < sp->total; ++s) {
    if (sp->len[s] == k) {
      sp->inner = s;
      break;
    }
  }

  sp->rem_off.assign(sp->total + 1, 0);
  sp->rem_sub.clear();
  for (int s = 0; s < sp->total; ++s) {
    sp->rem_off[s] = static_cast<int>(sp->rem_sub.size());
    int l = sp->len[s];
    const int* pe = sp->pos_entries(s);
    for (int i = 0; i < l; ++i) {
      if (i > 0 && pe[i] == pe[i - 1]) continue;  // distinct removals only
      for (int j = 0; j < l; ++j) {
        if (j < i) scratch[j] = pe[j];
        else if (j > i) scratch[j - 1] = pe[j];
      }
      sp->rem_sub.push_back(index.at(pack_multiset(scratch.data(), l - 1)));
    }
  }
  sp->rem_off[sp->total] = static_cast<int>(sp->rem_sub.size());

  sp->add_tab.assign(static_cast<std::size_t>(sp->inner) * pairs, -1);
  for (int m = 0; m < sp->inner; ++m) {
    int l = sp->len[m];
    const int* pe = sp->pos_entries(m);
    for (int p = 0; p < pairs; ++p) {
      int pos = 0;
      for (int i = 0; i < l; ++i) {
        if (pe[i] <= p) {
          scratch[pos++] = pe[i];
        }
      }
      scratch[pos++] = p;
      for (int i = 0; i < l; ++i) {
        if (pe[i] > p) scratch[pos++] = pe[i];
      }
      sp->add_tab[static_cast<std::size_t>(m) * pairs + p] =
          index.at(pack_multiset(scratch.data(), l + 1));
    }
  }
  return sp;
}

bool two_way(PebbleMode mode) { return mode != PebbleMode::kPeForth; }

// Per-(A, B, mode) atomic compatibility: bin[p * P + q] says every binary
// relation is preserved (and, two-way, reflected) when the ordered pair of
// pebbled pairs (p, q) sits on the board; un[p] covers unary relations.
struct GfpContext {
  const PebblePositionSpace* sp = nullptr;
  const Structure* a = nullptr;
  const Structure* b = nullptr;
  PebbleMode mode = PebbleMode::kPeForth;
  std::vector<std::uint8_t> bin;
  std::vector<std::uint8_t> un;
  bool has_high = false;

  GfpContext(const PebblePositionSpace& space, const Structure& sa,
             const Structure& sb, PebbleMode m)
      : sp(&space), a(&sa), b(&sb), mode(m) {
    AdjCache aa(sa);
    AdjCache ab(sb);
    int P = space.pairs;
    int nb = space.nb;
    bool both = two_way(m);
    bin.assign(static_cast<std::size_t>(P) * P, 1);
    un.assign(P, 1);
    for (int r = 0; r < aa.nrel; ++r) {
      if (aa.arity[r] > 2) has_high = true;
    }
    for (int p = 0; p < P; ++p) {
      int ax = p / nb, bx = p % nb;
      for (int r = 0; r < aa.nrel; ++r) {
        if (aa.arity[r] != 1) continue;
        bool ina = aa.r1(r, ax), inb = ab.r1(r, bx);
        if ((ina && !inb) || (both && inb && !ina)) {
          un[p] = 0;
          break;
        }
      }
      for (int q = 0; q < P; ++q) {
        int ay = q / nb, by = q % nb;
        for (int r = 0; r < aa.nrel; ++r) {
          if (aa.arity[r] != 2) continue;
          bool ea = aa.r2(r, ax, ay), eb = ab.r2(r, bx, by);
          if ((ea && !eb) || (both && eb && !ea)) {
            bin[static_cast<std::size_t>(p) * P + q] = 0;
            break;
          }
        }
      }
    }
  }

  // Relations of arity >= 3, checked directly over the board's entries.
  bool safe_high(int s) const {
    int l = sp->len[s];
    const int* pe = sp->pos_entries(s);
    int nb = sp->nb;
    bool both = two_way(mode);
    for (int r = 0; r < a->sig().count(); ++r) {
      int m = a->sig().rel(r).arity;
      if (m <= 2) continue;
      if (l == 0) continue;
      long long combos = 1;
      for (int i = 0; i < m; ++i) {
        combos *= l;
        if (combos > 100000) throw GuardError("pebble game arity too large");
      }
      Tuple ta(m), tb(m);
      for (long long c = 0; c < combos; ++c) {
        long long v = c;
        for (int i = 0; i < m; ++i) {
          int e = pe[v % l];
          v /= l;
          ta[i] = e / nb;
          tb[i] = e % nb;
        }
        bool ina = a->has_tuple(r, ta), inb = b->has_tuple(r, tb);
        if ((ina && !inb) || (both && inb && !ina)) return false;
      }
    }
    return true;
  }

  bool safe(int s) const {
    int l = sp->len[s];
    const int* pe = sp->pos_entries(s);
    int P = sp->pairs;
    for (int i = 0; i < l; ++i) {
      if (!un[pe[i]]) return false;
      for (int j = 0; j < l; ++j) {
        if (!bin[static_cast<std::size_t>(pe[i]) * P + pe[j]]) return false;
      }
    }
    if (has_high && !safe_high(s)) return false;
    return true;
  }
};

bool match_rec(const std::uint32_t* rows, int n, int row, std::uint32_t used) {
  if (row == n) return true;
  std::uint32_t avail = rows[row] & ~used;
  while (avail) {
    std::uint32_t bit = avail & (~avail + 1);
    avail ^= bit;
    if (match_rec(rows, n, row + 1, used | bit)) return true;
  }
  return false;
}

inline bool bit_at(const std::vector<std::uint64_t>& bits, int i) {
  return (bits[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1;
}
inline void bit_clear(std::vector<std::uint64_t>& bits, int i) {
  bits[static_cast<std::size_t>(i) >> 6] &= ~(1ull << (i & 63));
}
inline void bit_set(std::vector<std::uint64_t>& bits, int i) {
  bits[static_cast<std::size_t>(i) >> 6] |= 1ull << (i & 63);
}

// Can Duplicator answer every Spoiler move from s inside `alive`?
bool survives(const PebblePositionSpace& sp,
              const std::vector<std::uint64_t>& alive, int s,
              PebbleMode mode) {
  int P = sp.pairs;
  int na = sp.na, nb = sp.nb;
  int subs[kMaxK + 1];
  int nsubs = 0;
  for (int t = sp.rem_off[s]; t < sp.rem_off[s + 1]; ++t) {
    subs[nsubs++] = sp.rem_sub[t];
  }
  if (sp.len[s] < sp.k) subs[nsubs++] = s;
  for (int si = 0; si < nsubs; ++si) {
    const int* row = sp.add_tab.data() + static_cast<std::size_t>(subs[si]) * P;
    if (mode == PebbleMode::kCount) {
      std::uint32_t rows[8];
      for (int x = 0; x < na; ++x) {
        std::uint32_t mask = 0;
        for (int y = 0; y < nb; ++y) {
          if (bit_at(alive, row[x * nb + y])) mask |= 1u << y;
        }
        if (!mask) return false;
        rows[x] = mask;
      }
      if (!match_rec(rows, na, 0, 0)) return false;
    } else {
      for (int x = 0; x < na; ++x) {
        bool found = false;
        for (int y = 0; y < nb && !found; ++y) {
          found = bit_at(alive, row[x * nb + y]);
        }
        if (!found) return false;
      }
      if (mode == PebbleMode::kFull) {
        for (int y = 0; y < nb; ++y) {
          bool found = false;
          for (int x = 0; x < na && !found; ++x) {
            found = bit_at(alive, row[x * nb + y]);
          }
          if (!found) return false;
        }
      }
    }
  }
  return true;
}

void check_inputs(const Structure& a, const Structure& b, PebbleMode mode) {
  if (!(a.sig() == b.sig())) throw GuardError("pebble game: signature mismatch");
  if (mode == PebbleMode::kCount) {
    if (a.pointed() || b.pointed()) {
      throw GuardError("bijective pebble game requires unpointed structures");
    }
    if (a.size() != b.size()) {
      throw GuardError("bijective pebble game requires |A| == |B|");
    }
    if (a.size() > 6) {
      throw GuardError("|A| too large for backend (i) without --wl flag");
    }
  } else if (a.pointed() != b.pointed()) {
    throw GuardError("pebble game: one structure is pointed, the other is not");
  }
}

int seed_index(const PebblePositionSpace& sp, const Structure& a,
               const Structure& b) {
  int p0 = a.point() * sp.nb + b.point();
  return sp.add_tab[p0];  // add to the empty position (index 0)
}

}  // namespace

std::shared_ptr<const PebblePositionSpace> pebble_space(int na, int nb, int k) {
  std::lock_guard<std::mutex> lock(g_space_mutex);
  auto key = std::make_tuple(na, nb, k);
  auto it = g_spaces.find(key);
  if (it != g_spaces.end()) return it->second;
  auto sp = build_space(na, nb, k);
  g_spaces.emplace(key, sp);
  return sp;
}

PebbleOutcome pebble_gfp(const Structure& a, const Structure& b, int k,
                         PebbleMode mode, bool want_witness) {
  check_inputs(a, b, mode);
  auto spp = pebble_space(a.size(), b.size(), k);
  const PebblePositionSpace& sp = *spp;
  GfpContext ctx(sp, a, b, mode);

  std::vector<std::uint64_t> alive((sp.total + 63) / 64, 0);
  for (int s = 0; s < sp.total; ++s) {
    if (ctx.safe(s)) bit_set(alive, s);
  }

  bool pointed = a.pointed() && b.pointed();
  int watch = pointed ? seed_index(sp, a, b) : 0;

  bool changed = true;
  while (changed && bit_at(alive, watch)) {
    changed = false;
    for (int s = 0; s < sp.total; ++s) {
      if (!bit_at(alive, s)) continue;
      if (!survives(sp, alive, s, mode)) {
        bit_clear(alive, s);
        changed = true;
        if (!bit_at(alive, watch)) break;
      }
    }
  }

  PebbleOutcome out;
  out.empty_alive = bit_at(alive, 0);
  out.seed_alive = pointed && bit_at(alive, watch);
  if (want_witness) {
    for (int s = 0; s < sp.total; ++s) {
      if (!bit_at(alive, s)) continue;
      std::vector<std::pair<int, int>> pos;
      const int* pe = sp.pos_entries(s);
      for (int i = 0; i < sp.len[s]; ++i) {
        pos.emplace_back(pe[i] / sp.nb, pe[i] % sp.nb);
      }
      out.winning.push_back(std::move(pos));
    }
  }
  return out;
}

bool pebble_replay(const Structure& a, const Structure& b, int k,
                   PebbleMode mode,
                   const std::vector<std::vector<std::pair<int, int>>>& wins) {
  check_inputs(a, b, mode);
  auto spp = pebble_space(a.size(), b.size(), k);
  const PebblePositionSpace& sp = *spp;
  GfpContext ctx(sp, a, b, mode);

  std::vector<std::uint64_t> member((sp.total + 63) / 64, 0);
  std::vector<int> listed;
  for (const auto& pos : wins) {
    if (static_cast<int>(pos.size()) > k) return false;
    std::vector<int> ids;
    for (const auto& [x, y] : pos) {
      if (x < 0 || x >= sp.na || y < 0 || y >= sp.nb) return false;
      ids.push_back(x * sp.nb + y);
    }
    std::sort(ids.begin(), ids.end());
    int idx = 0;
    for (int id : ids) idx = sp.add_tab[static_cast<std::size_t>(idx) * sp.pairs + id];
    bit_set(member, idx);
    listed.push_back(idx);
  }

  bool pointed = a.pointed() && b.pointed();
  int start = pointed ? seed_index(sp, a, b) : 0;
  if (!bit_at(member, start)) return false;
  for (int s : listed) {
    if (!ctx.safe(s)) return false;
    if (!survives(sp, member, s, mode)) return false;
  }
  return true;
}

}  // namespace fvm
