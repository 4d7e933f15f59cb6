#include "fvm/enumerate.hpp"

#include <algorithm>
#include <numeric>

namespace fvm {

namespace {

// Bit layout: relation blocks in signature order; within a block, tuple
// (t0..t_{a-1}) sits at sum t_i * n^(a-1-i).
struct BitLayout {
  std::vector<int> offset;
  std::vector<int> arity;
  int n = 0;
  int total = 0;

  BitLayout(const Signature& sig, int n_) : n(n_) {
    for (int r = 0; r < sig.count(); ++r) {
      offset.push_back(total);
      arity.push_back(sig.rel(r).arity);
      int cells = 1;
      for (int i = 0; i < sig.rel(r).arity; ++i) cells *= n;
      total += cells;
    }
  }

  int bit_of(int rel, const Tuple& t) const {
    int idx = 0;
    for (int v : t) idx = idx * n + v;
    return offset[rel] + idx;
  }

  Structure decode(const Signature& sig, uint64_t mask,
                   std::optional<int> point) const {
    std::vector<std::vector<Tuple>> interp(sig.count());
    for (int r = 0; r < sig.count(); ++r) {
      int cells = 1;
      for (int i = 0; i < arity[r]; ++i) cells *= n;
      for (int idx = 0; idx < cells; ++idx) {
        if (!((mask >> (offset[r] + idx)) & 1)) continue;
        Tuple t(arity[r]);
        int rem = idx;
        for (int i = arity[r] - 1; i >= 0; --i) {
          t[i] = rem % n;
          rem /= n;
        }
        interp[r].push_back(std::move(t));
      }
    }
    return Structure(sig, n, std::move(interp), point);
  }

  // bit -> bit map induced by the element permutation perm.
  std::vector<int> bit_map(const std::vector<int>& perm) const {
    std::vector<int> map(total);
    for (size_t r = 0; r < offset.size(); ++r) {
      int cells = 1;
      for (int i = 0; i < arity[r]; ++i) cells *= n;
      for (int idx = 0; idx < cells; ++idx) {
        int rem = idx, out = 0;
        std::vector<int> coords(arity[r]);
        for (int i = arity[r] - 1; i >= 0; --i) {
          coords[i] = rem % n;
          rem /= n;
        }
        for (int i = 0; i < arity[r]; ++i) out = out * n + perm[coords[i]];
        map[offset[r] + idx] = offset[r] + out;
      }
    }
    return map;
  }
};

uint64_t apply_bit_map(uint64_t mask, const std::vector<int>& map) {
  uint64_t out = 0;
  while (mask) {
    int b = __builtin_ctzll(mask);
    mask &= mask - 1;
    out |= uint64_t{1} << map[b];
  }
  return out;
}

std::vector<Structure> enumerate_impl(const Signature& sig, int n,
                                      bool up_to_iso, bool pointed) {
  if (n < 1 || n > 4) throw GuardError("enumeration supports 1 <= n <= 4");
  BitLayout layout(sig, n);
  if (layout.total > 20) throw GuardError("interpretation space too large to enumerate");

  std::vector<std::vector<int>> bit_maps;
  if (up_to_iso) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end())) {
      if (pointed && perm[0] != 0) continue;  // point (at 0) must stay fixed
      bit_maps.push_back(layout.bit_map(perm));
    }
  }

  std::vector<Structure> out;
  uint64_t end = uint64_t{1} << layout.total;
  for (uint64_t mask = 0; mask < end; ++mask) {
    bool keep = true;
    for (const auto& map : bit_maps)
      if (apply_bit_map(mask, map) < mask) {
        keep = false;
        break;
      }
    if (keep)
      out.push_back(layout.decode(sig, mask,
                                  pointed ? std::optional<int>(0) : std::nullopt));
  }
  return out;
}

}  // namespace

std::vector<Structure> enumerate_structures(const Signature& sig, int n,
                                            bool up_to_iso) {
  return enumerate_impl(sig, n, up_to_iso, false);
}

std::vector<Structure> enumerate_pointed(const Signature& sig, int n,
                                         bool up_to_iso) {
  return enumerate_impl(sig, n, up_to_iso, true);
}

namespace {

// Multiset of (relation, position-pattern) incidence counts — a cheap
// permutation invariant used to order and prune the backtracking.
std::vector<int> local_profile(const Structure& s, int x) {
  std::vector<int> prof;
  for (int r = 0; r < s.sig().count(); ++r) {
    int ar = s.sig().rel(r).arity;
    std::vector<int> pos_count(ar, 0);
    for (const Tuple& t : s.tuples(r))
      for (int i = 0; i < ar; ++i)
        if (t[i] == x) ++pos_count[i];
    prof.insert(prof.end(), pos_count.begin(), pos_count.end());
  }
  return prof;
}

bool extend_iso(const Structure& a, const Structure& b, std::vector<int>& img,
                std::vector<bool>& used, const std::vector<std::vector<int>>& prof_a,
                const std::vector<std::vector<int>>& prof_b, int depth,
                const std::vector<int>& order) {
  if (depth == a.size()) return true;
  int x = order[depth];
  for (int y = 0; y < b.size(); ++y) {
    if (used[y] || prof_a[x] != prof_b[y]) continue;
    img[x] = y;
    used[y] = true;
    // Check every tuple fully inside the assigned set, both directions.
    bool ok = true;
    for (int r = 0; ok && r < a.sig().count(); ++r) {
      for (const Tuple& t : a.tuples(r)) {
        bool all = true, touches = false;
        Tuple mapped(t.size());
        for (size_t i = 0; i < t.size(); ++i) {
          if (img[t[i]] < 0) {
            all = false;
            break;
          }
          mapped[i] = img[t[i]];
          if (t[i] == x) touches = true;
        }
        if (all && touches && !b.has_tuple(r, mapped)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      for (const Tuple& t : b.tuples(r)) {
        bool all = true, touches = false;
        Tuple pre(t.size());
        for (size_t i = 0; i < t.size(); ++i) {
          bool found = false;
          for (int z = 0; z <= depth; ++z)
            if (img[order[z]] == t[i]) {
              pre[i] = order[z];
              found = true;
              if (order[z] == x) touches = true;
              break;
            }
          if (!found) {
            all = false;
            break;
          }
        }
        if (all && touches && !a.has_tuple(r, pre)) {
          ok = false;
          break;
        }
      }
    }
    if (ok && extend_iso(a, b, img, used, prof_a, prof_b, depth + 1, order)) return true;
    img[x] = -1;
    used[y] = false;
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const Structure& a,
                                                 const Structure& b) {
  if (a.sig() != b.sig() || a.size() != b.size()) return std::nullopt;
  if (a.pointed() != b.pointed()) return std::nullopt;
  for (int r = 0; r < a.sig().count(); ++r)
    if (a.tuples(r).size() != b.tuples(r).size()) return std::nullopt;

  std::vector<std::vector<int>> prof_a, prof_b;
  for (int x = 0; x < a.size(); ++x) prof_a.push_back(local_profile(a, x));
  for (int y = 0; y < b.size(); ++y) prof_b.push_back(local_profile(b, y));
  {
    auto sa = prof_a, sb = prof_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }

  std::vector<int> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> img(a.size(), -1);
  std::vector<bool> used(b.size(), false);
  if (a.pointed()) {
    // Pin the point first so the search never violates it.
    std::swap(order[0], order[a.point()]);
    if (prof_a[a.point()] != prof_b[b.point()]) return std::nullopt;
    img[a.point()] = b.point();
    used[b.point()] = true;
    if (extend_iso(a, b, img, used, prof_a, prof_b, 1, order))
      return img;
    return std::nullopt;
  }
  if (extend_iso(a, b, img, used, prof_a, prof_b, 0, order)) return img;
  return std::nullopt;
}

}  // namespace fvm
