#include "fvm/hom_search.hpp"

#include <algorithm>

namespace fvm {

namespace {

struct HomSearch {
  const Structure& a;
  const Structure& b;
  std::vector<uint64_t> domain;          // candidate targets per source element
  std::vector<std::vector<std::pair<int, int>>> incident;  // element -> (rel, tuple idx)
  std::vector<int> img;
  std::function<bool(const StructureMap&)> visit;
  StructurePtr a_ptr, b_ptr;
  long long visited = 0;
  bool stop = false;

  HomSearch(const StructurePtr& ap, const StructurePtr& bp,
            std::function<bool(const StructureMap&)> fn)
      : a(*ap), b(*bp), visit(std::move(fn)), a_ptr(ap), b_ptr(bp) {
    if (a.sig() != b.sig()) throw Error("homomorphism search needs a common signature");
    if (b.size() > 64) throw GuardError("homomorphism target larger than 64 elements");
    if (a.pointed() != b.pointed())
      throw Error("homomorphism search needs both or neither structure pointed");
    uint64_t full = (b.size() == 64) ? ~uint64_t{0} : ((uint64_t{1} << b.size()) - 1);
    domain.assign(a.size(), full);
    // Unary constraints restrict domains up front.
    for (int r = 0; r < a.sig().count(); ++r) {
      if (a.sig().rel(r).arity != 1) continue;
      uint64_t allowed = 0;
      for (const Tuple& t : b.tuples(r)) allowed |= uint64_t{1} << t[0];
      for (const Tuple& t : a.tuples(r)) domain[t[0]] &= allowed;
    }
    if (a.pointed()) domain[a.point()] = uint64_t{1} << b.point();
    incident.resize(a.size());
    for (int r = 0; r < a.sig().count(); ++r) {
      if (a.sig().rel(r).arity < 2) continue;
      for (size_t ti = 0; ti < a.tuples(r).size(); ++ti)
        for (int v : a.tuples(r)[ti]) {
          auto& inc = incident[v];
          if (inc.empty() || inc.back() != std::make_pair(r, (int)ti))
            inc.push_back({r, (int)ti});
        }
    }
    img.assign(a.size(), -1);
  }

  // After assigning x, shrink domains of unassigned elements sharing a
  // tuple with x to values that keep the tuple completable.
  bool prune(int x, std::vector<std::pair<int, uint64_t>>& undo) {
    for (auto [r, ti] : incident[x]) {
      const Tuple& t = a.tuples(r)[ti];
      int unassigned = -1;
      bool multi = false;
      for (int v : t)
        if (img[v] < 0) {
          if (unassigned >= 0 && unassigned != v) multi = true;
          unassigned = v;
        }
      if (multi) continue;
      if (unassigned < 0) {
        Tuple mapped(t.size());
        for (size_t i = 0; i < t.size(); ++i) mapped[i] = img[t[i]];
        if (!b.has_tuple(r, mapped)) return false;
        continue;
      }
      uint64_t allowed = 0;
      for (const Tuple& bt : b.tuples(r)) {
        bool fit = true;
        for (size_t i = 0; i < t.size(); ++i) {
          if (t[i] == unassigned) continue;
          if (img[t[i]] != bt[i]) {
            fit = false;
            break;
          }
        }
        if (!fit) continue;
        // All occurrences of the unassigned element must agree.
        int val = -1;
        for (size_t i = 0; i < t.size(); ++i)
          if (t[i] == unassigned) {
            if (val >= 0 && val != bt[i]) {
              val = -2;
              break;
            }
            val = bt[i];
          }
        if (val >= 0) allowed |= uint64_t{1} << val;
      }
      uint64_t next = domain[unassigned] & allowed;
      if (next != domain[unassigned]) {
        undo.push_back({unassigned, domain[unassigned]});
        domain[unassigned] = next;
        if (!next) return false;
      }
    }
    return true;
  }

  void run(int depth) {
    if (stop) return;
    if (depth == a.size()) {
      ++visited;
      StructureMap f{a_ptr, b_ptr, img};
      if (!visit(f)) stop = true;
      return;
    }
    // Most-constrained-first among unassigned.
    int x = -1;
    int best = 65;
    for (int v = 0; v < a.size(); ++v) {
      if (img[v] >= 0) continue;
      int c = __builtin_popcountll(domain[v]);
      if (c < best) {
        best = c;
        x = v;
      }
    }
    uint64_t cands = domain[x];
    while (cands && !stop) {
      int y = __builtin_ctzll(cands);
      cands &= cands - 1;
      img[x] = y;
      std::vector<std::pair<int, uint64_t>> undo;
      if (prune(x, undo)) run(depth + 1);
      for (auto& [v, d] : undo) domain[v] = d;
      img[x] = -1;
    }
  }
};

}  // namespace

std::optional<StructureMap> find_homomorphism(const StructurePtr& a,
                                              const StructurePtr& b) {
  std::optional<StructureMap> out;
  HomSearch s(a, b, [&](const StructureMap& f) {
    out = f;
    return false;
  });
  for (int v = 0; v < a->size(); ++v)
    if (!s.domain[v]) return std::nullopt;
  s.run(0);
  return out;
}

long long for_each_homomorphism(
    const StructurePtr& a, const StructurePtr& b,
    const std::function<bool(const StructureMap&)>& fn) {
  HomSearch s(a, b, fn);
  for (int v = 0; v < a->size(); ++v)
    if (!s.domain[v]) return 0;
  s.run(0);
  return s.visited;
}

}  // namespace fvm
