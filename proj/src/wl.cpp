#include "fvm/wl.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

namespace fvm {
namespace {

struct Item {
  int structure = 0;
  int x = 0;
  int y = 0;  // dim 1: y == x
};

void check_batch(const std::vector<const Structure*>& batch, int dim) {
  if (dim != 1 && dim != 2) {
    throw UnsupportedError("WL refinement supports dim 1 or 2");
  }
  if (batch.empty()) return;
  const Signature& sig = batch.front()->sig();
  int binary = 0;
  for (const Relation& r : sig.rels()) {
    if (r.arity > 2) {
      throw UnsupportedError("WL refinement supports arity <= 2 only");
    }
    if (r.arity == 2) ++binary;
  }
  if (binary > 15) {
    throw GuardError("WL refinement supports at most 15 binary relations");
  }
  for (const Structure* s : batch) {
    if (!(s->sig() == sig)) {
      throw Error("WL batch mixes signatures");
    }
  }
}

// Initial colors: the atomic type of the element / ordered pair.
std::vector<std::uint64_t> initial_content(const Structure& s, int x, int y,
                                           int dim, bool with_equality) {
  std::vector<std::uint64_t> c;
  std::uint64_t pt = 0;
  if (s.pointed()) pt = 1 + (x == s.point() ? 1 : 0) + (y == s.point() ? 2 : 0);
  c.push_back(pt);
  if (dim == 2 && with_equality) c.push_back(x == y ? 1 : 0);
  for (int r = 0; r < s.sig().count(); ++r) {
    if (s.sig().rel(r).arity == 1) {
      c.push_back((s.has1(r, x) ? 1u : 0u) | (s.has1(r, y) ? 2u : 0u));
    } else {
      std::uint64_t bits = 0;
      if (s.has2(r, x, x)) bits |= 1;
      if (s.has2(r, x, y)) bits |= 2;
      if (s.has2(r, y, x)) bits |= 4;
      if (s.has2(r, y, y)) bits |= 8;
      c.push_back(bits);
    }
  }
  return c;
}

}  // namespace

std::vector<std::vector<int>> wl_signatures(
    const std::vector<const Structure*>& batch, int dim, bool with_equality) {
  check_batch(batch, dim);
  std::vector<Item> items;
  std::vector<int> first_item(batch.size() + 1, 0);
  std::vector<AdjCache> adj;
  adj.reserve(batch.size());
  for (std::size_t si = 0; si < batch.size(); ++si) {
    adj.emplace_back(*batch[si]);
    int n = batch[si]->size();
    for (int x = 0; x < n; ++x) {
      if (dim == 1) {
        items.push_back({static_cast<int>(si), x, x});
      } else {
        for (int y = 0; y < n; ++y)
          items.push_back({static_cast<int>(si), x, y});
      }
    }
    first_item[si + 1] = static_cast<int>(items.size());
  }

  std::vector<int> color(items.size(), 0);
  auto item_of = [&](int si, int x, int y) {
    int n = batch[si]->size();
    return first_item[si] + (dim == 1 ? x : x * n + y);
  };

  std::size_t classes = 0;
  {
    std::map<std::vector<std::uint64_t>, int> intern;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const Item& it = items[i];
      auto c = initial_content(*batch[it.structure], it.x, it.y, dim,
                               with_equality);
      auto ins = intern.emplace(std::move(c), static_cast<int>(intern.size()));
      color[i] = ins.first->second;
    }
    classes = intern.size();
  }

  // Refine until the class count stops growing (colors only ever split, so a
  // constant count means the partition is stable).
  std::vector<int> next(items.size(), 0);
  for (std::size_t round = 0; round < items.size() + 1; ++round) {
    std::map<std::vector<std::uint64_t>, int> intern;
    std::vector<std::uint64_t> content;
    std::vector<std::uint64_t> neigh;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const Item& it = items[i];
      const AdjCache& ac = adj[it.structure];
      int n = ac.n;
      content.clear();
      content.push_back(static_cast<std::uint64_t>(color[i]));
      neigh.clear();
      if (dim == 1) {
        // Contribution of z: edge bits to/from z per binary relation, then
        // z's color (and an identity bit under the equality variant).
        for (int z = 0; z < n; ++z) {
          std::uint64_t packed = (with_equality && z == it.x) ? 1 : 0;
          int shift = 1;
          for (int r = 0; r < ac.nrel; ++r) {
            if (ac.arity[r] != 2) continue;
            if (ac.r2(r, it.x, z)) packed |= 1ull << shift;
            if (ac.r2(r, z, it.x)) packed |= 1ull << (shift + 1);
            shift += 2;
          }
          packed |=
              static_cast<std::uint64_t>(color[item_of(it.structure, z, z)])
              << shift;
          neigh.push_back(packed);
        }
      } else {
        for (int z = 0; z < n; ++z) {
          std::uint64_t eq = 0;
          if (with_equality) eq = (z == it.x ? 1u : 0u) | (z == it.y ? 2u : 0u);
          std::uint64_t cxz = static_cast<std::uint64_t>(
              color[item_of(it.structure, it.x, z)]);
          std::uint64_t czy = static_cast<std::uint64_t>(
              color[item_of(it.structure, z, it.y)]);
          neigh.push_back((cxz << 34) | (czy << 4) | eq);
        }
      }
      std::sort(neigh.begin(), neigh.end());
      content.insert(content.end(), neigh.begin(), neigh.end());
      auto ins = intern.emplace(content, static_cast<int>(intern.size()));
      next[i] = ins.first->second;
    }
    bool stable = intern.size() == classes;
    classes = intern.size();
    color.swap(next);
    if (stable) break;
  }

  std::vector<std::vector<int>> sigs(batch.size());
  for (std::size_t si = 0; si < batch.size(); ++si) {
    sigs[si].assign(color.begin() + first_item[si],
                    color.begin() + first_item[si + 1]);
    std::sort(sigs[si].begin(), sigs[si].end());
  }
  return sigs;
}

bool wl_equiv(const Structure& a, const Structure& b, int dim,
              bool with_equality) {
  if (a.size() != b.size()) return false;
  auto sigs = wl_signatures({&a, &b}, dim, with_equality);
  return sigs[0] == sigs[1];
}

}  // namespace fvm
