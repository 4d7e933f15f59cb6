#include "fvm/ops.hpp"

#include <algorithm>
#include <numeric>

namespace fvm {

namespace {

void require_same_sig(const Structure& a, const Structure& b) {
  if (a.sig() != b.sig()) throw Error("operands must share a signature");
}

void require_modal(const Structure& s, const char* op) {
  if (!s.sig().is_modal()) throw Error(std::string(op) + " requires a modal signature (arities 1 and 2)");
}

}  // namespace

Structure disjoint_union(const Structure& a, const Structure& b) {
  require_same_sig(a, b);
  if (a.pointed() || b.pointed()) throw Error("disjoint_union takes unpointed operands");
  int na = a.size();
  std::vector<std::vector<Tuple>> interp(a.sig().count());
  for (int r = 0; r < a.sig().count(); ++r) {
    interp[r] = a.tuples(r);
    for (Tuple t : b.tuples(r)) {
      for (int& v : t) v += na;
      interp[r].push_back(std::move(t));
    }
  }
  return Structure(a.sig(), na + b.size(), std::move(interp));
}

Structure pointed_coproduct(const Structure& a, const Structure& b) {
  require_same_sig(a, b);
  if (!a.pointed() || !b.pointed()) throw Error("pointed_coproduct takes pointed operands");
  // Merged point -> 0; other elements keep their relative order.
  auto renum = [](const Structure& s, int offset) {
    std::vector<int> map(s.size());
    int next = offset;
    for (int i = 0; i < s.size(); ++i) map[i] = (i == s.point()) ? 0 : next++;
    return map;
  };
  std::vector<int> ma = renum(a, 1);
  std::vector<int> mb = renum(b, a.size());
  std::vector<std::vector<Tuple>> interp(a.sig().count());
  for (int r = 0; r < a.sig().count(); ++r) {
    for (Tuple t : a.tuples(r)) {
      for (int& v : t) v = ma[v];
      interp[r].push_back(std::move(t));
    }
    for (Tuple t : b.tuples(r)) {
      for (int& v : t) v = mb[v];
      interp[r].push_back(std::move(t));
    }
  }
  return Structure(a.sig(), a.size() + b.size() - 1, std::move(interp), 0);
}

int product_index(const std::vector<int>& sizes, const std::vector<int>& coords) {
  int idx = 0;
  for (size_t i = 0; i < sizes.size(); ++i) idx = idx * sizes[i] + coords[i];
  return idx;
}

std::vector<int> product_coords(const std::vector<int>& sizes, int index) {
  std::vector<int> c(sizes.size());
  for (size_t i = sizes.size(); i-- > 0;) {
    c[i] = index % sizes[i];
    index /= sizes[i];
  }
  return c;
}

Structure product(const std::vector<const Structure*>& as) {
  if (as.empty()) throw Error("product needs at least one factor");
  for (const auto* s : as) require_same_sig(*as[0], *s);
  bool pointed = as[0]->pointed();
  for (const auto* s : as)
    if (s->pointed() != pointed) throw Error("product factors must be all pointed or all unpointed");
  std::vector<int> sizes;
  for (const auto* s : as) sizes.push_back(s->size());
  long long total = 1;
  for (int n : sizes) {
    total *= n;
    if (total > 1000000) throw GuardError("product universe too large");
  }
  const Signature& sig = as[0]->sig();
  std::vector<std::vector<Tuple>> interp(sig.count());
  // Componentwise relations: walk tuple combinations per relation.
  for (int r = 0; r < sig.count(); ++r) {
    int ar = sig.rel(r).arity;
    bool any_empty = false;
    for (const auto* s : as)
      if (s->tuples(r).empty()) any_empty = true;
    if (any_empty) continue;
    std::vector<size_t> pick(as.size(), 0);
    bool more = true;
    while (more) {
      Tuple t(ar);
      std::vector<int> coords(as.size());
      for (int pos = 0; pos < ar; ++pos) {
        for (size_t f = 0; f < as.size(); ++f) coords[f] = as[f]->tuples(r)[pick[f]][pos];
        t[pos] = product_index(sizes, coords);
      }
      interp[r].push_back(std::move(t));
      more = false;
      for (size_t f = as.size(); f-- > 0;) {
        if (++pick[f] < as[f]->tuples(r).size()) {
          more = true;
          break;
        }
        pick[f] = 0;
      }
    }
  }
  std::optional<int> pt;
  if (pointed) {
    std::vector<int> coords;
    for (const auto* s : as) coords.push_back(s->point());
    pt = product_index(sizes, coords);
  }
  return Structure(sig, static_cast<int>(total), std::move(interp), pt);
}

Structure product2(const Structure& a, const Structure& b) { return product({&a, &b}); }

Structure merge_r(const Structure& a, const Structure& b, const std::string& rel) {
  require_same_sig(a, b);
  require_modal(a, "merge_r");
  if (!a.pointed() || !b.pointed()) throw Error("merge_r takes pointed operands");
  int r = a.sig().index_of(rel);
  if (r < 0) throw Error("merge relation not in signature: " + rel);
  if (a.sig().rel(r).arity != 2) throw Error("merge relation must be binary: " + rel);
  int na = a.size();
  std::vector<std::vector<Tuple>> interp(a.sig().count());
  for (int q = 0; q < a.sig().count(); ++q) {
    for (Tuple t : a.tuples(q)) {
      for (int& v : t) v += 1;
      interp[q].push_back(std::move(t));
    }
    for (Tuple t : b.tuples(q)) {
      for (int& v : t) v += 1 + na;
      interp[q].push_back(std::move(t));
    }
  }
  interp[r].push_back(Tuple{0, 1 + a.point()});
  interp[r].push_back(Tuple{0, 1 + na + b.point()});
  return Structure(a.sig(), 1 + na + b.size(), std::move(interp), 0);
}

Structure vee(const Structure& a, const Structure& b) {
  require_same_sig(a, b);
  require_modal(a, "vee");
  if (!a.pointed() || !b.pointed()) throw Error("vee takes pointed operands");
  int na = a.size();
  std::vector<std::vector<Tuple>> interp(a.sig().count());
  for (int q = 0; q < a.sig().count(); ++q) {
    for (Tuple t : a.tuples(q)) {
      for (int& v : t) v += 1;
      interp[q].push_back(std::move(t));
    }
    for (Tuple t : b.tuples(q)) {
      for (int& v : t) v += 1 + na;
      interp[q].push_back(std::move(t));
    }
    if (a.sig().rel(q).arity != 2) continue;
    // New point inherits the outgoing transitions of each operand's point.
    for (const Tuple& t : a.tuples(q))
      if (t[0] == a.point()) interp[q].push_back(Tuple{0, 1 + t[1]});
    for (const Tuple& t : b.tuples(q))
      if (t[0] == b.point()) interp[q].push_back(Tuple{0, 1 + na + t[1]});
  }
  return Structure(a.sig(), 1 + na + b.size(), std::move(interp), 0);
}

Structure reduct(const Structure& a, const Signature& tau) {
  std::vector<std::vector<Tuple>> interp(tau.count());
  for (int r = 0; r < tau.count(); ++r) {
    int src = a.sig().index_of(tau.rel(r).name);
    if (src < 0) throw Error("reduct relation not in source signature: " + tau.rel(r).name);
    if (a.sig().rel(src).arity != tau.rel(r).arity)
      throw Error("reduct arity mismatch for " + tau.rel(r).name);
    interp[r] = a.tuples(src);
  }
  return Structure(tau, a.size(), std::move(interp), a.point_opt());
}

namespace {

Signature extend_sig(const Signature& sig, const std::vector<Relation>& extra) {
  std::vector<Relation> rels = sig.rels();
  for (const auto& r : extra) {
    if (sig.has(r.name)) throw Error("translation clashes with existing relation: " + r.name);
    rels.push_back(r);
  }
  return Signature(std::move(rels));
}

}  // namespace

Structure translate_equality(const Structure& a) {
  Signature sig = extend_sig(a.sig(), {{"I", 2}});
  std::vector<std::vector<Tuple>> interp = a.interp();
  interp.emplace_back();
  for (int i = 0; i < a.size(); ++i) interp.back().push_back(Tuple{i, i});
  return Structure(std::move(sig), a.size(), std::move(interp), a.point_opt());
}

Structure translate_connectivity(const Structure& a) {
  Signature sig = extend_sig(a.sig(), {{"I", 2}, {"Con", 2}});
  std::vector<std::vector<Tuple>> interp = a.interp();
  // Gaifman components: union-find over co-occurrence in any tuple.
  std::vector<int> parent(a.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int r = 0; r < a.sig().count(); ++r)
    for (const Tuple& t : a.tuples(r))
      for (size_t i = 1; i < t.size(); ++i) {
        int ra = find(t[0]), rb = find(t[i]);
        if (ra != rb) parent[ra] = rb;
      }
  interp.emplace_back();
  for (int i = 0; i < a.size(); ++i) interp.back().push_back(Tuple{i, i});
  interp.emplace_back();
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      if (find(i) == find(j)) interp.back().push_back(Tuple{i, j});
  return Structure(std::move(sig), a.size(), std::move(interp), a.point_opt());
}

Structure translate_global(const Structure& a) {
  require_modal(a, "translate_global");
  if (!a.pointed()) throw Error("translate_global takes a pointed structure");
  Signature sig = extend_sig(a.sig(), {{"G", 2}});
  std::vector<std::vector<Tuple>> interp = a.interp();
  interp.emplace_back();
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) interp.back().push_back(Tuple{i, j});
  return Structure(std::move(sig), a.size(), std::move(interp), a.point_opt());
}

Structure translate_weak(const Structure& a, const std::string& silent, SilentMode mode) {
  int s = a.sig().index_of(silent);
  if (s < 0) throw Error("silent relation not in signature: " + silent);
  if (a.sig().rel(s).arity != 2) throw Error("silent relation must be binary: " + silent);
  int n = a.size();
  // star[x] = bitset of y with x S* y.
  std::vector<std::vector<bool>> star(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) star[i][i] = true;
  for (const Tuple& t : a.tuples(s)) star[t[0]][t[1]] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (star[i][k])
        for (int j = 0; j < n; ++j)
          if (star[k][j]) star[i][j] = true;

  std::vector<std::vector<Tuple>> interp(a.sig().count());
  for (int r = 0; r < a.sig().count(); ++r) {
    if (a.sig().rel(r).arity != 2) {
      interp[r] = a.tuples(r);
      continue;
    }
    if (r == s) {
      if (mode == SilentMode::kRaw) interp[r] = a.tuples(r);
      else if (mode == SilentMode::kDrop) interp[r] = {};
      // kClose falls through to saturation below.
      if (mode != SilentMode::kClose) continue;
    }
    std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
    for (const Tuple& t : a.tuples(r))
      for (int i = 0; i < n; ++i)
        if (star[i][t[0]])
          for (int j = 0; j < n; ++j)
            if (star[t[1]][j]) out[i][j] = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (out[i][j]) interp[r].push_back(Tuple{i, j});
  }
  return Structure(a.sig(), n, std::move(interp), a.point_opt());
}

}  // namespace fvm
