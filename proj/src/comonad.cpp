#include "fvm/comonad.hpp"

#include <algorithm>
#include <functional>

namespace fvm {

Kind kind_from_string(const std::string& s) {
  if (s == "ef") return Kind::kEf;
  if (s == "pebble") return Kind::kPebble;
  if (s == "modal") return Kind::kModal;
  if (s == "cos") return Kind::kCos;
  throw Error("unknown comonad kind: " + s);
}

std::string kind_to_string(Kind k) {
  switch (k) {
    case Kind::kEf: return "ef";
    case Kind::kPebble: return "pebble";
    case Kind::kModal: return "modal";
    case Kind::kCos: return "cos";
  }
  return "?";
}

int ComonadInstance::prefix(int i, int j) const {
  int steps = length_[i] - j;
  if (steps < 0 || j < (kind == Kind::kModal ? 0 : 1))
    throw Error("prefix index out of range");
  while (steps-- > 0) i = parent_[i];
  return i;
}

int ComonadInstance::pebble_of(int i) const {
  if (kind != Kind::kPebble) throw Error("pebble_of needs a pebble instance");
  return deco_[i];
}

int ComonadInstance::label_of(int i) const {
  if (kind != Kind::kModal) throw Error("label_of needs a modal instance");
  if (length_[i] < 1) throw Error("the empty path has no step label");
  return deco_[i];
}

int ComonadInstance::cos_pos(int i) const {
  if (kind != Kind::kCos) throw Error("cos_pos needs a round-walk instance");
  return walk_pos_[i];
}

const std::vector<int>& ComonadInstance::cos_walk(int i) const {
  if (kind != Kind::kCos) throw Error("cos_walk needs a round-walk instance");
  return walks_[walk_id_[i]];
}

std::vector<int> ComonadInstance::cos_rotations(int i) const {
  if (kind != Kind::kCos) throw Error("cos_rotations needs a round-walk instance");
  return walk_elems_[walk_id_[i]];
}

std::vector<int> ComonadInstance::letters(int i) const {
  if (kind == Kind::kCos) return walks_[walk_id_[i]];
  std::vector<int> out(length_[i]);
  int cur = i;
  for (int j = length_[i]; j >= 1; --j) {
    out[j - 1] = counit_[cur];
    cur = parent_[cur];
  }
  return out;
}

namespace {

void check_guard(long long count, long long cap) {
  if (count > cap)
    throw GuardError("carrier would exceed " + std::to_string(cap) +
                     " elements; raise the cap to force materialization");
}

// Word carriers (ef / pebble) share the chain-based relation builder:
// related tuples are exactly the pairwise prefix-comparable ones whose
// counits are related, so every tuple lives on the prefix chain of its
// longest member.
void build_word_relations(const ComonadInstance& inst, const Structure& base,
                          bool pebble, std::vector<std::vector<Tuple>>& interp) {
  int nelem = inst.size();
  // pebbles_after(u, v): does pebble_of(u) reappear strictly after u in v?
  auto reuse_blocked = [&](int u, int v) {
    int p = inst.pebble_of(u);
    int cur = v;
    for (int pos = inst.length(v); pos > inst.length(u); --pos) {
      if (inst.pebble_of(cur) == p) return true;
      cur = inst.parent(cur);
    }
    return false;
  };
  for (int r = 0; r < base.sig().count(); ++r) {
    int m = base.sig().rel(r).arity;
    for (int s = 0; s < nelem; ++s) {
      int len = inst.length(s);
      std::vector<int> chain(len);
      for (int j = 1; j <= len; ++j) chain[j - 1] = inst.prefix(s, j);
      Tuple pick(m);
      std::function<void(int, bool)> rec = [&](int pos, bool used_s) {
        if (pos == m) {
          if (!used_s) return;  // counted at the longest member only
          Tuple t(m);
          for (int i = 0; i < m; ++i) t[i] = chain[pick[i]];
          Tuple cu(m);
          for (int i = 0; i < m; ++i) cu[i] = inst.counit(t[i]);
          if (!base.has_tuple(r, cu)) return;
          if (pebble) {
            for (int i = 0; i < m; ++i)
              for (int j = 0; j < m; ++j) {
                if (inst.length(t[i]) >= inst.length(t[j])) continue;
                if (reuse_blocked(t[i], t[j])) return;
              }
          }
          interp[r].push_back(std::move(t));
          return;
        }
        for (int c = 0; c < len; ++c) {
          pick[pos] = c;
          rec(pos + 1, used_s || c == len - 1);
        }
      };
      rec(0, false);
    }
  }
}

}  // namespace

ComonadInstance build_comonad(Kind kind, const StructurePtr& base, int k,
                              const BuildOptions& opts) {
  ComonadInstance inst;
  inst.kind = kind;
  inst.k = k;
  inst.base = base;
  const Structure& a = *base;
  long long cap = opts.max_elems;

  auto add_elem = [&](std::vector<int> key, int counit, int parent, int length,
                      int deco) {
    check_guard(inst.size() + 1, cap);
    int idx = inst.size();
    inst.index_.emplace(key, idx);
    inst.keys_.push_back(std::move(key));
    inst.counit_.push_back(counit);
    inst.parent_.push_back(parent);
    inst.length_.push_back(length);
    inst.deco_.push_back(deco);
    return idx;
  };

  switch (kind) {
    case Kind::kEf: {
      if (k < 1) throw Error("word length bound must be >= 1");
      if (a.pointed()) throw Error("word comonads take unpointed structures");
      inst.trunc = 0;
      int level_begin = 0, level_end = 0;
      for (int x = 0; x < a.size(); ++x) add_elem({x}, x, -1, 1, -1);
      level_end = inst.size();
      for (int len = 2; len <= k; ++len) {
        int next_begin = inst.size();
        for (int s = level_begin; s < level_end; ++s)
          for (int x = 0; x < a.size(); ++x) {
            std::vector<int> key = inst.keys_[s];
            key.push_back(x);
            add_elem(std::move(key), x, s, len, -1);
          }
        level_begin = next_begin;
        level_end = inst.size();
      }
      std::vector<std::vector<Tuple>> interp(a.sig().count());
      build_word_relations(inst, a, false, interp);
      inst.carrier = make_structure(
          Structure(a.sig(), inst.size(), std::move(interp)));
      break;
    }
    case Kind::kPebble: {
      if (k < 1) throw Error("pebble count must be >= 1");
      if (a.pointed()) throw Error("word comonads take unpointed structures");
      inst.trunc = opts.trunc < 0 ? 2 * k : opts.trunc;
      if (inst.trunc < 1) throw Error("pebble word cap must be >= 1");
      int level_begin = 0, level_end = 0;
      for (int p = 0; p < k; ++p)
        for (int x = 0; x < a.size(); ++x) add_elem({p, x}, x, -1, 1, p);
      level_end = inst.size();
      for (int len = 2; len <= inst.trunc; ++len) {
        int next_begin = inst.size();
        for (int s = level_begin; s < level_end; ++s)
          for (int p = 0; p < k; ++p)
            for (int x = 0; x < a.size(); ++x) {
              std::vector<int> key = inst.keys_[s];
              key.push_back(p);
              key.push_back(x);
              add_elem(std::move(key), x, s, len, p);
            }
        level_begin = next_begin;
        level_end = inst.size();
      }
      std::vector<std::vector<Tuple>> interp(a.sig().count());
      build_word_relations(inst, a, true, interp);
      inst.carrier = make_structure(
          Structure(a.sig(), inst.size(), std::move(interp)));
      break;
    }
    case Kind::kModal: {
      if (k < 0) throw Error("path length bound must be >= 0");
      if (!a.pointed()) throw Error("path comonads take pointed structures");
      if (!a.sig().is_modal()) throw Error("path comonads need arities <= 2");
      inst.trunc = 0;
      add_elem({}, a.point(), -1, 0, -1);
      int level_begin = 0, level_end = 1;
      for (int len = 1; len <= k; ++len) {
        int next_begin = inst.size();
        for (int s = level_begin; s < level_end; ++s) {
          int end = inst.counit_[s];
          for (int r = 0; r < a.sig().count(); ++r) {
            if (a.sig().rel(r).arity != 2) continue;
            for (const Tuple& t : a.tuples(r)) {
              if (t[0] != end) continue;
              std::vector<int> key = inst.keys_[s];
              key.push_back(r);
              key.push_back(t[1]);
              add_elem(std::move(key), t[1], s, len, r);
            }
          }
        }
        level_begin = next_begin;
        level_end = inst.size();
      }
      std::vector<std::vector<Tuple>> interp(a.sig().count());
      for (int i = 0; i < inst.size(); ++i) {
        if (inst.length_[i] >= 1)
          interp[inst.deco_[i]].push_back(Tuple{inst.parent_[i], i});
        for (int r = 0; r < a.sig().count(); ++r)
          if (a.sig().rel(r).arity == 1 && a.has1(r, inst.counit_[i]))
            interp[r].push_back(Tuple{i});
      }
      inst.carrier =
          make_structure(Structure(a.sig(), inst.size(), std::move(interp), 0));
      break;
    }
    case Kind::kCos: {
      if (a.pointed()) throw Error("round-walk comonads take unpointed structures");
      if (a.sig().count() != 1 || a.sig().rel(0).arity != 2)
        throw Error("round-walk comonads take a single binary relation");
      for (const Tuple& t : a.tuples(0)) {
        if (t[0] == t[1]) throw Error("round-walk comonads need a loopless relation");
        if (!a.has2(0, t[1], t[0]))
          throw Error("round-walk comonads need a symmetric relation");
      }
      inst.k = 0;
      inst.trunc = opts.trunc < 0 ? 6 : opts.trunc;
      if (inst.trunc < 2) throw Error("walk length cap must be >= 2");
      // Enumerate closed walks v0..vn (n+1 edges, wrap included) in lex
      // order by (length, sequence).
      for (int len = 2; len <= inst.trunc; ++len) {
        std::vector<int> walk;
        std::function<void(int)> rec = [&](int depth) {
          if (depth == len) {
            if (!a.has2(0, walk.back(), walk[0])) return;
            int wid = static_cast<int>(inst.walks_.size());
            inst.walks_.push_back(walk);
            inst.walk_elems_.emplace_back();
            for (int pos = 0; pos < len; ++pos) {
              std::vector<int> key = walk;
              key.push_back(pos);
              int idx = add_elem(std::move(key), walk[pos], -1, len, -1);
              inst.walk_id_.resize(idx + 1, -1);
              inst.walk_pos_.resize(idx + 1, -1);
              inst.walk_id_[idx] = wid;
              inst.walk_pos_[idx] = pos;
              inst.walk_elems_.back().push_back(idx);
            }
            return;
          }
          for (int x = 0; x < a.size(); ++x) {
            if (depth > 0 && !a.has2(0, walk.back(), x)) continue;
            walk.push_back(x);
            rec(depth + 1);
            walk.pop_back();
          }
        };
        rec(0);
      }
      if (inst.size() == 0)
        throw Error("no closed walks within the cap; the carrier would be empty");
      std::vector<std::vector<Tuple>> interp(1);
      for (size_t wid = 0; wid < inst.walks_.size(); ++wid) {
        int len = static_cast<int>(inst.walks_[wid].size());
        for (int i = 0; i < len; ++i) {
          int j = (i + 1) % len;
          if (i == j) continue;
          interp[0].push_back(Tuple{inst.walk_elems_[wid][i], inst.walk_elems_[wid][j]});
          interp[0].push_back(Tuple{inst.walk_elems_[wid][j], inst.walk_elems_[wid][i]});
        }
      }
      inst.carrier = make_structure(Structure(a.sig(), inst.size(), std::move(interp)));
      break;
    }
  }
  return inst;
}

namespace {

int lookup_or_throw(const ComonadInstance& cb, const std::vector<int>& key,
                    const char* what) {
  int idx = cb.index_of_key(key);
  if (idx < 0)
    throw Error(std::string(what) +
                " leaves the carrier (the map is not a morphism of this shape)");
  return idx;
}

}  // namespace

std::vector<int> coextend(const ComonadInstance& ca, const ComonadInstance& cb,
                          const std::vector<int>& f) {
  if (ca.kind != cb.kind) throw Error("coextension needs matching kinds");
  if (static_cast<int>(f.size()) != ca.size())
    throw Error("coextension table has the wrong size");
  std::vector<int> out(ca.size());
  switch (ca.kind) {
    case Kind::kEf:
      for (int i = 0; i < ca.size(); ++i) {
        std::vector<int> key(ca.length(i));
        for (int j = 1; j <= ca.length(i); ++j) key[j - 1] = f[ca.prefix(i, j)];
        out[i] = lookup_or_throw(cb, key, "coextension");
      }
      break;
    case Kind::kPebble:
      for (int i = 0; i < ca.size(); ++i) {
        std::vector<int> key;
        key.reserve(2 * ca.length(i));
        for (int j = 1; j <= ca.length(i); ++j) {
          int pj = ca.prefix(i, j);
          key.push_back(ca.pebble_of(pj));
          key.push_back(f[pj]);
        }
        out[i] = lookup_or_throw(cb, key, "coextension");
      }
      break;
    case Kind::kModal: {
      if (f[0] != cb.base->point())
        throw Error("coextension needs the empty path to land on the point");
      for (int i = 0; i < ca.size(); ++i) {
        std::vector<int> key;
        key.reserve(2 * ca.length(i));
        for (int j = 1; j <= ca.length(i); ++j) {
          int pj = ca.prefix(i, j);
          key.push_back(ca.label_of(pj));
          key.push_back(f[pj]);
        }
        out[i] = lookup_or_throw(cb, key, "coextension");
      }
      break;
    }
    case Kind::kCos:
      for (int i = 0; i < ca.size(); ++i) {
        std::vector<int> key;
        for (int e : ca.cos_rotations(i)) key.push_back(f[e]);
        key.push_back(ca.cos_pos(i));
        out[i] = lookup_or_throw(cb, key, "coextension");
      }
      break;
  }
  return out;
}

std::vector<int> fmap(const ComonadInstance& ca, const ComonadInstance& cb,
                      const std::vector<int>& h) {
  if (ca.kind != cb.kind) throw Error("fmap needs matching kinds");
  if (static_cast<int>(h.size()) != ca.base->size())
    throw Error("fmap table has the wrong size");
  std::vector<int> out(ca.size());
  for (int i = 0; i < ca.size(); ++i) {
    std::vector<int> key;
    switch (ca.kind) {
      case Kind::kEf:
        for (int x : ca.letters(i)) key.push_back(h[x]);
        break;
      case Kind::kPebble: {
        const std::vector<int>& src = ca.key(i);
        key = src;
        for (size_t j = 1; j < key.size(); j += 2) key[j] = h[src[j]];
        break;
      }
      case Kind::kModal: {
        const std::vector<int>& src = ca.key(i);
        key = src;
        for (size_t j = 1; j < key.size(); j += 2) key[j] = h[src[j]];
        break;
      }
      case Kind::kCos:
        for (int v : ca.cos_walk(i)) key.push_back(h[v]);
        key.push_back(ca.cos_pos(i));
        break;
    }
    out[i] = lookup_or_throw(cb, key, "functorial image");
  }
  return out;
}

StructureMap counit_map(const ComonadInstance& ca) {
  StructureMap f;
  f.source = ca.carrier;
  f.target = ca.base;
  f.table.resize(ca.size());
  for (int i = 0; i < ca.size(); ++i) f.table[i] = ca.counit(i);
  return f;
}

Comultiplication comultiplication(const ComonadInstance& ca,
                                  const BuildOptions& opts) {
  Comultiplication out;
  BuildOptions outer_opts = opts;
  outer_opts.trunc = (ca.kind == Kind::kPebble || ca.kind == Kind::kCos)
                         ? ca.trunc
                         : opts.trunc;
  out.outer = build_comonad(ca.kind, ca.carrier, ca.k, outer_opts);
  out.table.resize(ca.size());
  for (int i = 0; i < ca.size(); ++i) {
    std::vector<int> key;
    switch (ca.kind) {
      case Kind::kEf:
        for (int j = 1; j <= ca.length(i); ++j) key.push_back(ca.prefix(i, j));
        break;
      case Kind::kPebble:
        for (int j = 1; j <= ca.length(i); ++j) {
          int pj = ca.prefix(i, j);
          key.push_back(ca.pebble_of(pj));
          key.push_back(pj);
        }
        break;
      case Kind::kModal:
        for (int j = 1; j <= ca.length(i); ++j) {
          int pj = ca.prefix(i, j);
          key.push_back(ca.label_of(pj));
          key.push_back(pj);
        }
        break;
      case Kind::kCos:
        key = ca.cos_rotations(i);
        key.push_back(ca.cos_pos(i));
        break;
    }
    out.table[i] = out.outer.index_of_key(key);
    if (out.table[i] < 0) throw Error("comultiplication image missing from the outer carrier");
  }
  return out;
}

}  // namespace fvm
