#include "fvm/structure.hpp"

#include <algorithm>

namespace fvm {

Structure::Structure(Signature sig, int size,
                     std::vector<std::vector<Tuple>> interp,
                     std::optional<int> point)
    : sig_(std::move(sig)), size_(size), interp_(std::move(interp)), point_(point) {
  if (size_ < 1) throw ParseError("universe size must be >= 1");
  interp_.resize(sig_.count());
  for (int r = 0; r < sig_.count(); ++r) {
    int ar = sig_.rel(r).arity;
    for (size_t ti = 0; ti < interp_[r].size(); ++ti) {
      const Tuple& t = interp_[r][ti];
      if (static_cast<int>(t.size()) != ar)
        throw ParseError("arity mismatch in relation " + sig_.rel(r).name + " at tuple index " +
                         std::to_string(ti) + ": expected " + std::to_string(ar) + " got " +
                         std::to_string(t.size()));
      for (int v : t)
        if (v < 0 || v >= size_)
          throw ParseError("element out of range in relation " + sig_.rel(r).name +
                           " at tuple index " + std::to_string(ti) + ": " + std::to_string(v));
    }
    std::sort(interp_[r].begin(), interp_[r].end());
    interp_[r].erase(std::unique(interp_[r].begin(), interp_[r].end()), interp_[r].end());
  }
  if (point_ && (*point_ < 0 || *point_ >= size_))
    throw ParseError("point out of range: " + std::to_string(*point_));
}

bool Structure::has_tuple(int rel, const Tuple& t) const {
  const auto& v = interp_[rel];
  return std::binary_search(v.begin(), v.end(), t);
}

bool is_homomorphism(const StructureMap& f, std::string* why) {
  const Structure& a = *f.source;
  const Structure& b = *f.target;
  if (a.sig() != b.sig()) {
    if (why) *why = "signature mismatch";
    return false;
  }
  if (static_cast<int>(f.table.size()) != a.size()) {
    if (why) *why = "table size mismatch";
    return false;
  }
  for (int x : f.table)
    if (x < 0 || x >= b.size()) {
      if (why) *why = "table entry out of range";
      return false;
    }
  if (a.pointed() || b.pointed()) {
    if (!a.pointed() || !b.pointed()) {
      if (why) *why = "pointedness mismatch";
      return false;
    }
    if (f.table[a.point()] != b.point()) {
      if (why) *why = "point not preserved";
      return false;
    }
  }
  Tuple img;
  for (int r = 0; r < a.sig().count(); ++r) {
    for (const Tuple& t : a.tuples(r)) {
      img.resize(t.size());
      for (size_t i = 0; i < t.size(); ++i) img[i] = f.table[t[i]];
      if (!b.has_tuple(r, img)) {
        if (why) {
          *why = "tuple not preserved in " + a.sig().rel(r).name + ": (";
          for (size_t i = 0; i < t.size(); ++i)
            *why += (i ? "," : "") + std::to_string(t[i]);
          *why += ")";
        }
        return false;
      }
    }
  }
  return true;
}

bool is_embedding(const StructureMap& f, std::string* why) {
  if (!is_homomorphism(f, why)) return false;
  const Structure& a = *f.source;
  const Structure& b = *f.target;
  std::vector<int> seen(b.size(), -1);
  for (int x = 0; x < a.size(); ++x) {
    if (seen[f.table[x]] >= 0) {
      if (why) *why = "not injective";
      return false;
    }
    seen[f.table[x]] = x;
  }
  // Reflection: any related tuple over the image must come from a related
  // preimage tuple.
  Tuple pre;
  for (int r = 0; r < b.sig().count(); ++r) {
    for (const Tuple& t : b.tuples(r)) {
      bool in_image = true;
      for (int v : t)
        if (seen[v] < 0) {
          in_image = false;
          break;
        }
      if (!in_image) continue;
      pre.resize(t.size());
      for (size_t i = 0; i < t.size(); ++i) pre[i] = seen[t[i]];
      if (!a.has_tuple(r, pre)) {
        if (why) *why = "tuple not reflected in " + b.sig().rel(r).name;
        return false;
      }
    }
  }
  return true;
}

StructureMap compose(const StructureMap& g, const StructureMap& f) {
  StructureMap h;
  h.source = f.source;
  h.target = g.target;
  h.table.resize(f.table.size());
  for (size_t i = 0; i < f.table.size(); ++i) h.table[i] = g.table[f.table[i]];
  return h;
}

StructureMap identity_map(const StructurePtr& a) {
  StructureMap f;
  f.source = a;
  f.target = a;
  f.table.resize(a->size());
  for (int i = 0; i < a->size(); ++i) f.table[i] = i;
  return f;
}

AdjCache::AdjCache(const Structure& s) : n(s.size()), nrel(s.sig().count()) {
  if (n > 64) throw GuardError("AdjCache supports at most 64 elements");
  unary.assign(nrel, 0);
  fwd.assign(nrel, {});
  bwd.assign(nrel, {});
  arity.resize(nrel);
  for (int r = 0; r < nrel; ++r) {
    arity[r] = s.sig().rel(r).arity;
    if (arity[r] == 1) {
      for (const Tuple& t : s.tuples(r)) unary[r] |= 1ull << t[0];
    } else if (arity[r] == 2) {
      fwd[r].assign(n, 0);
      bwd[r].assign(n, 0);
      for (const Tuple& t : s.tuples(r)) {
        fwd[r][t[0]] |= 1ull << t[1];
        bwd[r][t[1]] |= 1ull << t[0];
      }
    }
  }
}

}  // namespace fvm
