#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : Error {
  using Error::Error;
};
struct GuardError : Error {
  using Error::Error;
};
struct UnsupportedError : Error {
  using Error::Error;
};

using Tuple = std::vector<int>;

struct Relation {
  std::string name;
  int arity = 0;
  bool operator==(const Relation&) const = default;
};

// Ordered list of relation symbols with arities; order is significant and
// survives serialization round trips.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<Relation> rels) : rels_(std::move(rels)) {
    for (size_t i = 0; i < rels_.size(); ++i) {
      if (rels_[i].arity < 1) throw ParseError("relation arity must be >= 1: " + rels_[i].name);
      for (size_t j = 0; j < i; ++j)
        if (rels_[j].name == rels_[i].name)
          throw ParseError("duplicate relation name: " + rels_[i].name);
    }
  }

  int count() const { return static_cast<int>(rels_.size()); }
  const Relation& rel(int i) const { return rels_[i]; }
  const std::vector<Relation>& rels() const { return rels_; }

  int index_of(const std::string& name) const {
    for (size_t i = 0; i < rels_.size(); ++i)
      if (rels_[i].name == name) return static_cast<int>(i);
    return -1;
  }
  bool has(const std::string& name) const { return index_of(name) >= 0; }

  // Every arity is 1 or 2 (transition-system shape).
  bool is_modal() const {
    for (const auto& r : rels_)
      if (r.arity > 2) return false;
    return true;
  }

  bool operator==(const Signature&) const = default;

 private:
  std::vector<Relation> rels_;
};

// Finite relational structure over universe {0..n-1}. Interpretations are
// kept sorted and deduplicated so equality is table-exact.
class Structure {
 public:
  Structure() = default;
  Structure(Signature sig, int size,
            std::vector<std::vector<Tuple>> interp,
            std::optional<int> point = std::nullopt);

  const Signature& sig() const { return sig_; }
  int size() const { return size_; }
  bool pointed() const { return point_.has_value(); }
  int point() const { return *point_; }
  std::optional<int> point_opt() const { return point_; }

  const std::vector<Tuple>& tuples(int rel) const { return interp_[rel]; }
  const std::vector<std::vector<Tuple>>& interp() const { return interp_; }
  bool has_tuple(int rel, const Tuple& t) const;

  // Binary relation membership; rel must have arity 2.
  bool has2(int rel, int a, int b) const { return has_tuple(rel, Tuple{a, b}); }
  bool has1(int rel, int a) const { return has_tuple(rel, Tuple{a}); }

  bool operator==(const Structure&) const = default;

 private:
  Signature sig_;
  int size_ = 0;
  std::vector<std::vector<Tuple>> interp_;
  std::optional<int> point_;
};

using StructurePtr = std::shared_ptr<const Structure>;

inline StructurePtr make_structure(Structure s) {
  return std::make_shared<const Structure>(std::move(s));
}

// Total map between structure universes.
struct StructureMap {
  StructurePtr source;
  StructurePtr target;
  std::vector<int> table;

  int operator()(int x) const { return table[x]; }
};

bool is_homomorphism(const StructureMap& f, std::string* why = nullptr);
// Injective, preserves and reflects all relations (and the point, if any).
bool is_embedding(const StructureMap& f, std::string* why = nullptr);

StructureMap compose(const StructureMap& g, const StructureMap& f);  // g after f
StructureMap identity_map(const StructurePtr& a);

// Dense adjacency cache for the hot game loops; n must stay modest.
struct AdjCache {
  int n = 0;
  int nrel = 0;
  std::vector<uint64_t> unary;      // [rel] bitset over elements (arity-1 rels)
  std::vector<std::vector<uint64_t>> fwd;  // [rel][a] bitset of b with R(a,b)
  std::vector<std::vector<uint64_t>> bwd;  // [rel][b] bitset of a with R(a,b)
  std::vector<int> arity;

  explicit AdjCache(const Structure& s);
  bool r2(int rel, int a, int b) const { return (fwd[rel][a] >> b) & 1; }
  bool r1(int rel, int a) const { return (unary[rel] >> a) & 1; }
};

}  // namespace fvm
