#pragma once

#include <map>

#include "fvm/structure.hpp"

namespace fvm {

enum class Kind { kEf, kPebble, kModal, kCos };

Kind kind_from_string(const std::string& s);
std::string kind_to_string(Kind k);

struct BuildOptions {
  int trunc = -1;           // -1 = kind default (pebble: 2k, round walks: 6)
  long long max_elems = 50000;
};

// A materialized C_k(A): the carrier structure plus elementwise access to
// the underlying words/paths/walks. Elements are indexed 0..size()-1 in a
// deterministic generation order (by length, then extension order).
class ComonadInstance {
 public:
  Kind kind;
  int k = 0;
  int trunc = 0;  // pebble word cap / walk length cap; 0 where unused
  StructurePtr base;
  StructurePtr carrier;

  int size() const { return static_cast<int>(keys_.size()); }
  const std::vector<int>& key(int i) const { return keys_[i]; }
  int index_of_key(const std::vector<int>& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? -1 : it->second;
  }

  int counit(int i) const { return counit_[i]; }
  int parent(int i) const { return parent_[i]; }
  // Word length; the modal empty path has length 0.
  int length(int i) const { return length_[i]; }
  // j-th prefix: j in 1..length (modal also allows 0 = empty path).
  int prefix(int i, int j) const;
  // Position-wise decorations of the last step.
  int pebble_of(int i) const;  // pebble index (pebble kind)
  int label_of(int i) const;   // relation index (modal kind, length >= 1)
  int deco_at(int i) const { return deco_[i]; }  // raw; -1 when absent

  int cos_pos(int i) const;                 // marked position on the walk
  const std::vector<int>& cos_walk(int i) const;  // walk vertices v0..vn
  // All (walk, j) elements sharing element i's walk, in position order.
  std::vector<int> cos_rotations(int i) const;

  // Letters of the element as base-universe values (modal: path vertices
  // excluding the point; cos: walk vertices).
  std::vector<int> letters(int i) const;

  friend ComonadInstance build_comonad(Kind kind, const StructurePtr& base,
                                       int k, const BuildOptions& opts);

 private:
  std::vector<std::vector<int>> keys_;
  std::map<std::vector<int>, int> index_;
  std::vector<int> counit_;
  std::vector<int> parent_;
  std::vector<int> length_;
  std::vector<int> deco_;  // pebble / relation label of the last step
  std::vector<int> walk_id_;
  std::vector<int> walk_pos_;
  std::vector<std::vector<int>> walks_;
  std::vector<std::vector<int>> walk_elems_;  // walk id -> element per position
};

ComonadInstance build_comonad(Kind kind, const StructurePtr& base, int k,
                              const BuildOptions& opts = {});

// Kleisli coextension: given f : C(A) -> B as a table over ca's elements,
// produce f* : C(A) -> C(B) as a table into cb's elements. Throws if the
// image leaves cb's carrier (f is then not a morphism of this shape).
std::vector<int> coextend(const ComonadInstance& ca, const ComonadInstance& cb,
                          const std::vector<int>& f);

// Functorial action on h : A -> B (letterwise).
std::vector<int> fmap(const ComonadInstance& ca, const ComonadInstance& cb,
                      const std::vector<int>& h);

// The counit as a structure map C(A) -> A.
StructureMap counit_map(const ComonadInstance& ca);

// Comultiplication delta : C(A) -> C(C(A)), materializing the outer
// instance over ca's carrier (guarded by opts.max_elems).
struct Comultiplication {
  ComonadInstance outer;  // C over ca.carrier
  std::vector<int> table;
};
Comultiplication comultiplication(const ComonadInstance& ca,
                                  const BuildOptions& opts = {});

}  // namespace fvm
