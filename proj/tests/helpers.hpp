#pragma once

#include <utility>

#include "fvm/structure.hpp"

namespace fvm::testing {

inline Signature sig_e() { return Signature({{"E", 2}}); }
inline Signature sig_pe() { return Signature({{"P", 1}, {"E", 2}}); }

inline Structure digraph(int n, std::vector<std::pair<int, int>> edges,
                         std::optional<int> point = std::nullopt,
                         Signature sig = sig_e()) {
  std::vector<std::vector<Tuple>> interp(sig.count());
  int e = sig.index_of("E");
  for (auto [a, b] : edges) interp[e].push_back(Tuple{a, b});
  return Structure(std::move(sig), n, std::move(interp), point);
}

// Symmetric closure of the listed edges.
inline Structure graph(int n, std::vector<std::pair<int, int>> edges,
                       std::optional<int> point = std::nullopt) {
  std::vector<std::pair<int, int>> sym;
  for (auto [a, b] : edges) {
    sym.push_back({a, b});
    sym.push_back({b, a});
  }
  return Structure(sig_e(), n, {[&] {
                     std::vector<Tuple> ts;
                     for (auto [a, b] : sym) ts.push_back(Tuple{a, b});
                     return ts;
                   }()},
                   point);
}

inline Structure clique(int n) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.push_back({i, j});
  return graph(n, es);
}

inline Structure ucycle(int n) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < n; ++i) es.push_back({i, (i + 1) % n});
  return graph(n, es);
}

}  // namespace fvm::testing
