#pragma once

// Independent oracles for the tests. Nothing here calls into the evaluator, the
// compilers or the simulator's search loops.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "nestpeb/terms.hpp"

namespace nestpeb::ref {

inline std::uint64_t catalan(unsigned n) {
  std::uint64_t c = 1;
  for (unsigned i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

// Trees over {a:0, b:0, c:2} with exactly n nodes: binary shapes times leaf labelings.
inline std::uint64_t abc_count(unsigned n) {
  if (n % 2 == 0) return 0;
  const unsigned inner = n / 2;
  return catalan(inner) * (std::uint64_t{1} << (inner + 1));
}

using Tuple = std::vector<NodeId>;

inline std::vector<Tuple> all_tuples(std::size_t n, int k) {
  std::vector<Tuple> out;
  Tuple t(k, 0);
  while (true) {
    out.push_back(t);
    int i = k - 1;
    while (i >= 0 && ++t[i] == n) t[i--] = 0;
    if (i < 0) return out;
  }
}

// Reflexive-transitive closure by enumerating every step sequence of length at most
// n^k, depth first. Deliberately naive.
inline bool path_exists(std::size_t n, int k, const std::function<bool(const Tuple&, const Tuple&)>& step,
                        const Tuple& from, const Tuple& to) {
  const auto tuples = all_tuples(n, k);
  std::size_t limit = tuples.size();
  std::function<bool(const Tuple&, std::size_t)> go = [&](const Tuple& cur, std::size_t len) {
    if (cur == to) return true;
    if (len == limit) return false;
    for (const auto& nxt : tuples)
      if (step(cur, nxt) && go(nxt, len + 1)) return true;
    return false;
  };
  return go(from, 0);
}

inline std::vector<std::string> all_words(const std::vector<std::string>& base, std::size_t max_len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < max_len)
      for (const auto& b : base) out.push_back(out[i] + b);
  return out;
}

inline bool is_anbn(const std::string& w) {
  const std::size_t n = w.size() / 2;
  return w.size() % 2 == 0 && w == std::string(n, 'a') + std::string(n, 'b');
}

// Leaves of a tree, by a plain recursive walk over child lists.
inline std::vector<NodeId> leaves(const Tree& t) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < t.size(); ++v)
    if (t.node(v).children.empty()) out.push_back(v);
  return out;
}

}  // namespace nestpeb::ref
