// Independent reference implementations used to cross-check the library.
// None of these call into the code they are checking.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "urnc/matrix.hpp"

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;

// Polynomials over F2 of degree < 64 as bit masks.
inline int mask_degree(std::uint64_t a) { return a == 0 ? -1 : 63 - __builtin_clzll(a); }

inline std::uint64_t mask_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  for (int i = 0; i < 64; ++i) {
    if (b >> i & 1) out ^= a << i;
  }
  return out;
}

inline bool mask_divides(std::uint64_t d, std::uint64_t a) {
  if (d == 0) return a == 0;
  while (mask_degree(a) >= mask_degree(d)) a ^= d << (mask_degree(a) - mask_degree(d));
  return a == 0;
}

// Highest-degree common divisor by trying every candidate.
inline std::uint64_t brute_gcd(std::uint64_t a, std::uint64_t b) {
  const int limit = std::max(mask_degree(a), mask_degree(b));
  std::uint64_t best = 1;
  for (std::uint64_t d = 1; d < (std::uint64_t{1} << (limit + 1)); ++d) {
    if (mask_divides(d, a) && mask_divides(d, b) && mask_degree(d) > mask_degree(best)) best = d;
  }
  return best;
}

// Laplace expansion along the first row.
inline urnc::Rational cofactor_det(const urnc::PolyMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  urnc::Rational acc;
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c).is_zero()) continue;
    std::vector<urnc::Rational> e;
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) e.push_back(m(i, j));
      }
    }
    acc += m(0, c) * cofactor_det(urnc::PolyMatrix(n - 1, n - 1, std::move(e)));
  }
  return acc;
}

// Max-flow by repeated DFS augmentation on a dense capacity matrix.
inline int dfs_max_flow(std::vector<std::vector<int>> cap, int s, int t) {
  const int n = static_cast<int>(cap.size());
  int flow = 0;
  while (true) {
    std::vector<int> prev(n, -1);
    prev[s] = s;
    std::vector<int> stack{s};
    while (!stack.empty() && prev[t] < 0) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (cap[u][v] > 0 && prev[v] < 0) {
          prev[v] = u;
          stack.push_back(v);
        }
      }
    }
    if (prev[t] < 0) return flow;
    for (int v = t; v != s; v = prev[v]) {
      --cap[prev[v]][v];
      ++cap[v][prev[v]];
    }
    ++flow;
  }
}

// Shortest hop distances by Bellman-Ford style relaxation.
inline std::map<std::string, int> relax_depths(const std::vector<std::pair<std::string, std::string>>& edges,
                                               const std::vector<std::string>& roots) {
  std::map<std::string, int> d;
  for (const auto& r : roots) d[r] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [u, v] : edges) {
      auto it = d.find(u);
      if (it == d.end()) continue;
      auto jt = d.find(v);
      if (jt == d.end() || jt->second > it->second + 1) {
        d[v] = it->second + 1;
        changed = true;
      }
    }
  }
  return d;
}

// Cantor pairing values by walking the diagonals: (0,0),(1,0),(0,1),(2,0),(1,1),...
inline std::map<std::pair<int, int>, int> cantor_walk(int diagonals) {
  std::map<std::pair<int, int>, int> out;
  int n = 0;
  for (int s = 0; s < diagonals; ++s) {
    for (int y = 0; y <= s; ++y) out[{s - y, y}] = n++;
  }
  return out;
}

// Sum of powers of two 2^k (k from `positions`, repeats allowed) as a set of bit positions.
inline std::set<BigInt> sum_of_powers(const std::vector<BigInt>& positions) {
  std::map<BigInt, int> count;
  for (const auto& k : positions) ++count[k];
  std::set<BigInt> bits;
  while (!count.empty()) {
    auto it = count.begin();
    const BigInt k = it->first;
    const int c = it->second;
    count.erase(it);
    if (c & 1) bits.insert(k);
    if (c / 2) count[k + 1] += c / 2;
  }
  return bits;
}

// Enumerates every directed path from `from` to `to` in a DAG given as adjacency lists of edge ids.
inline void all_paths(const std::function<std::vector<std::pair<std::string, std::string>>(const std::string&)>& out_edges,
                      const std::string& from, const std::string& to, std::vector<std::string>& stack,
                      std::vector<std::vector<std::string>>& found) {
  if (from == to) {
    found.push_back(stack);
    return;
  }
  for (const auto& [edge, head] : out_edges(from)) {
    stack.push_back(edge);
    all_paths(out_edges, head, to, stack, found);
    stack.pop_back();
  }
}

}  // namespace oracle
