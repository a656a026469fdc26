#pragma once

#include <cstdint>
#include <vector>

namespace cdyn::oracle {

using Arcs = std::vector<std::vector<bool>>;

inline Arcs arcs_from_mask(std::size_t n, std::uint32_t off_diagonal, std::uint32_t loops) {
  Arcs a(n, std::vector<bool>(n, false));
  std::size_t bit = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = (loops >> i) & 1u;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) a[i][j] = (off_diagonal >> bit++) & 1u;
  }
  return a;
}

inline bool strongly_connected(const Arcs& a) {
  const std::size_t n = a.size();
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> st{0};
    seen[0] = true;
    while (!st.empty()) {
      const std::size_t u = st.back();
      st.pop_back();
      for (std::size_t w = 0; w < n; ++w)
        if ((dir == 0 ? a[u][w] : a[w][u]) && !seen[w]) {
          seen[w] = true;
          st.push_back(w);
        }
    }
    for (bool s : seen)
      if (!s) return false;
  }
  return true;
}

// Minimal total of an integer circulation with every arc at least 1, by the dual program:
// |A| + max over integer potentials pi of sum_i b_i pi_i subject to pi_i - pi_j <= 1 on arcs,
// b_i = indeg - outdeg. On a strongly connected graph an optimal pi lies in [0, n-1]^n.
inline std::int64_t min_circulation_total(const Arcs& a) {
  const std::size_t n = a.size();
  std::vector<std::int64_t> b(n, 0);
  std::int64_t arcs = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j]) {
        ++arcs;
        --b[i];
        ++b[j];
      }
  std::vector<std::int64_t> pi(n, 0);
  std::int64_t best = 0;
  const auto top = static_cast<std::int64_t>(n) - 1;
  for (;;) {
    bool feasible = true;
    for (std::size_t i = 0; i < n && feasible; ++i)
      for (std::size_t j = 0; j < n && feasible; ++j)
        if (a[i][j] && pi[i] - pi[j] > 1) feasible = false;
    if (feasible) {
      std::int64_t v = 0;
      for (std::size_t i = 0; i < n; ++i) v += b[i] * pi[i];
      best = std::max(best, v);
    }
    std::size_t k = 0;
    while (k < n && pi[k] == top) pi[k++] = 0;
    if (k == n) break;
    ++pi[k];
  }
  return arcs + best;
}

}  // namespace cdyn::oracle
