#ifndef DYNBAL_TESTS_TEST_UTIL_H_
#define DYNBAL_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace dynbal_test {

// Exact value of sum_i y_i * cols[i][r] for every row r.
inline std::vector<mpq_class> ExactCombination(const std::vector<std::vector<double>>& cols,
                                               const std::vector<double>& y) {
  std::vector<mpq_class> out(cols.empty() ? 0 : cols[0].size(), 0);
  for (size_t i = 0; i < cols.size(); ++i) {
    mpq_class yi(y[i]);
    for (size_t r = 0; r < cols[i].size(); ++r) out[r] += yi * mpq_class(cols[i][r]);
  }
  return out;
}

inline std::vector<std::vector<double>> RandomColumns(int rows, int cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> c(cols, std::vector<double>(rows));
  for (auto& col : c) {
    for (double& x : col) x = u(rng);
  }
  return c;
}

// Brute-force minimum of |E(S, V\S)| / min(vol S, vol V\S) over nonempty proper
// subsets of the non-isolated vertices, as an exact fraction.
inline std::pair<int64_t, int64_t> BruteConductance(int n,
                                                    const std::vector<std::pair<int, int>>& edges) {
  std::vector<int64_t> deg(n, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  std::vector<int> verts;
  for (int v = 0; v < n; ++v) {
    if (deg[v] > 0) verts.push_back(v);
  }
  const int k = static_cast<int>(verts.size());
  std::vector<int> pos(n, -1);
  for (int i = 0; i < k; ++i) pos[verts[i]] = i;
  int64_t best_num = 1, best_den = 0;
  for (uint64_t mask = 1; mask + 1 < (uint64_t{1} << k); ++mask) {
    int64_t cut = 0, vol = 0, total = 0;
    for (int i = 0; i < k; ++i) {
      total += deg[verts[i]];
      if ((mask >> i) & 1) vol += deg[verts[i]];
    }
    for (auto [u, v] : edges) {
      if (((mask >> pos[u]) & 1) != ((mask >> pos[v]) & 1)) ++cut;
    }
    int64_t den = std::min(vol, total - vol);
    if (best_den == 0 || cut * best_den < best_num * den) {
      best_num = cut;
      best_den = den;
    }
  }
  int64_t g = std::gcd(best_num, best_den);
  if (g > 0) {
    best_num /= g;
    best_den /= g;
  }
  return {best_num, best_den};
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int Find(int x) { return p[x] == x ? x : p[x] = Find(p[x]); }
  bool Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

}  // namespace dynbal_test

#endif  // DYNBAL_TESTS_TEST_UTIL_H_
