#include "dynbal/instances.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dynbal/errors.h"

namespace dynbal {

std::vector<double> VectorInstance::SignedSum() const {
  std::vector<double> s(dim, 0.0);
  for (size_t i = 0; i < vectors.size(); ++i) {
    for (int c = 0; c < dim; ++c) s[c] += signs[i] * vectors[i][c];
  }
  return s;
}

std::vector<int64_t> IntVectorInstance::SignedSum() const {
  std::vector<int64_t> s(dim, 0);
  for (size_t i = 0; i < vectors.size(); ++i) {
    for (int c = 0; c < dim; ++c) s[c] += signs[i] * vectors[i][c];
  }
  return s;
}

VectorInstance IntVectorInstance::ToDouble() const {
  VectorInstance out;
  out.dim = dim;
  out.signs = signs;
  for (const auto& v : vectors) out.vectors.emplace_back(v.begin(), v.end());
  return out;
}

VectorInstance Gen2dLocalOpt(int t) {
  if (t <= 0 || t % 2 != 0) throw InvalidArgument("T must be positive and even");
  VectorInstance inst;
  inst.dim = 2;
  const double y = 1.0 / std::sqrt(static_cast<double>(t));
  for (int i = 0; i < t / 2; ++i) inst.vectors.push_back({1.0, y});
  for (int i = 0; i < t / 2; ++i) inst.vectors.push_back({-1.0, y});
  inst.signs.assign(t, 1);
  return inst;
}

Pm1Structure Pm1LocalOptStructure(int n) {
  if (n <= 0 || n % 8 != 0) throw NotMultipleOf8("n = " + std::to_string(n));
  const int k = n / 2;
  if (k > 60) throw TooLarge("n = " + std::to_string(n));
  // (B^{-1})_{ij} = 1 on the diagonal and 2^{i-j-1} below it.
  auto binv = [](int i, int j) -> int64_t {
    if (i == j) return 1;
    if (i < j) return 0;
    return int64_t{1} << (i - j - 1);
  };
  Pm1Structure st;
  st.binv_one.assign(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) st.binv_one[i] += binv(i, j);
  }
  st.s.resize(k);
  for (int i = 0; i < k; ++i) st.s[i] = (n / 2) * st.binv_one[i];
  st.r.assign(k, 0);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) st.r[j] += binv(i, j) * st.binv_one[i];
    st.r[j] *= n / 4;
  }
  return st;
}

int64_t Pm1RowCount(int n) {
  Pm1Structure st = Pm1LocalOptStructure(n);
  int64_t rows = 0;
  for (int64_t x : st.r) rows += 2 * x;
  return rows;
}

IntVectorInstance GenPm1LocalOpt(int n, int pad_width) {
  Pm1Structure st = Pm1LocalOptStructure(n);
  const int k = n / 2;
  IntVectorInstance inst;
  inst.dim = n;
  for (int i = 0; i < k; ++i) {
    std::vector<int64_t> row1(n), row2(n);
    for (int j = 0; j < k; ++j) {
      int64_t a1, b1, a2, b2;
      if (j < i) {
        a1 = b1 = a2 = b2 = -1;
      } else if (j == i) {
        a1 = b1 = a2 = b2 = 1;
      } else {
        a1 = 1, b1 = -1, a2 = -1, b2 = 1;
      }
      row1[2 * j] = a1;
      row1[2 * j + 1] = b1;
      row2[2 * j] = a2;
      row2[2 * j + 1] = b2;
    }
    for (int64_t c = 0; c < st.r[i]; ++c) {
      inst.vectors.push_back(row1);
      inst.vectors.push_back(row2);
    }
  }
  if (pad_width >= 0) {
    const int64_t rows = static_cast<int64_t>(inst.vectors.size());
    int w = pad_width;
    if (w == 0) {
      while ((int64_t{1} << w) < rows) ++w;
    }
    if (w > 24) {
      throw TooLarge("pad width " + std::to_string(w) + " needs 2^" + std::to_string(w) +
                     " rows");
    }
    const int64_t total = int64_t{1} << w;
    if (total < rows || (total - rows) % 2 != 0) {
      throw InvalidArgument("pad width " + std::to_string(w) + " cannot hold " +
                            std::to_string(rows) + " rows");
    }
    for (int64_t q = rows; q < total; ++q) {
      std::vector<int64_t> alt(n);
      for (int c = 0; c < n; ++c) alt[c] = ((c + q - rows) % 2 == 0) ? 1 : -1;
      inst.vectors.push_back(alt);
    }
    for (int64_t q = 0; q < total; ++q) {
      for (int b = 0; b < w; ++b) inst.vectors[q].push_back(((q >> b) & 1) ? 1 : -1);
    }
    inst.dim = n + w;
  }
  inst.signs.assign(inst.vectors.size(), 1);
  return inst;
}

LayeredGraph GenLayeredGraph(int k, int max_len) {
  if (k <= 0 || max_len <= 0) throw InvalidArgument("k and L must be positive");
  if (k % 2 != 0 || max_len % 2 == 0) {
    throw BadParity("k = " + std::to_string(k) + ", L = " + std::to_string(max_len));
  }
  std::vector<int> sizes{1, k};
  for (int i = 1;; ++i) {
    int next = sizes[i - 1] + k - 2 * ((i - 1) / max_len + 1);
    if (next < 0) throw InvalidArgument("layer recurrence went negative");
    if (next == 0) break;
    sizes.push_back(next);
  }
  LayeredGraph lg;
  lg.layer_sizes = sizes;
  std::vector<int> first(sizes.size() + 1, 0);
  for (size_t i = 0; i < sizes.size(); ++i) first[i + 1] = first[i] + sizes[i];
  lg.graph = OrientedGraph(first.back());
  for (size_t i = 0; i < sizes.size(); ++i) {
    for (int x = 0; x < sizes[i]; ++x) lg.layer_of.push_back(static_cast<int>(i));
  }
  for (size_t i = 0; i + 1 < sizes.size(); ++i) {
    for (int u = first[i]; u < first[i + 1]; ++u) {
      for (int v = first[i + 1]; v < first[i + 2]; ++v) lg.graph.AddEdge(v, u);
    }
  }
  return lg;
}

std::vector<double> OrthogonalUnit(const std::vector<double>& s) {
  if (s.size() != 2) throw DimensionMismatch("orthogonal adversary is planar");
  double norm = std::hypot(s[0], s[1]);
  if (norm == 0.0) return {1.0, 0.0};
  return {-s[1] / norm, s[0] / norm};
}

VectorLocalOptReport VerifyVectorLocalOpt(const VectorInstance& inst, bool pm1_mode) {
  VectorLocalOptReport rep;
  std::vector<double> s = inst.SignedSum();
  for (size_t i = 0; i < inst.vectors.size(); ++i) {
    double dot = 0.0, sq = 0.0;
    for (int c = 0; c < inst.dim; ++c) {
      dot += s[c] * inst.signs[i] * inst.vectors[i][c];
      sq += inst.vectors[i][c] * inst.vectors[i][c];
    }
    double limit = pm1_mode ? static_cast<double>(inst.dim) : sq;
    if (dot > limit) {
      rep.ok = false;
      rep.violator = static_cast<int>(i);
      return rep;
    }
  }
  return rep;
}

VectorLocalOptReport VerifyVectorLocalOptExact(const IntVectorInstance& inst) {
  VectorLocalOptReport rep;
  std::vector<int64_t> s = inst.SignedSum();
  for (size_t i = 0; i < inst.vectors.size(); ++i) {
    int64_t dot = 0, sq = 0;
    for (int c = 0; c < inst.dim; ++c) {
      dot += s[c] * inst.signs[i] * inst.vectors[i][c];
      sq += inst.vectors[i][c] * inst.vectors[i][c];
    }
    if (dot > sq) {
      rep.ok = false;
      rep.violator = static_cast<int>(i);
      return rep;
    }
  }
  return rep;
}

int64_t VectorLocalSearch(VectorInstance& inst) {
  std::vector<double> s = inst.SignedSum();
  int64_t flips = 0;
  bool again = true;
  while (again) {
    again = false;
    for (size_t i = 0; i < inst.vectors.size(); ++i) {
      double dot = 0.0, sq = 0.0;
      for (int c = 0; c < inst.dim; ++c) {
        dot += s[c] * inst.signs[i] * inst.vectors[i][c];
        sq += inst.vectors[i][c] * inst.vectors[i][c];
      }
      if (dot > sq * (1.0 + 1e-12)) {
        for (int c = 0; c < inst.dim; ++c) s[c] -= 2.0 * inst.signs[i] * inst.vectors[i][c];
        inst.signs[i] = -inst.signs[i];
        ++flips;
        again = true;
        break;
      }
    }
  }
  return flips;
}

UGraph GenRandomRegular(int n, int d, uint64_t seed) {
  if (n <= 0 || d < 0 || d >= n || (static_cast<int64_t>(n) * d) % 2 != 0) {
    throw InfeasibleDegree("n = " + std::to_string(n) + ", d = " + std::to_string(d));
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v) {
      for (int j = 0; j < d; ++j) stubs.push_back(v);
    }
    std::vector<std::set<int>> adj(n);
    UGraph g;
    g.n = n;
    bool stuck = false;
    while (!stubs.empty() && !stuck) {
      bool paired = false;
      for (int tries = 0; tries < 200 && !paired; ++tries) {
        std::uniform_int_distribution<size_t> pick(0, stubs.size() - 1);
        size_t i = pick(rng), j = pick(rng);
        int u = stubs[i], v = stubs[j];
        if (i == j || u == v || adj[u].count(v)) continue;
        adj[u].insert(v);
        adj[v].insert(u);
        g.edges.emplace_back(std::min(u, v), std::max(u, v));
        if (i < j) std::swap(i, j);
        stubs[i] = stubs.back();
        stubs.pop_back();
        stubs[j] = stubs.back();
        stubs.pop_back();
        paired = true;
      }
      if (!paired) stuck = true;
    }
    if (!stuck) return g;
  }
  throw InfeasibleDegree("pairing kept getting stuck");
}

namespace {

bool Connected(const std::vector<std::vector<int>>& adj, int a, int b) {
  std::vector<int> stack{a};
  std::vector<bool> seen(adj.size(), false);
  seen[a] = true;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    if (x == b) return true;
    for (int y : adj[x]) {
      if (!seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  return false;
}

void EraseOne(std::vector<int>& v, int x) {
  auto it = std::find(v.begin(), v.end(), x);
  *it = v.back();
  v.pop_back();
}

}  // namespace

std::vector<GraphEvent> GenForestStream(int n, int t, uint64_t seed, double insert_prob) {
  if (n < 2) throw InvalidArgument("forest stream needs two vertices");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> vert(0, n - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::vector<int>> adj(n);
  std::vector<std::pair<int, int>> live;
  std::vector<GraphEvent> out;
  while (static_cast<int>(out.size()) < t) {
    bool want_insert = live.empty() || coin(rng) < insert_prob;
    if (want_insert) {
      bool done = false;
      for (int tries = 0; tries < 64 && !done; ++tries) {
        int u = vert(rng), v = vert(rng);
        if (u == v || Connected(adj, u, v)) continue;
        adj[u].push_back(v);
        adj[v].push_back(u);
        live.emplace_back(u, v);
        out.push_back({true, u, v});
        done = true;
      }
      if (done) continue;
    }
    std::uniform_int_distribution<size_t> pick(0, live.size() - 1);
    size_t i = pick(rng);
    auto [u, v] = live[i];
    live[i] = live.back();
    live.pop_back();
    EraseOne(adj[u], v);
    EraseOne(adj[v], u);
    out.push_back({false, u, v});
  }
  return out;
}

std::vector<GraphEvent> GenGraphWorkload(int n, int t, uint64_t seed, double insert_prob) {
  if (n < 2) throw InvalidArgument("workload needs two vertices");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> vert(0, n - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::pair<int, int>> live;
  std::vector<GraphEvent> out;
  out.reserve(t);
  while (static_cast<int>(out.size()) < t) {
    if (live.empty() || coin(rng) < insert_prob) {
      int u = vert(rng), v = vert(rng);
      if (u == v) continue;
      live.emplace_back(u, v);
      out.push_back({true, u, v});
    } else {
      std::uniform_int_distribution<size_t> pick(0, live.size() - 1);
      size_t i = pick(rng);
      out.push_back({false, live[i].first, live[i].second});
      live[i] = live.back();
      live.pop_back();
    }
  }
  return out;
}

std::vector<VectorEvent> GenVectorStream(const VectorStreamSpec& spec) {
  if (spec.dim <= 0) throw InvalidArgument("dimension must be positive");
  if (spec.kind == VectorKind::kSparsePm1 && (spec.sparsity < 1 || spec.sparsity > spec.dim)) {
    throw InvalidArgument("sparsity must lie in [1, dim]");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&]() {
    std::vector<double> v(spec.dim, 0.0);
    switch (spec.kind) {
      case VectorKind::kUniformBox:
        for (double& x : v) x = box(rng);
        break;
      case VectorKind::kUnitL2: {
        double norm = 0.0;
        while (norm < 1e-12) {
          norm = 0.0;
          for (double& x : v) {
            x = gauss(rng);
            norm += x * x;
          }
          norm = std::sqrt(norm);
        }
        for (double& x : v) x /= norm;
        break;
      }
      case VectorKind::kSparsePm1: {
        std::vector<int> idx(spec.dim);
        for (int i = 0; i < spec.dim; ++i) idx[i] = i;
        for (int i = 0; i < spec.sparsity; ++i) {
          std::uniform_int_distribution<int> pick(i, spec.dim - 1);
          std::swap(idx[i], idx[pick(rng)]);
          v[idx[i]] = coin(rng) < 0.5 ? 1.0 : -1.0;
        }
        break;
      }
    }
    return v;
  };
  std::vector<VectorEvent> out;
  std::vector<int64_t> live;
  int64_t next_id = 0;
  while (static_cast<int>(out.size()) < spec.t) {
    if (live.empty() || spec.insert_prob >= 1.0 || coin(rng) < spec.insert_prob) {
      out.push_back({true, next_id, draw()});
      live.push_back(next_id++);
    } else {
      std::uniform_int_distribution<size_t> pick(0, live.size() - 1);
      size_t i = pick(rng);
      out.push_back({false, live[i], {}});
      live[i] = live.back();
      live.pop_back();
    }
  }
  return out;
}

}  // namespace dynbal
