#include "dynbal/pruner.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dynbal/errors.h"

namespace dynbal {

int64_t PruneBudget(double phi, int64_t m) {
  return std::max<int64_t>(1, static_cast<int64_t>(std::floor(phi * phi * m / 20.0)));
}

PrunedExpander::PrunedExpander(const UGraph& g0, double phi, bool enforce_budget)
    : n_(g0.n), phi_(phi), enforce_budget_(enforce_budget), edges_(g0.edges) {
  if (!(phi > 0.0) || phi > 1.0) throw InvalidArgument("phi must lie in (0, 1]");
  budget_ = PruneBudget(phi, m0());
  alive_e_.assign(edges_.size(), true);
  vol0_.assign(n_, 0);
  deg_t_.assign(n_, 0);
  inc_.assign(n_, {});
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    auto [u, v] = edges_[e];
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw InvalidArgument("edge endpoint out of range");
    if (u == v) throw SelfLoop("vertex " + std::to_string(u));
    ++vol0_[u];
    ++vol0_[v];
    inc_[u].push_back(e);
    inc_[v].push_back(e);
  }
  deg_t_.assign(vol0_.begin(), vol0_.end());
  alive_v_.assign(n_, false);
  for (int v = 0; v < n_; ++v) alive_v_[v] = vol0_[v] > 0;
}

std::vector<int> PrunedExpander::AliveVertices() const {
  std::vector<int> out;
  for (int v = 0; v < n_; ++v) {
    if (alive_v_[v]) out.push_back(v);
  }
  return out;
}

std::vector<int> PrunedExpander::AliveEdges() const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (alive_e_[e]) out.push_back(e);
  }
  return out;
}

bool PrunedExpander::Violates(int64_t cut, int64_t vol_a, int64_t vol_b) const {
  return 6.0 * static_cast<double>(cut) < phi_ * static_cast<double>(std::min(vol_a, vol_b));
}

void PrunedExpander::RemoveEdgeInternal(int e) {
  alive_e_[e] = false;
  --deg_t_[edges_[e].first];
  --deg_t_[edges_[e].second];
}

namespace {

// Lexicographic order of the ascending element lists of two bit sets.
bool LexLess(uint32_t a, uint32_t b) {
  if (a == b) return false;
  int bit = __builtin_ctz(a ^ b);
  if ((a >> bit) & 1u) return (b >> bit) != 0;
  return (a >> bit) == 0;
}

}  // namespace

std::vector<int> PrunedExpander::ExactViolating() const {
  std::vector<int> verts = AliveVertices();
  const int k = static_cast<int>(verts.size());
  if (k < 2) return {};
  std::vector<int> local(n_, -1);
  for (int i = 0; i < k; ++i) local[verts[i]] = i;
  std::vector<std::vector<int>> nb(k);
  std::vector<int64_t> deg(k, 0), w(k, 0);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (!alive_e_[e]) continue;
    int a = local[edges_[e].first], b = local[edges_[e].second];
    nb[a].push_back(b);
    nb[b].push_back(a);
    ++deg[a];
    ++deg[b];
  }
  int64_t vol_total = 0;
  for (int i = 0; i < k; ++i) {
    w[i] = vol0_[verts[i]];
    vol_total += w[i];
  }
  const uint32_t full = k == 32 ? ~0u : ((1u << k) - 1);
  std::vector<bool> in(k, false);
  int64_t cut = 0, vol = 0;
  uint32_t mask = 0;
  bool have = false;
  uint32_t best = 0;
  int64_t best_vol = 0;
  const uint64_t total = uint64_t{1} << (k - 1);
  for (uint64_t i = 1; i < total; ++i) {
    int v = __builtin_ctzll(i);
    int64_t to_inside = 0;
    for (int x : nb[v]) to_inside += in[x] ? 1 : 0;
    if (!in[v]) {
      cut += deg[v] - 2 * to_inside;
      vol += w[v];
    } else {
      cut -= deg[v] - 2 * to_inside;
      vol -= w[v];
    }
    in[v] = !in[v];
    mask ^= (1u << v);
    int64_t other = vol_total - vol;
    if (!Violates(cut, vol, other)) continue;
    uint32_t comp = full & ~mask;
    uint32_t side;
    int64_t side_vol;
    if (vol < other || (vol == other && LexLess(mask, comp))) {
      side = mask;
      side_vol = vol;
    } else {
      side = comp;
      side_vol = other;
    }
    if (!have || side_vol < best_vol || (side_vol == best_vol && LexLess(side, best))) {
      have = true;
      best = side;
      best_vol = side_vol;
    }
  }
  std::vector<int> out;
  if (!have) return out;
  for (int i = 0; i < k; ++i) {
    if ((best >> i) & 1u) out.push_back(verts[i]);
  }
  return out;
}

std::vector<int> PrunedExpander::HeuristicViolating() const {
  std::vector<int> verts = AliveVertices();
  if (verts.size() < 2) return {};
  int64_t vol_total = 0;
  for (int v : verts) vol_total += vol0_[v];

  // Singletons.
  int best_v = -1;
  for (int v : verts) {
    if (!Violates(deg_t_[v], vol0_[v], vol_total - vol0_[v])) continue;
    if (vol0_[v] > vol_total - vol0_[v]) continue;
    if (best_v < 0 || vol0_[v] < vol0_[best_v]) best_v = v;
  }
  if (best_v >= 0) return {best_v};

  // Components of the current graph (cut 0).
  std::vector<int> local(n_, -1);
  for (size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
  UGraph h;
  h.n = static_cast<int>(verts.size());
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (alive_e_[e]) h.edges.emplace_back(local[edges_[e].first], local[edges_[e].second]);
  }
  {
    std::vector<int> parent(h.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& [u, v] : h.edges) parent[find(u)] = find(v);
    std::vector<int64_t> comp_vol(h.n, 0);
    int roots = 0;
    for (int i = 0; i < h.n; ++i) {
      comp_vol[find(i)] += vol0_[verts[i]];
      if (find(i) == i) ++roots;
    }
    if (roots > 1) {
      int best_root = -1;
      for (int i = 0; i < h.n; ++i) {
        if (find(i) != i) continue;
        if (best_root < 0 || comp_vol[i] < comp_vol[best_root]) best_root = i;
      }
      std::vector<int> out;
      for (int i = 0; i < h.n; ++i) {
        if (find(i) == best_root) out.push_back(verts[i]);
      }
      return out;
    }
  }

  // Sweep on the vol0-normalized Laplacian of the current graph.
  std::vector<double> wts(h.n);
  for (int i = 0; i < h.n; ++i) wts[i] = static_cast<double>(vol0_[verts[i]]);
  SpectrumResult sp = SecondEigen(h, wts);
  std::vector<int> order(h.n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> key(h.n);
  for (int i = 0; i < h.n; ++i) key[i] = sp.vector[i] / std::sqrt(wts[i]);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
  std::vector<std::vector<int>> nb = h.Neighbors();
  std::vector<bool> in(h.n, false);
  int64_t cut = 0, vol = 0;
  int best_k = -1;
  double best_ratio = 0.0;
  for (int k = 0; k + 1 < h.n; ++k) {
    int v = order[k];
    int64_t to_inside = 0;
    for (int x : nb[v]) to_inside += in[x] ? 1 : 0;
    cut += static_cast<int64_t>(nb[v].size()) - 2 * to_inside;
    vol += vol0_[verts[v]];
    in[v] = true;
    int64_t mv = std::min(vol, vol_total - vol);
    if (!Violates(cut, vol, vol_total - vol)) continue;
    double ratio = static_cast<double>(cut) / static_cast<double>(mv);
    if (best_k < 0 || ratio < best_ratio) {
      best_k = k;
      best_ratio = ratio;
    }
  }
  if (best_k < 0) return {};
  int64_t prefix_vol = 0;
  for (int k = 0; k <= best_k; ++k) prefix_vol += vol0_[verts[order[k]]];
  bool take_prefix = prefix_vol <= vol_total - prefix_vol;
  std::vector<int> out;
  std::vector<bool> pre(h.n, false);
  for (int k = 0; k <= best_k; ++k) pre[order[k]] = true;
  for (int i = 0; i < h.n; ++i) {
    if (pre[i] == take_prefix) out.push_back(verts[i]);
  }
  return out;
}

std::vector<int> PrunedExpander::FindViolating(bool* exact) const {
  int alive = 0;
  for (bool a : alive_v_) alive += a ? 1 : 0;
  *exact = alive <= kExactCutLimit;
  return *exact ? ExactViolating() : HeuristicViolating();
}

PruneResult PrunedExpander::Prune(int edge) {
  if (edge < 0 || edge >= static_cast<int>(edges_.size()) || !alive_e_[edge]) {
    throw UnknownEdge("edge " + std::to_string(edge));
  }
  if (enforce_budget_ && t_ + 1 > budget_) {
    throw BudgetExceeded("deletion " + std::to_string(t_ + 1) + " exceeds budget " +
                         std::to_string(budget_));
  }
  RemoveEdgeInternal(edge);
  ++t_;
  PruneResult res;
  while (true) {
    bool exact = false;
    std::vector<int> a = FindViolating(&exact);
    if (a.empty()) break;
    for (int v : a) {
      alive_v_[v] = false;
      pruned_.push_back(v);
      pruned_vol0_ += vol0_[v];
      res.removed_vertices.push_back(v);
      for (int e : inc_[v]) {
        if (!alive_e_[e]) continue;
        RemoveEdgeInternal(e);
        res.removed_edges.push_back(e);
      }
    }
  }
  std::sort(res.removed_vertices.begin(), res.removed_vertices.end());
  std::sort(res.removed_edges.begin(), res.removed_edges.end());
  return res;
}

void PrunedExpander::Readmit(int v) {
  auto it = std::find(pruned_.begin(), pruned_.end(), v);
  if (it == pruned_.end()) throw UnknownId("vertex " + std::to_string(v) + " is not pruned");
  pruned_.erase(it);
  pruned_vol0_ -= vol0_[v];
  alive_v_[v] = true;
}

StrongExpansionReport PrunedExpander::Check() const {
  StrongExpansionReport rep;
  bool exact = false;
  rep.witness = FindViolating(&exact);
  rep.exact = exact;
  rep.ok = rep.witness.empty();
  if (!rep.ok) {
    std::vector<bool> in(n_, false);
    for (int v : rep.witness) {
      in[v] = true;
      rep.vol0 += vol0_[v];
    }
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      if (alive_e_[e] && in[edges_[e].first] != in[edges_[e].second]) ++rep.cut;
    }
  }
  return rep;
}

}  // namespace dynbal
