#include "dynbal/local_search.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>

#include "dynbal/errors.h"

namespace dynbal {

namespace {

bool Improving(const OrientedGraph& g, int e, int delta) {
  const auto& ed = g.edge(e);
  return g.imbalance(ed.head()) - g.imbalance(ed.tail()) > delta;
}

// Breadth-first search backwards along in-edges from high-imbalance ends.
std::vector<int> FindImprovingPath(const OrientedGraph& g, int max_len, int delta) {
  const int n = g.num_vertices();
  if (n == 0) return {};
  int64_t low = *std::min_element(g.imbalances().begin(), g.imbalances().end());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return g.imbalance(x) > g.imbalance(y); });

  std::vector<int> stamp(n, -1), parent(n, -1), depth(n, 0);
  std::vector<int> frontier;
  for (int b : order) {
    if (g.imbalance(b) - low <= delta) break;
    frontier.assign(1, b);
    stamp[b] = b;
    depth[b] = 0;
    for (size_t qi = 0; qi < frontier.size(); ++qi) {
      int x = frontier[qi];
      if (depth[x] >= max_len) continue;
      for (int e : g.incident(x)) {
        if (g.edge(e).head() != x) continue;
        int t = g.edge(e).tail();
        if (stamp[t] == b) continue;
        stamp[t] = b;
        parent[t] = e;
        depth[t] = depth[x] + 1;
        if (g.imbalance(b) - g.imbalance(t) > delta) {
          std::vector<int> path;
          for (int v = t; v != b; v = g.edge(parent[v]).head()) path.push_back(parent[v]);
          return path;
        }
        frontier.push_back(t);
      }
    }
  }
  return {};
}

}  // namespace

LocalSearchStats LocalSearch(OrientedGraph& g, int delta) {
  if (delta < 2) throw InvalidArgument("threshold must be at least 2");
  LocalSearchStats st;
  st.phi_before = g.phi();
  std::priority_queue<int, std::vector<int>, std::greater<int>> heap;
  for (int e = 0; e < g.edge_capacity(); ++e) {
    if (g.alive(e) && Improving(g, e, delta)) heap.push(e);
  }
  while (!heap.empty()) {
    int e = heap.top();
    heap.pop();
    if (!g.alive(e) || !Improving(g, e, delta)) continue;
    g.FlipEdge(e);
    ++st.flips;
    const auto& ed = g.edge(e);
    for (int v : {ed.a, ed.b}) {
      for (int f : g.incident(v)) {
        if (Improving(g, f, delta)) heap.push(f);
      }
    }
  }
  st.phi_after = g.phi();
  return st;
}

LocalSearchStats ThresholdLocalSearch(OrientedGraph& g, int delta) {
  return LocalSearch(g, delta);
}

LocalSearchStats PathLocalSearch(OrientedGraph& g, int max_len) {
  if (max_len < 1) throw InvalidArgument("path length must be at least 1");
  if (max_len == 1) return LocalSearch(g, 2);
  LocalSearchStats st;
  st.phi_before = g.phi();
  while (true) {
    std::vector<int> path = FindImprovingPath(g, max_len, 2);
    if (path.empty()) break;
    for (int e : path) g.FlipEdge(e);
    st.flips += static_cast<int64_t>(path.size());
  }
  st.phi_after = g.phi();
  return st;
}

LocalOptReport VerifyLocalOpt(const OrientedGraph& g, int max_len, int delta) {
  LocalOptReport rep;
  if (max_len == 1) {
    for (int e = 0; e < g.edge_capacity(); ++e) {
      if (g.alive(e) && Improving(g, e, delta)) {
        rep.ok = false;
        rep.witness = {e};
        return rep;
      }
    }
    return rep;
  }
  rep.witness = FindImprovingPath(g, max_len, delta);
  rep.ok = rep.witness.empty();
  return rep;
}

int DiscrepancyOneOrientation(OrientedGraph& g) {
  const int n = g.num_vertices();
  // Virtual vertex n pairs up the odd-degree vertices.
  struct Arc {
    int x, y;
    int edge;  // -1 for virtual arcs
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adj(n + 1);
  for (int e = 0; e < g.edge_capacity(); ++e) {
    if (!g.alive(e)) continue;
    const auto& ed = g.edge(e);
    adj[ed.a].push_back(static_cast<int>(arcs.size()));
    adj[ed.b].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({ed.a, ed.b, e});
  }
  for (int v = 0; v < n; ++v) {
    if (adj[v].size() % 2 == 1) {
      adj[v].push_back(static_cast<int>(arcs.size()));
      adj[n].push_back(static_cast<int>(arcs.size()));
      arcs.push_back({v, n, -1});
    }
  }
  std::vector<bool> used(arcs.size(), false);
  std::vector<size_t> next(n + 1, 0);
  int changed = 0;
  for (int start = 0; start <= n; ++start) {
    while (true) {
      while (next[start] < adj[start].size() && used[adj[start][next[start]]]) ++next[start];
      if (next[start] == adj[start].size()) break;
      int cur = start;
      while (true) {
        while (next[cur] < adj[cur].size() && used[adj[cur][next[cur]]]) ++next[cur];
        if (next[cur] == adj[cur].size()) break;
        int id = adj[cur][next[cur]];
        used[id] = true;
        const Arc& arc = arcs[id];
        int to = arc.x == cur ? arc.y : arc.x;
        if (arc.edge >= 0 && g.edge(arc.edge).tail() != cur) {
          g.FlipEdge(arc.edge);
          ++changed;
        }
        cur = to;
      }
    }
  }
  return changed;
}

}  // namespace dynbal
