#include "dynbal/local_search.h"

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dynbal/errors.h"
#include "dynbal/instances.h"

namespace dynbal {
namespace {

OrientedGraph RandomGraph(int n, int m, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> vert(0, n - 1);
  OrientedGraph g(n);
  while (g.num_edges() < m) {
    int u = vert(rng), v = vert(rng);
    if (u != v) g.AddEdge(u, v);
  }
  return g;
}

// Brute force over every edge: no head-minus-tail gap above delta.
bool NoImprovingEdge(const OrientedGraph& g, int delta) {
  for (int e : g.LiveEdges()) {
    if (g.imbalance(g.edge(e).head()) - g.imbalance(g.edge(e).tail()) > delta) return false;
  }
  return true;
}

// Expected layer sizes from the recurrence written out independently.
std::vector<int> LayerSizes(int k, int len) {
  std::vector<int> n{1, k};
  for (int i = 1;; ++i) {
    int drop = 2 * static_cast<int>(std::ceil(static_cast<double>(i) / len));
    int next = n[i - 1] + k - drop;
    if (next <= 0) break;
    n.push_back(next);
  }
  return n;
}

TEST(LocalSearch, SingleEdgeIsOptimal) {
  OrientedGraph g(2);
  g.AddEdge(0, 1);
  EXPECT_EQ(LocalSearch(g).flips, 0);
  EXPECT_TRUE(VerifyLocalOpt(g).ok);
}

TEST(LocalSearch, PotentialDropsPerFlip) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    OrientedGraph g = RandomGraph(25, 150, seed);
    // Worst start: orient every edge toward the larger id.
    for (int e : g.LiveEdges()) g.SetDirection(e, std::min(g.edge(e).a, g.edge(e).b));
    int64_t phi0 = g.phi();
    LocalSearchStats st = LocalSearch(g);
    EXPECT_EQ(st.phi_before, phi0);
    EXPECT_LE(st.phi_after, phi0 - 4 * st.flips);
    EXPECT_LE(st.flips, phi0 / 4);
    EXPECT_TRUE(NoImprovingEdge(g, 2));
    EXPECT_EQ(g.phi(), g.RecomputePhi());
  }
}

TEST(LocalSearch, PathLengthOneMatchesEdgeSearch) {
  OrientedGraph a = RandomGraph(20, 80, 7);
  OrientedGraph b = a;
  LocalSearchStats sa = LocalSearch(a);
  LocalSearchStats sb = PathLocalSearch(b, 1);
  EXPECT_EQ(sa.flips, sb.flips);
  EXPECT_EQ(a.DumpString(), b.DumpString());
}

TEST(LocalSearch, ThresholdTwoMatchesEdgeSearch) {
  OrientedGraph a = RandomGraph(20, 80, 8);
  OrientedGraph b = a;
  LocalSearch(a);
  ThresholdLocalSearch(b, 2);
  EXPECT_EQ(a.DumpString(), b.DumpString());
}

TEST(LocalSearch, StarWithWideThresholdIsUntouched) {
  // n vertices, n - 1 leaves; center minus leaf imbalance is exactly n.
  const int n = 12;
  OrientedGraph g(n);
  for (int v = 1; v < n; ++v) g.AddEdge(v, 0);
  OrientedGraph h = g;
  EXPECT_EQ(ThresholdLocalSearch(g, n).flips, 0);
  EXPECT_GT(LocalSearch(h).flips, 0);
  EXPECT_LE(h.MaxDiscrepancy(), 2);
}

TEST(LocalSearch, ThresholdSweep) {
  OrientedGraph base = RandomGraph(30, 300, 21);
  for (int e : base.LiveEdges()) base.SetDirection(e, std::min(base.edge(e).a, base.edge(e).b));
  for (int delta : {2, 4, 8, 16, 32}) {
    OrientedGraph g = base;
    LocalSearchStats st = ThresholdLocalSearch(g, delta);
    EXPECT_TRUE(NoImprovingEdge(g, delta)) << delta;
    EXPECT_LE(st.phi_after, st.phi_before);
  }
  OrientedGraph g = base;
  EXPECT_THROW(ThresholdLocalSearch(g, 1), InvalidArgument);
}

TEST(LocalSearch, LayeredGraphsAreFixpoints) {
  for (auto [k, len] : std::vector<std::pair<int, int>>{{4, 1}, {4, 3}, {6, 3}, {8, 5}}) {
    LayeredGraph lg = GenLayeredGraph(k, len);
    std::vector<int> sizes = LayerSizes(k, len);
    ASSERT_EQ(lg.layer_sizes, sizes);
    // Imbalance of layer i is n_{i+1} - n_{i-1}.
    for (int v = 0; v < lg.graph.num_vertices(); ++v) {
      int i = lg.layer_of[v];
      int above = i + 1 < static_cast<int>(sizes.size()) ? sizes[i + 1] : 0;
      int below = i > 0 ? sizes[i - 1] : 0;
      ASSERT_EQ(lg.graph.imbalance(v), above - below);
    }
    EXPECT_EQ(lg.graph.imbalance(0), k);
    EXPECT_EQ(lg.graph.MaxDiscrepancy(), k);
    OrientedGraph g = lg.graph;
    EXPECT_EQ(PathLocalSearch(g, len).flips, 0) << k << "," << len;
    EXPECT_TRUE(VerifyLocalOpt(lg.graph, len).ok);
  }
  EXPECT_THROW(GenLayeredGraph(3, 1), BadParity);
  EXPECT_THROW(GenLayeredGraph(4, 2), BadParity);
}

TEST(LocalSearch, LayeredGraphFailsLongerPaths) {
  LayeredGraph lg = GenLayeredGraph(4, 1);
  LocalOptReport rep = VerifyLocalOpt(lg.graph, 3);
  ASSERT_FALSE(rep.ok);
  // The witness is a directed path whose end imbalance beats its start by > 2.
  int start = lg.graph.edge(rep.witness.front()).tail();
  for (size_t i = 0; i + 1 < rep.witness.size(); ++i) {
    EXPECT_EQ(lg.graph.edge(rep.witness[i]).head(), lg.graph.edge(rep.witness[i + 1]).tail());
  }
  int end = lg.graph.edge(rep.witness.back()).head();
  EXPECT_GT(lg.graph.imbalance(end) - lg.graph.imbalance(start), 2);
  EXPECT_LE(rep.witness.size(), 3u);
}

TEST(LocalSearch, PerturbedGraphFailsWithWitness) {
  OrientedGraph g(3);
  g.AddEdge(0, 1);
  g.AddEdge(2, 1);
  g.AddEdge(0, 2);
  g.AddEdge(2, 1);
  // imbalances: 0:-2, 1:3, 2:-1
  LocalOptReport rep = VerifyLocalOpt(g);
  ASSERT_FALSE(rep.ok);
  ASSERT_EQ(rep.witness.size(), 1u);
  const auto& ed = g.edge(rep.witness[0]);
  EXPECT_GT(g.imbalance(ed.head()) - g.imbalance(ed.tail()), 2);
}

TEST(LocalSearch, ForestStaysWithinThree) {
  const int n = 128;
  const int len = 7;
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    auto events = GenForestStream(n, 1500, seed);
    OrientedGraph g(n);
    std::map<std::pair<int, int>, std::vector<int>> ids;
    for (const auto& ev : events) {
      auto key = std::minmax(ev.u, ev.v);
      if (ev.insert) {
        ids[key].push_back(g.AddEdge(ev.u, ev.v));
      } else {
        g.RemoveEdge(ids[key].back());
        ids[key].pop_back();
      }
      PathLocalSearch(g, len);
      ASSERT_LE(g.MaxDiscrepancy(), 3);
      ASSERT_TRUE(VerifyLocalOpt(g, len).ok);
    }
  }
}

void CheckDiscrepancyOne(OrientedGraph& g) {
  DiscrepancyOneOrientation(g);
  for (int v = 0; v < g.num_vertices(); ++v) {
    int64_t b = g.imbalance(v);
    ASSERT_LE(std::abs(b), 1) << v;
    ASSERT_EQ(std::abs(b) % 2, g.degree(v) % 2) << v;
  }
}

TEST(DiscrepancyOne, EvenCycle) {
  OrientedGraph g(8);
  for (int v = 0; v < 8; ++v) g.AddEdge(v, (v + 1) % 8);
  g.FlipEdge(0);
  g.FlipEdge(3);
  CheckDiscrepancyOne(g);
  EXPECT_EQ(g.phi(), 0);
}

TEST(DiscrepancyOne, Tree) {
  std::mt19937_64 rng(4);
  OrientedGraph g(40);
  for (int v = 1; v < 40; ++v) g.AddEdge(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
  CheckDiscrepancyOne(g);
}

TEST(DiscrepancyOne, RandomMultigraph) {
  OrientedGraph g = RandomGraph(150, 2000, 99);
  CheckDiscrepancyOne(g);
  EXPECT_EQ(g.num_edges(), 2000);
}

}  // namespace
}  // namespace dynbal
