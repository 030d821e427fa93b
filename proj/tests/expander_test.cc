#include "dynbal/expander.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dynbal/errors.h"
#include "dynbal/instances.h"
#include "test_util.h"

namespace dynbal {
namespace {

using dynbal_test::BruteConductance;

UGraph Complete(int n) {
  UGraph g;
  g.n = n;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v});
  }
  return g;
}

UGraph Cycle(int n) {
  UGraph g;
  g.n = n;
  for (int v = 0; v < n; ++v) g.edges.push_back({v, (v + 1) % n});
  return g;
}

UGraph Path(int n) {
  UGraph g;
  g.n = n;
  for (int v = 0; v + 1 < n; ++v) g.edges.push_back({v, v + 1});
  return g;
}

// Two copies of K_k joined by one edge between vertex 0 and vertex k.
UGraph Dumbbell(int k) {
  UGraph g;
  g.n = 2 * k;
  for (int side = 0; side < 2; ++side) {
    for (int u = 0; u < k; ++u) {
      for (int v = u + 1; v < k; ++v) g.edges.push_back({side * k + u, side * k + v});
    }
  }
  g.edges.push_back({0, k});
  return g;
}

UGraph RandomConnected(int n, int extra, uint64_t seed) {
  std::mt19937_64 rng(seed);
  UGraph g;
  g.n = n;
  for (int v = 1; v < n; ++v) {
    g.edges.push_back({std::uniform_int_distribution<int>(0, v - 1)(rng), v});
  }
  std::uniform_int_distribution<int> vert(0, n - 1);
  while (extra > 0) {
    int u = vert(rng), v = vert(rng);
    if (u == v) continue;
    g.edges.push_back({u, v});
    --extra;
  }
  return g;
}

int64_t CutOf(const UGraph& g, const std::vector<int>& side) {
  std::set<int> s(side.begin(), side.end());
  int64_t c = 0;
  for (auto [u, v] : g.edges) c += s.count(u) != s.count(v) ? 1 : 0;
  return c;
}

TEST(ConductanceExact, CompleteFour) {
  CutReport r = ConductanceExact(Complete(4));
  EXPECT_NEAR(r.conductance, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(r.side.size(), 2u);
  EXPECT_EQ(r.cut_edges, 4);
}

TEST(ConductanceExact, TrianglesWithBridge) {
  UGraph g;
  g.n = 6;
  g.edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
  CutReport r = ConductanceExact(g);
  EXPECT_NEAR(r.conductance, 1.0 / 7.0, 1e-12);
  EXPECT_EQ(r.cut_edges, 1);
  EXPECT_EQ(r.volume, 7);
}

TEST(ConductanceExact, SingleEdge) {
  UGraph g;
  g.n = 2;
  g.edges = {{0, 1}};
  EXPECT_DOUBLE_EQ(ConductanceExact(g).conductance, 1.0);
}

TEST(ConductanceExact, MatchesBruteForce) {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    int n = 4 + static_cast<int>(seed % 9);
    UGraph g = RandomConnected(n, n, seed);
    auto [num, den] = BruteConductance(g.n, g.edges);
    CutReport r = ConductanceExact(g);
    EXPECT_NEAR(r.conductance, static_cast<double>(num) / den, 1e-12) << seed;
    EXPECT_EQ(CutOf(g, r.side), r.cut_edges);
  }
}

TEST(ConductanceExact, TooLarge) { EXPECT_THROW(ConductanceExact(Cycle(25)), TooLarge); }

TEST(SweepCut, NeverBelowExact) {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    int n = 5 + static_cast<int>(seed % 20);
    UGraph g = RandomConnected(n, 2 * n, 100 + seed);
    CutReport exact = ConductanceExact(g);
    CutReport sweep = SweepCut(g);
    EXPECT_GE(sweep.conductance, exact.conductance - 1e-12) << seed;
    // The reported conductance matches its own side.
    int64_t vol = 0;
    std::vector<int> deg = g.Degrees();
    for (int v : sweep.side) vol += deg[v];
    int64_t total = 2 * static_cast<int64_t>(g.edges.size());
    double phi = static_cast<double>(CutOf(g, sweep.side)) / std::min(vol, total - vol);
    EXPECT_NEAR(sweep.conductance, phi, 1e-12);
    // Cheeger upper bound.
    EXPECT_LE(sweep.conductance, std::sqrt(2.0 * sweep.lambda2) + 1e-9) << seed;
  }
}

TEST(SweepCut, CompleteBipartite) {
  UGraph g;
  g.n = 10;
  for (int u = 0; u < 5; ++u) {
    for (int v = 5; v < 10; ++v) g.edges.push_back({u, v});
  }
  CutReport sweep = SweepCut(g);
  EXPECT_LE(sweep.conductance, 1.0);
  EXPECT_GE(sweep.conductance, ConductanceExact(g).conductance - 1e-12);
}

TEST(SweepCut, DumbbellBridge) {
  UGraph g = Dumbbell(10);
  CutReport sweep = SweepCut(g);
  EXPECT_NEAR(sweep.conductance, 1.0 / 91.0, 1e-12);
  EXPECT_EQ(sweep.side.size(), 10u);
  EXPECT_EQ(sweep.cut_edges, 1);
}

TEST(SecondEigen, PowerIterationAgrees) {
  UGraph g = RandomConnected(40, 80, 5);
  SpectrumResult a = SecondEigen(g);
  SpectrumResult b = PowerIterationSecondEigen(g);
  EXPECT_NEAR(a.lambda2, b.lambda2, 1e-5);
  // Cycle C_n normalized Laplacian: 1 - cos(2 pi / n).
  SpectrumResult c = SecondEigen(Cycle(30));
  EXPECT_NEAR(c.lambda2, 1.0 - std::cos(2.0 * M_PI / 30.0), 1e-9);
}

TEST(WeakRegularity, Basics) {
  EXPECT_TRUE(IsWeaklyRegular(Cycle(9), 1.0));
  EXPECT_TRUE(IsWeaklyRegular(Complete(6), 1.0));
  UGraph star;
  star.n = 6;
  for (int v = 1; v < 6; ++v) star.edges.push_back({0, v});
  EXPECT_TRUE(IsWeaklyRegular(star, 0.5));
  EXPECT_FALSE(IsWeaklyRegular(star, 1.0));
}

TEST(CertifyPiece, SmallCases) {
  UGraph edge;
  edge.n = 2;
  edge.edges = {{0, 1}};
  CertReport e = CertifyPiece(edge, 0.5, 0.125);
  EXPECT_TRUE(e.passed);

  CertReport c4 = CertifyPiece(Cycle(4), 0.4, 0.1);
  EXPECT_TRUE(c4.passed);
  EXPECT_NEAR(c4.measured, 0.5, 1e-12);
  EXPECT_EQ(c4.method, "exact");

  UGraph p4 = Path(4);
  CertReport p = CertifyPiece(p4, 0.5, 0.125);
  EXPECT_FALSE(p.passed);
  EXPECT_FALSE(p.expansion_ok);
  EXPECT_NEAR(p.measured, 1.0 / 3.0, 1e-12);
  ASSERT_FALSE(p.witness.empty());
  EXPECT_EQ(CutOf(p4, p.witness), 1);
}

TEST(CertifyPiece, SpectralMode) {
  UGraph g = GenRandomRegular(60, 8, 3);
  CertReport r = CertifyPiece(g, 0.1, 0.025);
  EXPECT_EQ(r.method, "spectral");
  EXPECT_TRUE(r.passed);
  EXPECT_GE(r.measured, 0.1);
}

void CheckPartition(const UGraph& g, const Decomposition& d) {
  std::vector<int> seen(g.edges.size(), 0);
  for (const Piece& p : d.pieces) {
    for (int e : p.edges) ++seen[e];
    SubgraphMap sub = Subgraph(g, p.edges);
    CertReport c = CertifyPiece(sub.graph, d.phi, d.gamma);
    EXPECT_TRUE(c.passed) << "piece of " << p.edges.size() << " edges, " << c.method;
    EXPECT_TRUE(p.certified);
  }
  for (size_t e = 0; e < seen.size(); ++e) ASSERT_EQ(seen[e], 1) << "edge " << e;
}

TEST(Decompose, RegularExpanderIsOnePiece) {
  UGraph g = Complete(12);
  Decomposition d = Decompose(g);
  ASSERT_EQ(d.pieces.size(), 1u);
  EXPECT_EQ(d.MaxMembership(), 1);
  CheckPartition(g, d);
}

TEST(Decompose, CliquesAreSeparated) {
  UGraph g = Dumbbell(8);
  Decomposition d = Decompose(g);
  EXPECT_GE(d.pieces.size(), 2u);
  CheckPartition(g, d);
  for (const Piece& p : d.pieces) {
    bool left = false, right = false;
    for (int v : p.vertices) (v < 8 ? left : right) = true;
    if (p.edges.size() > 2) EXPECT_FALSE(left && right);
  }
}

TEST(Decompose, RandomGraphPiecesCertify) {
  std::mt19937_64 rng(300);
  UGraph g;
  g.n = 300;
  std::uniform_int_distribution<int> vert(0, 299);
  while (g.edges.size() < 3000) {
    int u = vert(rng), v = vert(rng);
    if (u != v) g.edges.push_back({u, v});
  }
  Decomposition d = Decompose(g);
  CheckPartition(g, d);
  EXPECT_GE(d.MaxMembership(), 1);
  // Deterministic given the seed.
  EXPECT_EQ(Decompose(g).ToJson(), d.ToJson());
}

TEST(Decompose, DefaultParameters) {
  EXPECT_DOUBLE_EQ(DefaultPhi(1024), 0.1);
  EXPECT_DOUBLE_EQ(DefaultPhi(1000), 0.1);
  EXPECT_DOUBLE_EQ(DefaultGamma(0.2), 0.05);
}

}  // namespace
}  // namespace dynbal
