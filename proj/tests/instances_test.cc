#include "dynbal/instances.h"

#include <cmath>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dynbal/errors.h"
#include "dynbal/local_search.h"
#include "test_util.h"

namespace dynbal {
namespace {

TEST(Gen2dLocalOpt, FourVectors) {
  VectorInstance inst = Gen2dLocalOpt(4);
  ASSERT_EQ(inst.vectors.size(), 4u);
  std::vector<double> s = inst.SignedSum();
  EXPECT_NEAR(s[0], 0.0, 1e-12);
  EXPECT_NEAR(s[1], 2.0, 1e-12);
  for (size_t i = 0; i < 4; ++i) {
    const auto& a = inst.vectors[i];
    double eps = inst.signs[i];
    double after = std::pow(s[0] - 2 * eps * a[0], 2) + std::pow(s[1] - 2 * eps * a[1], 2);
    double before = s[0] * s[0] + s[1] * s[1];
    EXPECT_NEAR(after - before, 1.0, 1e-12);
  }
  EXPECT_TRUE(VerifyVectorLocalOpt(inst, false).ok);
}

TEST(Gen2dLocalOpt, DiscrepancyIsRootT) {
  for (int t : {2, 8, 64, 1024, 4096}) {
    VectorInstance inst = Gen2dLocalOpt(t);
    std::vector<double> s = inst.SignedSum();
    EXPECT_NEAR(std::max(std::abs(s[0]), std::abs(s[1])), std::sqrt(t), 1e-9 * t);
    EXPECT_TRUE(VerifyVectorLocalOpt(inst, false).ok) << t;
  }
  EXPECT_THROW(Gen2dLocalOpt(3), InvalidArgument);
}

TEST(Pm1LocalOpt, StructureForEight) {
  Pm1Structure st = Pm1LocalOptStructure(8);
  EXPECT_EQ(st.binv_one, (std::vector<int64_t>{1, 2, 4, 8}));
  EXPECT_EQ(st.s, (std::vector<int64_t>{4, 8, 16, 32}));
  EXPECT_EQ(st.r, (std::vector<int64_t>{86, 44, 24, 16}));
  for (int64_t r : st.r) EXPECT_EQ(r % 2, 0);
  EXPECT_EQ(Pm1RowCount(8), 340);
  EXPECT_LE(Pm1RowCount(8), int64_t{1} << 32);
  EXPECT_THROW(Pm1LocalOptStructure(12), NotMultipleOf8);
}

TEST(Pm1LocalOpt, EveryRowHasInnerProductN) {
  for (int n : {8, 16}) {
    IntVectorInstance inst = GenPm1LocalOpt(n);
    EXPECT_EQ(static_cast<int64_t>(inst.vectors.size()), Pm1RowCount(n));
    std::vector<int64_t> s(n, 0);
    for (size_t i = 0; i < inst.vectors.size(); ++i) {
      for (int c = 0; c < n; ++c) s[c] += inst.signs[i] * inst.vectors[i][c];
    }
    EXPECT_EQ(s, inst.SignedSum());
    int64_t worst = 0;
    for (size_t i = 0; i < inst.vectors.size(); ++i) {
      int64_t dot = 0;
      for (int c = 0; c < n; ++c) {
        ASSERT_EQ(std::abs(inst.vectors[i][c]), 1);
        dot += s[c] * inst.signs[i] * inst.vectors[i][c];
      }
      ASSERT_EQ(dot, n);
    }
    for (int64_t x : s) worst = std::max(worst, std::abs(x));
    EXPECT_EQ(worst, (n / 2) * (int64_t{1} << (n / 2 - 1)));
    EXPECT_TRUE(VerifyVectorLocalOptExact(inst).ok);
    EXPECT_TRUE(VerifyVectorLocalOpt(inst.ToDouble(), true).ok);
  }
}

TEST(Pm1LocalOpt, FlippedSignFails) {
  IntVectorInstance inst = GenPm1LocalOpt(8);
  inst.signs[0] = -inst.signs[0];
  VectorLocalOptReport rep = VerifyVectorLocalOptExact(inst);
  ASSERT_FALSE(rep.ok);
  std::vector<int64_t> s = inst.SignedSum();
  int64_t dot = 0;
  for (int c = 0; c < 8; ++c) dot += s[c] * inst.signs[rep.violator] * inst.vectors[rep.violator][c];
  EXPECT_GT(dot, 8);
  EXPECT_FALSE(VerifyVectorLocalOpt(inst.ToDouble(), true).ok);
}

TEST(Pm1LocalOpt, PaddedRowsAreDistinct) {
  IntVectorInstance inst = GenPm1LocalOpt(8, 0);
  ASSERT_EQ(inst.dim, 8 + 9);
  EXPECT_EQ(inst.vectors.size(), 512u);
  std::set<std::vector<int64_t>> rows(inst.vectors.begin(), inst.vectors.end());
  EXPECT_EQ(rows.size(), inst.vectors.size());
  EXPECT_TRUE(VerifyVectorLocalOptExact(inst).ok);
  EXPECT_THROW(GenPm1LocalOpt(8, 5), InvalidArgument);
}

TEST(LayeredGraph, Shapes) {
  LayeredGraph a = GenLayeredGraph(4, 1);
  EXPECT_EQ(a.layer_sizes, (std::vector<int>{1, 4, 3, 4, 1}));
  EXPECT_EQ(a.graph.num_vertices(), 13);
  std::vector<int64_t> per_layer(a.layer_sizes.size(), 0);
  for (int v = 0; v < 13; ++v) per_layer[a.layer_of[v]] = a.graph.imbalance(v);
  EXPECT_EQ(per_layer, (std::vector<int64_t>{4, 2, 0, -2, -4}));
  EXPECT_TRUE(VerifyLocalOpt(a.graph, 1).ok);
  for (int e : a.graph.LiveEdges()) {
    const auto& ed = a.graph.edge(e);
    EXPECT_EQ(a.graph.imbalance(ed.head()) - a.graph.imbalance(ed.tail()), 2);
  }
  for (auto [k, len] : std::vector<std::pair<int, int>>{{4, 3}, {6, 3}}) {
    LayeredGraph g = GenLayeredGraph(k, len);
    EXPECT_EQ(g.graph.imbalance(0), k);
    EXPECT_TRUE(VerifyLocalOpt(g.graph, len).ok);
    EXPECT_EQ(g.layer_sizes.front(), 1);
  }
}

TEST(OrthogonalAdversary, NeverResignBaselineReachesRootT) {
  std::mt19937_64 rng(5);
  std::vector<double> s{0.0, 0.0};
  for (int t = 1; t <= 2000; ++t) {
    std::vector<double> v = OrthogonalUnit(s);
    EXPECT_NEAR(std::hypot(v[0], v[1]), 1.0, 1e-12);
    EXPECT_NEAR(v[0] * s[0] + v[1] * s[1], 0.0, 1e-9);
    int sign = rng() & 1 ? 1 : -1;
    s[0] += sign * v[0];
    s[1] += sign * v[1];
    ASSERT_NEAR(std::hypot(s[0], s[1]), std::sqrt(t), 1e-9);
  }
  EXPECT_THROW(OrthogonalUnit({1.0}), DimensionMismatch);
}

TEST(RandomRegular, TriangleAndHistogram) {
  UGraph tri = GenRandomRegular(3, 2, 1);
  std::set<std::pair<int, int>> e;
  for (auto [u, v] : tri.edges) e.insert(std::minmax(u, v));
  EXPECT_EQ(e, (std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}));

  UGraph g = GenRandomRegular(200, 10, 7);
  std::map<int, int> hist;
  for (int d : g.Degrees()) ++hist[d];
  EXPECT_EQ(hist, (std::map<int, int>{{10, 200}}));
  std::set<std::pair<int, int>> simple;
  for (auto [u, v] : g.edges) {
    EXPECT_NE(u, v);
    simple.insert(std::minmax(u, v));
  }
  EXPECT_EQ(simple.size(), g.edges.size());
  EXPECT_THROW(GenRandomRegular(5, 3, 1), InfeasibleDegree);
  EXPECT_THROW(GenRandomRegular(4, 4, 1), InfeasibleDegree);
}

TEST(ForestStream, StaysAcyclic) {
  const int n = 50;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto events = GenForestStream(n, 800, seed);
    EXPECT_EQ(events.size(), 800u);
    std::multiset<std::pair<int, int>> live;
    for (const auto& ev : events) {
      auto key = std::minmax(ev.u, ev.v);
      if (ev.insert) {
        live.insert(key);
      } else {
        auto it = live.find(key);
        ASSERT_NE(it, live.end());
        live.erase(it);
      }
      dynbal_test::UnionFind uf(n);
      for (auto [u, v] : live) ASSERT_TRUE(uf.Union(u, v)) << "cycle at seed " << seed;
    }
  }
}

TEST(Generators, Deterministic) {
  VectorStreamSpec spec;
  spec.dim = 4;
  spec.t = 300;
  spec.seed = 12;
  spec.insert_prob = 0.7;
  for (VectorKind kind : {VectorKind::kUniformBox, VectorKind::kUnitL2, VectorKind::kSparsePm1}) {
    spec.kind = kind;
    spec.sparsity = 2;
    auto a = GenVectorStream(spec);
    auto b = GenVectorStream(spec);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].insert, b[i].insert);
      EXPECT_EQ(a[i].id, b[i].id);
      EXPECT_EQ(a[i].v, b[i].v);
    }
  }
  auto f1 = GenForestStream(30, 200, 3), f2 = GenForestStream(30, 200, 3);
  for (size_t i = 0; i < f1.size(); ++i) {
    EXPECT_EQ(f1[i].u, f2[i].u);
    EXPECT_EQ(f1[i].v, f2[i].v);
    EXPECT_EQ(f1[i].insert, f2[i].insert);
  }
  EXPECT_EQ(GenRandomRegular(40, 4, 2).edges, GenRandomRegular(40, 4, 2).edges);
}

TEST(VectorStream, KindsAreShaped) {
  VectorStreamSpec spec;
  spec.dim = 6;
  spec.t = 200;
  spec.kind = VectorKind::kUnitL2;
  for (const auto& e : GenVectorStream(spec)) {
    double sq = 0.0;
    for (double x : e.v) sq += x * x;
    EXPECT_NEAR(sq, 1.0, 1e-12);
  }
  spec.kind = VectorKind::kSparsePm1;
  spec.sparsity = 3;
  for (const auto& e : GenVectorStream(spec)) {
    int nz = 0;
    for (double x : e.v) {
      if (x != 0.0) {
        EXPECT_EQ(std::abs(x), 1.0);
        ++nz;
      }
    }
    EXPECT_EQ(nz, 3);
  }
}

TEST(VectorLocalSearch, FixpointsBoundedIndependentOfT) {
  std::mt19937_64 rng(44);
  for (int n : {2, 3, 4}) {
    std::map<int, double> worst;
    for (int t : {10, 20, 40}) {
      for (int trial = 0; trial < 40; ++trial) {
        VectorInstance inst;
        inst.dim = n;
        for (int i = 0; i < t; ++i) {
          std::vector<double> v(n);
          for (double& x : v) x = rng() & 1 ? 1.0 : -1.0;
          inst.vectors.push_back(v);
          inst.signs.push_back(rng() & 1 ? 1 : -1);
        }
        VectorLocalSearch(inst);
        ASSERT_TRUE(VerifyVectorLocalOpt(inst, true).ok);
        double d = 0.0;
        for (double x : inst.SignedSum()) d = std::max(d, std::abs(x));
        worst[t] = std::max(worst[t], d);
      }
    }
    // Cap that depends on n only.
    double cap = n * static_cast<double>(int64_t{1} << n);
    for (const auto& [t, d] : worst) EXPECT_LE(d, cap) << "n=" << n << " T=" << t;
    EXPECT_LE(worst[40], worst[10] + 2.0 * n) << "n=" << n;
  }
}

}  // namespace
}  // namespace dynbal
