#include "dynbal/dbg_engine.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>
#include <json.hpp>

#include "dynbal/errors.h"
#include "dynbal/instances.h"
#include "test_util.h"

namespace dynbal {
namespace {

std::vector<double> RandomVector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// Sum over the node's slot range of NodeValue * vector, coordinate-wise.
std::vector<double> NodeSum(const DbgTree& t, int id) {
  const auto& nd = t.node(id);
  std::vector<double> s(t.dim(), 0.0);
  for (int i = nd.lo; i < nd.hi; ++i) {
    double y = t.NodeValue(id, i);
    for (int c = 0; c < t.dim(); ++c) s[c] += y * t.vector(i)[c];
  }
  return s;
}

TEST(DbgTree, AllZeroSlots) {
  DbgTree t(3, 4);
  t.Build();
  EXPECT_TRUE(t.root_fractional().empty());
  for (double y : t.root_values()) EXPECT_TRUE(IsIntegral(y));
  for (double s : NodeSum(t, 1)) EXPECT_EQ(s, 0.0);
}

TEST(DbgTree, OneFullLeafBlock) {
  const int n = 4;
  DbgTree t(n, 4);
  std::mt19937_64 rng(5);
  for (int s = 0; s < 2 * n; ++s) t.SetVector(s, RandomVector(n, rng));
  t.Build();
  EXPECT_LE(static_cast<int>(t.root_fractional().size()), n);
  // Direct summation over the root signing.
  for (int c = 0; c < n; ++c) {
    double s = 0.0;
    for (int i = 0; i < t.num_slots(); ++i) s += t.root_values()[i] * t.vector(i)[c];
    EXPECT_LE(std::abs(s), ResidualTolerance(t.num_slots()));
  }
  EXPECT_TRUE(CheckDbgInvariants(t).ok);
}

TEST(DbgTree, ExactKernelSmallTree) {
  // n = 2, T = 8 integer +-1 vectors; every node view must cancel exactly.
  DbgTree t(2, 2);
  const std::vector<std::vector<double>> vs{{1, 1},  {1, 1}, {1, -1}, {1, -1},
                                            {-1, 1}, {1, 1}, {-1, 1}, {1, 1}};
  for (int s = 0; s < 8; ++s) t.SetVector(s, vs[s]);
  t.Build();
  for (int id = 1; id <= t.num_nodes(); ++id) {
    const auto& nd = t.node(id);
    std::vector<std::vector<double>> cols;
    std::vector<double> y;
    for (int i = nd.lo; i < nd.hi; ++i) {
      cols.push_back(vs[i]);
      y.push_back(t.NodeValue(id, i));
    }
    for (const mpq_class& q : dynbal_test::ExactCombination(cols, y)) {
      EXPECT_EQ(q, 0) << "node " << id;
    }
    EXPECT_LE(static_cast<int>(nd.frac.size()), 2);
  }
}

TEST(DbgTree, ZeroToZeroUpdateIsNoop) {
  DbgTree t(2, 4);
  std::mt19937_64 rng(1);
  for (int s = 0; s < 6; ++s) t.SetVector(s, RandomVector(2, rng));
  t.Build();
  std::vector<double> before = t.root_values();
  std::vector<int> changed = t.Update(10, {0.0, 0.0});
  for (int s : changed) EXPECT_LE(std::abs(t.root_values()[s] - before[s]), kEpsInt);
  EXPECT_TRUE(changed.empty());
}

TEST(DbgTree, SingleUpdateTouchesOnlyItsPath) {
  const int n = 4;
  DbgTree t(n, 8);  // 64 slots
  std::mt19937_64 rng(9);
  for (int s = 0; s < 64; ++s) t.SetVector(s, RandomVector(n, rng));
  t.Build();
  std::vector<DbgTree::Node> nodes_before;
  for (int id = 1; id <= t.num_nodes(); ++id) nodes_before.push_back(t.node(id));
  std::vector<double> before = t.root_values();
  const int slot = 37;
  std::vector<int> changed = t.Update(slot, RandomVector(n, rng));

  std::set<int> diff;
  for (int s = 0; s < 64; ++s) {
    if (std::abs(t.root_values()[s] - before[s]) > kEpsInt) diff.insert(s);
  }
  EXPECT_EQ(std::set<int>(changed.begin(), changed.end()), diff);
  EXPECT_LE(static_cast<int>(diff.size()), 2 * 4 * (3 + 1));

  std::set<int> path;
  for (int id = 8 + slot / 8; id >= 1; id /= 2) path.insert(id);
  for (int id = 1; id <= t.num_nodes(); ++id) {
    if (path.count(id)) continue;
    EXPECT_EQ(t.node(id).values, nodes_before[id - 1].values) << "node " << id;
    EXPECT_EQ(t.node(id).domain, nodes_before[id - 1].domain) << "node " << id;
  }
  EXPECT_TRUE(CheckDbgInvariants(t).ok);
}

TEST(DbgTree, UpdateSequenceBound) {
  const int n = 3;
  DbgTree t(n, 16);
  std::mt19937_64 rng(77);
  t.Build();
  const int updates = 500;
  int64_t total = 0;
  std::uniform_int_distribution<int> slot(0, t.num_slots() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int k = 0; k < updates; ++k) {
    std::vector<double> v = coin(rng) < 0.2 ? std::vector<double>(n, 0.0) : RandomVector(n, rng);
    int c = static_cast<int>(t.Update(slot(rng), v).size());
    ASSERT_LE(c, 2 * n * (t.depth() + 1));
    total += c;
    if (k % 25 == 0) ASSERT_TRUE(CheckDbgInvariants(t).ok) << CheckDbgInvariants(t).message;
  }
  EXPECT_LE(total, int64_t{2} * n * (t.depth() + 1) * updates);
}

TEST(DynamicBalancer, InsertRecourseMatchesSignDiff) {
  const int n = 4;
  DynamicBalancer eng(n, 3);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) eng.Insert(i, RandomVector(n, rng));
  for (int i = 10; i < 40; ++i) {
    auto before = eng.Signs();
    int level = eng.level();
    DbgEventStats st = eng.Insert(i, RandomVector(n, rng));
    auto after = eng.Signs();
    int diff = 0;
    for (const auto& [id, s] : before) diff += after.at(id) != s ? 1 : 0;
    EXPECT_EQ(st.recourse, diff);
    if (!st.rebuilt) {
      EXPECT_EQ(eng.level(), level);
      EXPECT_LE(st.changed_coords, eng.ChangedCoordBound());
      EXPECT_LE(st.recourse, eng.ChangedCoordBound());
    }
  }
}

TEST(DynamicBalancer, DeletingLastVectorRebuilds) {
  DynamicBalancer eng(2, 1);
  eng.Insert(7, {0.5, -0.5});
  DbgEventStats st = eng.Delete(7);
  EXPECT_TRUE(st.rebuilt);
  EXPECT_EQ(eng.live(), 0);
  EXPECT_EQ(eng.level(), 0);
  EXPECT_EQ(eng.Discrepancy(), 0.0);
}

TEST(DynamicBalancer, IntegralRootIsDeterministic) {
  // Vectors in opposite pairs give an integral root; the signing is then fixed.
  DynamicBalancer a(2, 1), b(2, 999);
  for (int i = 0; i < 6; ++i) {
    std::vector<double> v{0.25 * (i % 3 + 1), -0.5};
    a.Insert(2 * i, v);
    b.Insert(2 * i, v);
    a.Insert(2 * i + 1, v);
    b.Insert(2 * i + 1, v);
  }
  if (a.tree().root_fractional().empty()) {
    EXPECT_EQ(a.Signs(), b.Signs());
    std::vector<double> s(2, 0.0);
    for (const auto& [id, sign] : a.Signs()) {
      std::vector<double> v{0.25 * ((id / 2) % 3 + 1), -0.5};
      s[0] += sign * v[0];
      s[1] += sign * v[1];
    }
    EXPECT_DOUBLE_EQ(a.Discrepancy(), std::max(std::abs(s[0]), std::abs(s[1])));
  }
}

TEST(DynamicBalancer, UnbiasedRoundingAtZero) {
  const int seeds = 10000;
  int64_t sum = 0;
  for (int s = 0; s < seeds; ++s) {
    DynamicBalancer eng(1, static_cast<uint64_t>(s));
    eng.Insert(0, {0.5});
    ASSERT_EQ(eng.tree().root_values()[0], 0.0);
    sum += eng.Sign(0);
  }
  EXPECT_LE(std::abs(static_cast<double>(sum) / seeds), 0.05);
}

TEST(DynamicBalancer, MixedStreamInvariantsAndRebuilds) {
  for (int n : {2, 4}) {
    VectorStreamSpec spec;
    spec.dim = n;
    spec.t = 400;
    spec.seed = 11 + n;
    spec.insert_prob = 0.6;
    auto events = GenVectorStream(spec);
    DynamicBalancer eng(n, 5);
    std::map<int64_t, std::vector<double>> live;
    for (const auto& e : events) {
      int64_t rebuilds = eng.rebuilds();
      DbgEventStats st = e.insert ? eng.Insert(e.id, e.v) : eng.Delete(e.id);
      if (e.insert) {
        live[e.id] = e.v;
      } else {
        live.erase(e.id);
      }
      DbgInvariantReport rep = CheckDbgInvariants(eng.tree());
      ASSERT_TRUE(rep.ok) << rep.message;
      ASSERT_LE(rep.max_fractional, n);
      if (!st.rebuilt) ASSERT_LE(st.changed_coords, eng.ChangedCoordBound());
      if (eng.rebuilds() > rebuilds) {
        // The live multiset survives the rebuild.
        std::multiset<std::vector<double>> want, got;
        for (const auto& [id, v] : live) want.insert(v);
        for (int s = 0; s < eng.tree().num_slots(); ++s) {
          const double* a = eng.tree().vector(s);
          std::vector<double> v(a, a + n);
          bool zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
          if (!zero) got.insert(v);
        }
        ASSERT_EQ(want, got);
      }
    }
    EXPECT_GT(eng.rebuilds(), 0);
    EXPECT_EQ(eng.live(), static_cast<int>(live.size()));
  }
}

TEST(DynamicBalancer, SnapshotJson) {
  DynamicBalancer eng(2, 1);
  eng.Insert(4, {0.1, 0.2});
  eng.Insert(9, {-0.3, 0.7});
  auto j = nlohmann::json::parse(eng.SnapshotJson());
  EXPECT_EQ(j["live_ids"], nlohmann::json::array({4, 9}));
  EXPECT_EQ(j["signs"].size(), 2u);
  EXPECT_EQ(j["phase_level"], 3);
}

TEST(DynamicBalancer, Errors) {
  DynamicBalancer eng(2, 1);
  eng.Insert(1, {0.0, 0.5});
  EXPECT_THROW(eng.Insert(1, {0.0, 0.5}), DuplicateId);
  EXPECT_THROW(eng.Insert(2, {0.5}), DimensionMismatch);
  EXPECT_THROW(eng.Delete(3), UnknownId);
  DbgTree t(2, 2);
  EXPECT_THROW(t.SetVector(8, {0.0, 0.0}), IndexOutOfPhase);
  EXPECT_THROW(DbgTree(2, 3), InvalidArgument);
}

}  // namespace
}  // namespace dynbal
