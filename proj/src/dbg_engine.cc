#include "dynbal/dbg_engine.h"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "dynbal/errors.h"

namespace dynbal {

namespace {

int Log2Exact(int m) {
  int d = 0;
  while ((1 << d) < m) ++d;
  return d;
}

int SignOf(double y) { return y > 0 ? 1 : -1; }

}  // namespace

DbgTree::DbgTree(int dim, int num_leaves)
    : dim_(dim), num_leaves_(num_leaves), num_slots_(2 * dim * num_leaves) {
  if (dim <= 0) throw InvalidArgument("dimension must be positive");
  if (num_leaves <= 0 || (num_leaves & (num_leaves - 1)) != 0) {
    throw InvalidArgument("leaf count must be a power of two");
  }
  depth_ = Log2Exact(num_leaves);
  vectors_.assign(static_cast<size_t>(num_slots_) * dim_, 0.0);
  nodes_.resize(2 * num_leaves_);
  for (int b = 0; b < num_leaves_; ++b) {
    Node& leaf = nodes_[num_leaves_ + b];
    leaf.lo = b * block();
    leaf.hi = (b + 1) * block();
  }
  for (int id = num_leaves_ - 1; id >= 1; --id) {
    nodes_[id].lo = nodes_[2 * id].lo;
    nodes_[id].hi = nodes_[2 * id + 1].hi;
  }
  root_.assign(num_slots_, 1.0);
}

void DbgTree::SetVector(int slot, const std::vector<double>& v) {
  if (slot < 0 || slot >= num_slots_) {
    throw IndexOutOfPhase("slot " + std::to_string(slot) + " not in [0," +
                          std::to_string(num_slots_) + ")");
  }
  if (static_cast<int>(v.size()) != dim_) {
    throw DimensionMismatch("vector of length " + std::to_string(v.size()));
  }
  std::copy(v.begin(), v.end(), vectors_.begin() + static_cast<size_t>(slot) * dim_);
}

double DbgTree::LookupDomain(const Node& nd, int slot) const {
  auto it = std::lower_bound(nd.domain.begin(), nd.domain.end(), slot);
  return nd.values[it - nd.domain.begin()];
}

void DbgTree::ComputeNode(int id) {
  Node& nd = nodes_[id];
  std::vector<double> x;
  if (is_leaf(id)) {
    nd.domain.resize(block());
    for (int i = 0; i < block(); ++i) nd.domain[i] = nd.lo + i;
    x.assign(block(), 0.0);
  } else {
    const Node& l = nodes_[2 * id];
    const Node& r = nodes_[2 * id + 1];
    nd.domain.clear();
    nd.domain.insert(nd.domain.end(), l.frac.begin(), l.frac.end());
    nd.domain.insert(nd.domain.end(), r.frac.begin(), r.frac.end());
    x.reserve(nd.domain.size());
    for (int s : l.frac) x.push_back(LookupDomain(l, s));
    for (int s : r.frac) x.push_back(LookupDomain(r, s));
  }
  nd.frac.clear();
  if (nd.domain.empty()) {
    nd.values.clear();
    return;
  }
  Eigen::MatrixXd a(dim_, static_cast<Eigen::Index>(nd.domain.size()));
  for (size_t j = 0; j < nd.domain.size(); ++j) {
    const double* col = vector(nd.domain[j]);
    for (int i = 0; i < dim_; ++i) a(i, static_cast<Eigen::Index>(j)) = col[i];
  }
  FractionalSigning y = MoveToBasic(DenseMatrix(std::move(a)), x);
  nd.values = std::move(y.values);
  for (int j : y.fractional) nd.frac.push_back(nd.domain[j]);
}

double DbgTree::RootValue(int slot) const { return NodeValue(1, slot); }

double DbgTree::NodeValue(int id, int slot) const {
  while (true) {
    const Node& nd = nodes_[id];
    auto it = std::lower_bound(nd.domain.begin(), nd.domain.end(), slot);
    if (it != nd.domain.end() && *it == slot) return nd.values[it - nd.domain.begin()];
    if (is_leaf(id)) return 1.0;
    id = slot < nodes_[2 * id].hi ? 2 * id : 2 * id + 1;
  }
}

void DbgTree::Build() {
  for (int id = 2 * num_leaves_ - 1; id >= 1; --id) ComputeNode(id);
  for (int s = 0; s < num_slots_; ++s) root_[s] = RootValue(s);
}

std::vector<int> DbgTree::Update(int slot, const std::vector<double>& v) {
  SetVector(slot, v);
  const int leaf = num_leaves_ + slot / block();
  std::vector<int> affected;
  for (int s = nodes_[leaf].lo; s < nodes_[leaf].hi; ++s) affected.push_back(s);
  for (int id = leaf / 2; id >= 1; id /= 2) {
    affected.insert(affected.end(), nodes_[id].domain.begin(), nodes_[id].domain.end());
  }
  for (int id = leaf; id >= 1; id /= 2) {
    ComputeNode(id);
    if (id != leaf) {
      affected.insert(affected.end(), nodes_[id].domain.begin(), nodes_[id].domain.end());
    }
  }
  std::sort(affected.begin(), affected.end());
  affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
  std::vector<int> changed;
  for (int s : affected) {
    double y = RootValue(s);
    if (std::abs(y - root_[s]) > kEpsInt) changed.push_back(s);
    root_[s] = y;
  }
  return changed;
}

DbgInvariantReport CheckDbgInvariants(const DbgTree& tree) {
  DbgInvariantReport rep;
  const int n = tree.dim();
  const int total = tree.num_nodes() + 1;
  std::vector<std::vector<double>> view(total);
  for (int id = total - 1; id >= 1; --id) {
    const DbgTree::Node& nd = tree.node(id);
    std::vector<double>& y = view[id];
    if (tree.is_leaf(id)) {
      y.assign(nd.hi - nd.lo, 1.0);
    } else {
      y = view[2 * id];
      y.insert(y.end(), view[2 * id + 1].begin(), view[2 * id + 1].end());
      view[2 * id].clear();
      view[2 * id].shrink_to_fit();
    }
    for (size_t j = 0; j < nd.domain.size(); ++j) y[nd.domain[j] - nd.lo] = nd.values[j];

    int frac = 0;
    std::vector<double> sum(n, 0.0);
    for (int s = nd.lo; s < nd.hi; ++s) {
      double yi = y[s - nd.lo];
      if (yi < -1.0 - kEpsClip || yi > 1.0 + kEpsClip) {
        rep.ok = false;
        rep.failing_node = id;
        rep.message = "value out of [-1,1] at slot " + std::to_string(s);
      }
      if (!IsIntegral(yi)) ++frac;
      const double* a = tree.vector(s);
      for (int i = 0; i < n; ++i) sum[i] += yi * a[i];
    }
    double res = 0.0;
    for (double v : sum) res = std::max(res, std::abs(v));
    double ratio = res / ResidualTolerance(nd.hi - nd.lo);
    rep.worst_residual_ratio = std::max(rep.worst_residual_ratio, ratio);
    rep.max_fractional = std::max(rep.max_fractional, frac);
    if (rep.ok && ratio > 1.0) {
      rep.ok = false;
      rep.failing_node = id;
      rep.message = "residual " + std::to_string(res) + " at node " + std::to_string(id);
    }
    if (rep.ok && frac > n) {
      rep.ok = false;
      rep.failing_node = id;
      rep.message = std::to_string(frac) + " fractional coordinates at node " +
                    std::to_string(id);
    }
  }
  return rep;
}

DynamicBalancer::DynamicBalancer(int dim, uint64_t seed, int initial_level)
    : dim_(dim),
      level_(initial_level),
      rng_(seed),
      tree_(dim, LeavesForLevel(initial_level)) {
  tree_.Build();
  id_of_slot_.assign(tree_.num_slots(), -1);
  sign_.assign(tree_.num_slots(), 1);
  for (int s = 0; s < tree_.num_slots(); ++s) free_slots_.insert(s);
}

int DynamicBalancer::LeavesForLevel(int level) const {
  if (dim_ <= 0) throw InvalidArgument("dimension must be positive");
  int64_t cap = int64_t{1} << (level + 1);
  int64_t m = (cap + 2 * dim_ - 1) / (2 * dim_);
  int64_t p = 1;
  while (p < m) p <<= 1;
  return static_cast<int>(p);
}

std::map<int64_t, int> DynamicBalancer::LiveSigns() const {
  std::map<int64_t, int> out;
  for (const auto& [id, slot] : slot_of_) out[id] = sign_[slot];
  return out;
}

void DynamicBalancer::Resign(const std::vector<int>& slots,
                             const std::vector<double>& old_values,
                             const std::vector<bool>& old_frac) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s : slots) {
    double y = tree_.root_values()[s];
    if (IsIntegral(y)) {
      sign_[s] = SignOf(y);
    } else if (old_frac[s] && std::abs(y - old_values[s]) <= kEpsInt) {
      continue;
    } else {
      sign_[s] = unif(rng_) < (1.0 + y) / 2.0 ? 1 : -1;
    }
  }
}

namespace {

int CountChanges(const std::map<int64_t, int>& before, const std::map<int64_t, int>& after) {
  int c = 0;
  for (const auto& [id, s] : before) {
    auto it = after.find(id);
    if (it != after.end() && it->second != s) ++c;
  }
  return c;
}

std::vector<bool> FractionalMask(const DbgTree& t) {
  std::vector<bool> m(t.num_slots(), false);
  for (int s : t.root_fractional()) m[s] = true;
  return m;
}

}  // namespace

DbgEventStats DynamicBalancer::Insert(int64_t id, const std::vector<double>& v) {
  if (slot_of_.count(id)) throw DuplicateId("vector id " + std::to_string(id));
  if (static_cast<int>(v.size()) != dim_) {
    throw DimensionMismatch("vector of length " + std::to_string(v.size()));
  }
  if (free_slots_.empty()) throw IndexOutOfPhase("no free slot");
  std::map<int64_t, int> before = LiveSigns();
  std::vector<double> old_values = tree_.root_values();
  std::vector<bool> old_frac = FractionalMask(tree_);

  int slot = *free_slots_.begin();
  DbgEventStats st;
  std::vector<int> changed = tree_.Update(slot, v);
  st.changed_coords = static_cast<int>(changed.size());
  st.depth = tree_.depth();
  st.num_leaves = tree_.num_leaves();
  free_slots_.erase(free_slots_.begin());
  slot_of_[id] = slot;
  id_of_slot_[slot] = id;

  std::vector<bool> new_frac = FractionalMask(tree_);
  for (int s = 0; s < tree_.num_slots(); ++s) {
    if (old_frac[s] != new_frac[s]) changed.push_back(s);
  }
  changed.push_back(slot);
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
  old_frac[slot] = false;
  Resign(changed, old_values, old_frac);

  if (live() >= (int64_t{1} << (level_ + 1))) {
    Rebuild(static_cast<int>(std::floor(std::log2(static_cast<double>(live())))));
    st.rebuilt = true;
  }
  st.recourse = CountChanges(before, LiveSigns());
  cum_recourse_ += st.recourse;
  return st;
}

DbgEventStats DynamicBalancer::Delete(int64_t id) {
  auto it = slot_of_.find(id);
  if (it == slot_of_.end()) throw UnknownId("vector id " + std::to_string(id));
  std::map<int64_t, int> before = LiveSigns();
  std::vector<double> old_values = tree_.root_values();
  std::vector<bool> old_frac = FractionalMask(tree_);

  int slot = it->second;
  DbgEventStats st;
  std::vector<int> changed = tree_.Update(slot, std::vector<double>(dim_, 0.0));
  st.changed_coords = static_cast<int>(changed.size());
  st.depth = tree_.depth();
  st.num_leaves = tree_.num_leaves();
  slot_of_.erase(it);
  id_of_slot_[slot] = -1;
  free_slots_.insert(slot);

  std::vector<bool> new_frac = FractionalMask(tree_);
  for (int s = 0; s < tree_.num_slots(); ++s) {
    if (old_frac[s] != new_frac[s]) changed.push_back(s);
  }
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
  Resign(changed, old_values, old_frac);

  if (2 * static_cast<int64_t>(live()) <= (int64_t{1} << level_)) {
    int nl = live() == 0 ? 0 : static_cast<int>(std::floor(std::log2(static_cast<double>(live()))));
    Rebuild(nl);
    st.rebuilt = true;
  }
  st.recourse = CountChanges(before, LiveSigns());
  cum_recourse_ += st.recourse;
  return st;
}

void DynamicBalancer::Rebuild(int new_level) {
  struct Old {
    int64_t id;
    std::vector<double> v;
    double y;
    bool frac;
    int sign;
  };
  std::vector<bool> old_frac = FractionalMask(tree_);
  std::vector<Old> olds;
  for (const auto& [id, slot] : slot_of_) {
    const double* a = tree_.vector(slot);
    olds.push_back({id, std::vector<double>(a, a + dim_), tree_.root_values()[slot],
                    static_cast<bool>(old_frac[slot]), sign_[slot]});
  }
  level_ = new_level;
  tree_ = DbgTree(dim_, LeavesForLevel(new_level));
  for (size_t k = 0; k < olds.size(); ++k) tree_.SetVector(static_cast<int>(k), olds[k].v);
  tree_.Build();

  slot_of_.clear();
  free_slots_.clear();
  id_of_slot_.assign(tree_.num_slots(), -1);
  sign_.assign(tree_.num_slots(), 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < tree_.num_slots(); ++s) {
    double y = tree_.root_values()[s];
    if (s < static_cast<int>(olds.size())) {
      const Old& o = olds[s];
      slot_of_[o.id] = s;
      id_of_slot_[s] = o.id;
      if (IsIntegral(y)) {
        sign_[s] = SignOf(y);
      } else if (o.frac && std::abs(y - o.y) <= kEpsInt) {
        sign_[s] = o.sign;
      } else {
        sign_[s] = unif(rng_) < (1.0 + y) / 2.0 ? 1 : -1;
      }
    } else {
      free_slots_.insert(s);
      sign_[s] = SignOf(y);
    }
  }
  ++rebuilds_;
}

int DynamicBalancer::Sign(int64_t id) const {
  auto it = slot_of_.find(id);
  if (it == slot_of_.end()) throw UnknownId("vector id " + std::to_string(id));
  return sign_[it->second];
}

std::map<int64_t, int> DynamicBalancer::Signs() const { return LiveSigns(); }

std::vector<double> DynamicBalancer::SignedSum() const {
  std::vector<double> s(dim_, 0.0);
  for (const auto& [id, slot] : slot_of_) {
    const double* a = tree_.vector(slot);
    for (int i = 0; i < dim_; ++i) s[i] += sign_[slot] * a[i];
  }
  return s;
}

double DynamicBalancer::Discrepancy() const {
  double d = 0.0;
  for (double v : SignedSum()) d = std::max(d, std::abs(v));
  return d;
}

int DynamicBalancer::ChangedCoordBound() const {
  return 2 * dim_ * (tree_.depth() + 1) + dim_;
}

std::string DynamicBalancer::SnapshotJson() const {
  nlohmann::json j;
  j["phase_level"] = level_;
  j["phase_size"] = tree_.num_slots();
  std::vector<int64_t> ids;
  std::vector<int> signs;
  for (const auto& [id, slot] : slot_of_) {
    ids.push_back(id);
    signs.push_back(sign_[slot]);
  }
  std::vector<int64_t> frac_ids;
  for (int s : tree_.root_fractional()) {
    if (id_of_slot_[s] >= 0) frac_ids.push_back(id_of_slot_[s]);
  }
  std::sort(frac_ids.begin(), frac_ids.end());
  j["live_ids"] = ids;
  j["signs"] = signs;
  j["fractional_root_ids"] = frac_ids;
  return j.dump();
}

}  // namespace dynbal
