#ifndef DYNBAL_DBG_ENGINE_H_
#define DYNBAL_DBG_ENGINE_H_

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dynbal/rounding_kernel.h"

namespace dynbal {

// Balanced binary tree over num_leaves blocks of 2*dim slots. Node ids are heap
// indices: root 1, leaves num_leaves .. 2*num_leaves-1.
class DbgTree {
 public:
  struct Node {
    int lo = 0, hi = 0;          // slot range [lo, hi)
    std::vector<int> domain;     // slots whose value this node fixes, ascending
    std::vector<double> values;  // parallel to domain
    std::vector<int> frac;       // fractional subset of domain
  };

  DbgTree(int dim, int num_leaves);

  int dim() const { return dim_; }
  int num_leaves() const { return num_leaves_; }
  int num_slots() const { return num_slots_; }
  int block() const { return 2 * dim_; }
  int depth() const { return depth_; }

  void SetVector(int slot, const std::vector<double>& v);
  const double* vector(int slot) const { return &vectors_[static_cast<size_t>(slot) * dim_]; }

  void Build();
  // Replaces one slot's vector and repairs its root path. Returns the slots whose
  // root value moved by more than kEpsInt.
  std::vector<int> Update(int slot, const std::vector<double>& v);

  const std::vector<double>& root_values() const { return root_; }
  const std::vector<int>& root_fractional() const { return nodes_[1].frac; }

  const Node& node(int id) const { return nodes_[id]; }
  int num_nodes() const { return 2 * num_leaves_ - 1; }
  bool is_leaf(int id) const { return id >= num_leaves_; }

  // Value of slot i as seen by node id (i must lie in its range).
  double NodeValue(int id, int slot) const;

 private:
  void ComputeNode(int id);
  double LookupDomain(const Node& nd, int slot) const;
  double RootValue(int slot) const;

  int dim_;
  int num_leaves_;
  int num_slots_;
  int depth_;
  std::vector<double> vectors_;
  std::vector<Node> nodes_;
  std::vector<double> root_;
};

struct DbgInvariantReport {
  bool ok = true;
  double worst_residual_ratio = 0.0;  // residual / tolerance, maximized over nodes
  int max_fractional = 0;
  int failing_node = -1;
  std::string message;
};

// Recomputes every node's view from the stored overlays and checks
// sum_{i in P_v} y^v_i a_i = 0 and |F_v| <= n.
DbgInvariantReport CheckDbgInvariants(const DbgTree& tree);

struct DbgEventStats {
  int changed_coords = 0;  // root-value changes of the path repair
  int recourse = 0;        // integral sign changes among vectors live before and after
  bool rebuilt = false;
  int depth = 0;
  int num_leaves = 0;
};

class DynamicBalancer {
 public:
  DynamicBalancer(int dim, uint64_t seed, int initial_level = 3);

  DbgEventStats Insert(int64_t id, const std::vector<double>& v);
  DbgEventStats Delete(int64_t id);

  int dim() const { return dim_; }
  int live() const { return static_cast<int>(slot_of_.size()); }
  int level() const { return level_; }
  const DbgTree& tree() const { return tree_; }
  int64_t rebuilds() const { return rebuilds_; }
  int64_t cumulative_recourse() const { return cum_recourse_; }

  int Sign(int64_t id) const;
  std::map<int64_t, int> Signs() const;
  std::vector<double> SignedSum() const;
  double Discrepancy() const;
  // Bound 2n(log2 m + 1) + n on per-event changed coordinates.
  int ChangedCoordBound() const;

  std::string SnapshotJson() const;

 private:
  int LeavesForLevel(int level) const;
  void Rebuild(int new_level);
  void Resign(const std::vector<int>& slots, const std::vector<double>& old_values,
              const std::vector<bool>& old_frac);
  std::map<int64_t, int> LiveSigns() const;

  int dim_;
  int level_;
  std::mt19937_64 rng_;
  DbgTree tree_;
  std::map<int64_t, int> slot_of_;
  std::vector<int64_t> id_of_slot_;  // -1 when free
  std::set<int> free_slots_;
  std::vector<int> sign_;            // per slot
  int64_t rebuilds_ = 0;
  int64_t cum_recourse_ = 0;
};

}  // namespace dynbal

#endif  // DYNBAL_DBG_ENGINE_H_
