#ifndef DYNBAL_PRUNER_H_
#define DYNBAL_PRUNER_H_

#include <cstdint>
#include <vector>

#include "dynbal/expander.h"

namespace dynbal {

struct PruneResult {
  std::vector<int> removed_vertices;  // this call's delta P, ascending
  std::vector<int> removed_edges;     // surviving edges incident to delta P, ascending
};

struct StrongExpansionReport {
  bool ok = true;
  bool exact = true;
  std::vector<int> witness;  // violating side
  int64_t cut = 0;
  int64_t vol0 = 0;
};

// Expander under edge deletions, pruned so that the remainder keeps expanding
// with respect to the snapshot volumes vol0.
class PrunedExpander {
 public:
  PrunedExpander(const UGraph& g0, double phi, bool enforce_budget = true);

  PruneResult Prune(int edge);

  StrongExpansionReport Check() const;

  // Puts a pruned vertex back into V_t without its edges (test fixture).
  void Readmit(int v);

  double phi() const { return phi_; }
  int64_t t() const { return t_; }
  int64_t budget() const { return budget_; }
  int num_vertices() const { return n_; }
  int64_t m0() const { return static_cast<int64_t>(edges_.size()); }
  int64_t vol0(int v) const { return vol0_[v]; }
  bool vertex_alive(int v) const { return alive_v_[v]; }
  bool edge_alive(int e) const { return alive_e_[e]; }
  int current_degree(int v) const { return deg_t_[v]; }
  const std::vector<int>& pruned() const { return pruned_; }
  int64_t pruned_volume() const { return pruned_vol0_; }
  std::vector<int> AliveVertices() const;
  std::vector<int> AliveEdges() const;
  const std::pair<int, int>& endpoints(int e) const { return edges_[e]; }

 private:
  // Violating side A with |E_t(A, V_t \ A)| < (phi/6) * vol0(A), or empty.
  std::vector<int> FindViolating(bool* exact) const;
  std::vector<int> ExactViolating() const;
  std::vector<int> HeuristicViolating() const;
  bool Violates(int64_t cut, int64_t vol_a, int64_t vol_b) const;
  void RemoveEdgeInternal(int e);

  int n_;
  double phi_;
  bool enforce_budget_;
  int64_t budget_;
  int64_t t_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<bool> alive_e_;
  std::vector<bool> alive_v_;
  std::vector<int64_t> vol0_;
  std::vector<int> deg_t_;
  std::vector<std::vector<int>> inc_;  // snapshot incidence
  std::vector<int> pruned_;
  int64_t pruned_vol0_ = 0;
};

int64_t PruneBudget(double phi, int64_t m);

}  // namespace dynbal

#endif  // DYNBAL_PRUNER_H_
