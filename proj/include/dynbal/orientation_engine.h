#ifndef DYNBAL_ORIENTATION_ENGINE_H_
#define DYNBAL_ORIENTATION_ENGINE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynbal/expander.h"
#include "dynbal/oriented_graph.h"
#include "dynbal/pruner.h"

namespace dynbal {

struct ReorientLedger {
  int64_t phi_prev = 0;           // before the deletion
  int64_t phi_after_delete = 0;   // deleted edge removed, pruned set still present
  int64_t phi_redistributed = 0;  // pruned set replaced by fake vertices
  std::vector<int64_t> fake_disc;
  int64_t d_prime = 0;
  bool fakes_balanced = true;     // every fake imbalance in {d', d'+1}
  int64_t nonflip_delta = 0;      // total Phi change from non-flip operations
  int64_t flips = 0;
  int64_t phi_final = 0;
};

// Deletes `deleted_edge` and the pruned vertices' edges from g, routes the
// boundary edges through fake vertices, and restores a local-search fixpoint.
// Edge ids of g removed because they touch the pruned set go to *removed.
ReorientLedger PruneAndReorient(OrientedGraph& g, int deleted_edge,
                                const std::vector<int>& pruned_vertices,
                                std::vector<int>* removed = nullptr);

struct OrientationConfig {
  int n = 0;            // vertex universe 0..n-1
  double phi = -1.0;    // <= 0 selects DefaultPhi(n)
  double gamma = -1.0;  // <= 0 selects phi / 4
  int exact_limit = 16;
  uint64_t seed = 1;
};

struct EngineInvariantReport {
  bool ok = true;
  std::string message;
  int max_membership = 0;
  int flagged_pieces = 0;
};

struct DirectionChange {
  int u, v;   // endpoints, u < v
  int tail;   // new tail
};

struct EngineEventResult {
  std::vector<DirectionChange> changed;  // net changes of edges live before and after
  int64_t flips = 0;                     // gross re-orientations, rebuilds included
};

// Level-structured orientation of a simple dynamic graph.
class OrientationEngine {
 public:
  explicit OrientationEngine(const OrientationConfig& config);
  ~OrientationEngine();

  EngineEventResult InsertEdge(int u, int v);
  EngineEventResult DeleteEdge(int u, int v);

  bool HasEdge(int u, int v) const;
  // Tail of the live edge {u, v}.
  int Tail(int u, int v) const;

  int n() const { return n_; }
  double phi() const { return phi_; }
  double gamma() const { return gamma_; }
  int64_t imbalance(int v) const { return imbalance_[v]; }
  int64_t MaxDiscrepancy() const;
  int64_t num_edges() const { return static_cast<int64_t>(key_to_id_.size()); }
  int64_t level_rebuilds() const { return level_rebuilds_; }
  int64_t pieces_live() const { return pieces_live_; }
  int64_t pruned_volume() const { return pruned_vol_cum_; }
  int64_t dissolves() const { return dissolves_; }
  int64_t moment() const { return tau_; }
  int num_levels() const { return static_cast<int>(levels_.size()); }
  int64_t level_size(int i) const { return static_cast<int64_t>(levels_[i].edges.size()); }
  int MembershipBound() const;

  EngineInvariantReport CheckInvariants() const;

  // Per-delete ledgers, when recording is on.
  void set_record_ledgers(bool on) { record_ledgers_ = on; }
  struct LedgerEntry {
    ReorientLedger ledger;
    int64_t m0 = 0;
    int64_t pruned_vol0 = 0;
  };
  const std::vector<LedgerEntry>& ledgers() const { return ledgers_; }

 private:
  struct EdgeRec {
    int u = 0, v = 0;  // u < v
    int tail = 0;
    bool alive = false;
    int level = -1;
    int piece = -1;
    int og_edge = -1;   // edge id inside the piece graph
    int pr_edge = -1;   // edge id inside the piece pruner
  };
  struct PieceState;
  struct Level {
    std::set<int> edges;
    std::set<int> snapshot;
    int64_t created_at = 0;
    std::vector<int> pieces;
  };

  static int64_t Key(int u, int v) { return static_cast<int64_t>(u) << 32 | static_cast<uint32_t>(v); }
  void CheckVertex(int v) const;
  void SetTail(int id, int tail);
  // Places a batch of edges with the lower levels merged into the smallest
  // level that holds them.
  void InternalInsert(const std::vector<int>& batch);
  void RebuildLevel(int level, const std::vector<int>& ids);
  void ReleaseEdgeFromPiece(int id);
  void KillPiece(int p);
  EngineEventResult Finish();

  int n_;
  double phi_, gamma_;
  DecomposeOptions decompose_opts_;
  std::vector<EdgeRec> edges_;
  std::unordered_map<int64_t, int> key_to_id_;
  std::vector<Level> levels_;
  std::vector<std::unique_ptr<PieceState>> pieces_;
  std::vector<int64_t> imbalance_;
  int64_t tau_ = 0;
  int64_t level_rebuilds_ = 0;
  int64_t pieces_live_ = 0;
  int64_t pruned_vol_cum_ = 0;
  int64_t dissolves_ = 0;
  int64_t event_flips_ = 0;
  std::map<int, int> touched_;  // edge id -> tail at event start
  bool record_ledgers_ = false;
  std::vector<LedgerEntry> ledgers_;
};

struct DedupEventResult {
  int64_t recourse = 0;  // copy orientations changed
  int64_t flips = 0;     // inner engine gross flips
};

// Multigraph front end: copies of a pair cancel in twos, odd multiplicity puts
// one representative edge into the inner engine.
class DedupOrientation {
 public:
  explicit DedupOrientation(const OrientationConfig& config);

  DedupEventResult Insert(int u, int v);
  DedupEventResult Delete(int u, int v);

  int64_t MaxDiscrepancy() const;
  int64_t imbalance(int v) const { return imbalance_[v]; }
  int64_t Multiplicity(int u, int v) const;
  // Copies oriented min(u,v) -> max(u,v).
  int64_t ForwardCopies(int u, int v) const;
  const OrientationEngine& inner() const { return inner_; }
  OrientationEngine& mutable_inner() { return inner_; }
  int64_t cumulative_recourse() const { return cum_recourse_; }

  EngineInvariantReport CheckInvariants(bool include_inner = true) const;

 private:
  struct Copies {
    int64_t plus = 0, minus = 0;  // plus: min -> max
  };
  void Orient(Copies& c, int a, int b, int64_t dplus, int64_t dminus);
  int64_t Apply(const EngineEventResult& r);

  int n_;
  OrientationEngine inner_;
  std::map<std::pair<int, int>, Copies> copies_;
  std::vector<int64_t> imbalance_;
  int64_t cum_recourse_ = 0;
};

}  // namespace dynbal

#endif  // DYNBAL_ORIENTATION_ENGINE_H_
