#ifndef DYNBAL_ORIENTED_GRAPH_H_
#define DYNBAL_ORIENTED_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dynbal {

// Directed multigraph with stable edge ids. imbalance(v) = in(v) - out(v) and
// Phi = sum of imbalance^2 are maintained incrementally.
class OrientedGraph {
 public:
  struct Edge {
    int a = -1, b = -1;   // endpoints as given at insertion
    bool forward = true;  // true: a -> b
    bool alive = false;
    int tail() const { return forward ? a : b; }
    int head() const { return forward ? b : a; }
    int other(int x) const { return x == a ? b : a; }
  };

  OrientedGraph() = default;
  explicit OrientedGraph(int num_vertices);

  int AddVertex();
  void EnsureVertices(int n);
  int AddEdge(int tail, int head);
  void RemoveEdge(int e);
  void FlipEdge(int e);
  // Orients e as tail -> head (no-op when already so).
  void SetDirection(int e, int tail);

  int num_vertices() const { return static_cast<int>(imbalance_.size()); }
  int num_edges() const { return live_edges_; }
  int edge_capacity() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_[e]; }
  bool alive(int e) const { return e >= 0 && e < edge_capacity() && edges_[e].alive; }
  const std::vector<int>& incident(int v) const { return incident_[v]; }
  int degree(int v) const { return static_cast<int>(incident_[v].size()); }
  int64_t imbalance(int v) const { return imbalance_[v]; }
  const std::vector<int64_t>& imbalances() const { return imbalance_; }
  int64_t phi() const { return phi_; }
  int64_t RecomputePhi() const;
  int64_t MaxDiscrepancy() const;
  std::vector<int> LiveEdges() const;

  // Text dump: "# {json}" header, then one "u v dir" line per live edge, where
  // dir = 1 means u -> v and dir = -1 means v -> u.
  void Dump(std::ostream& out) const;
  std::string DumpString() const;
  static OrientedGraph Load(std::istream& in);
  static OrientedGraph LoadString(const std::string& text);

 private:
  void AddToBalance(int v, int64_t delta);
  void CheckVertex(int v) const;
  void CheckEdge(int e) const;

  std::vector<Edge> edges_;
  std::vector<int> pos_a_, pos_b_;  // position in incident lists
  std::vector<std::vector<int>> incident_;
  std::vector<int64_t> imbalance_;
  int64_t phi_ = 0;
  int live_edges_ = 0;
};

}  // namespace dynbal

#endif  // DYNBAL_ORIENTED_GRAPH_H_
