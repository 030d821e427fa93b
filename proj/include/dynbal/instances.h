#ifndef DYNBAL_INSTANCES_H_
#define DYNBAL_INSTANCES_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dynbal/expander.h"
#include "dynbal/oriented_graph.h"

namespace dynbal {

// Signed vector list.
struct VectorInstance {
  int dim = 0;
  std::vector<std::vector<double>> vectors;
  std::vector<int> signs;

  std::vector<double> SignedSum() const;
};

struct IntVectorInstance {
  int dim = 0;
  std::vector<std::vector<int64_t>> vectors;
  std::vector<int> signs;

  std::vector<int64_t> SignedSum() const;
  VectorInstance ToDouble() const;
};

// T/2 copies each of (1, 1/sqrt(T)) and (-1, 1/sqrt(T)), all signed +1.
VectorInstance Gen2dLocalOpt(int t);

struct Pm1Structure {
  std::vector<int64_t> binv_one;  // B^{-1} 1
  std::vector<int64_t> s;         // per pair
  std::vector<int64_t> r;         // copies per unit
};
Pm1Structure Pm1LocalOptStructure(int n);

// +-1 local optimum with exponential discrepancy. pad_width > 0 appends the
// distinct-rows extension with that many extra coordinates; 0 picks the
// smallest feasible width; -1 disables it.
IntVectorInstance GenPm1LocalOpt(int n, int pad_width = -1);
int64_t Pm1RowCount(int n);

struct LayeredGraph {
  OrientedGraph graph;
  std::vector<int> layer_sizes;
  std::vector<int> layer_of;  // per vertex
};
LayeredGraph GenLayeredGraph(int k, int max_len);

// Unit vectors orthogonal to the current signed sum in the plane.
std::vector<double> OrthogonalUnit(const std::vector<double>& s);

struct VectorLocalOptReport {
  bool ok = true;
  int violator = -1;
};
// pm1 mode: <S, eps_i a_i> <= dim. General mode: ||S - 2 eps_i a_i|| >= ||S||.
VectorLocalOptReport VerifyVectorLocalOpt(const VectorInstance& inst, bool pm1_mode);
VectorLocalOptReport VerifyVectorLocalOptExact(const IntVectorInstance& inst);

// Flips the lowest-index improving sign until none improves ||S||_2.
int64_t VectorLocalSearch(VectorInstance& inst);

UGraph GenRandomRegular(int n, int d, uint64_t seed);

struct GraphEvent {
  bool insert = true;
  int u = 0, v = 0;
};
struct VectorEvent {
  bool insert = true;
  int64_t id = 0;
  std::vector<double> v;
};

std::vector<GraphEvent> GenForestStream(int n, int t, uint64_t seed, double insert_prob = 0.6);
// Random pairs over n vertices; deletes pick a uniformly random live copy.
std::vector<GraphEvent> GenGraphWorkload(int n, int t, uint64_t seed, double insert_prob = 0.6);

enum class VectorKind { kUniformBox, kUnitL2, kSparsePm1 };
struct VectorStreamSpec {
  int dim = 2;
  int t = 0;
  uint64_t seed = 1;
  VectorKind kind = VectorKind::kUniformBox;
  int sparsity = 1;          // kSparsePm1 only
  double insert_prob = 1.0;  // 1: insert-only
};
std::vector<VectorEvent> GenVectorStream(const VectorStreamSpec& spec);

}  // namespace dynbal

#endif  // DYNBAL_INSTANCES_H_
