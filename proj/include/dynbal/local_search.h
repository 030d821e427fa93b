#ifndef DYNBAL_LOCAL_SEARCH_H_
#define DYNBAL_LOCAL_SEARCH_H_

#include <cstdint>
#include <vector>

#include "dynbal/oriented_graph.h"

namespace dynbal {

struct LocalSearchStats {
  int64_t flips = 0;
  int64_t phi_before = 0;
  int64_t phi_after = 0;
};

// Flips u -> v while imbalance(v) - imbalance(u) > delta, lowest edge id first.
LocalSearchStats LocalSearch(OrientedGraph& g, int delta = 2);
LocalSearchStats ThresholdLocalSearch(OrientedGraph& g, int delta);

// Reverses directed paths of length <= max_len whose end imbalance exceeds the
// start imbalance by more than 2.
LocalSearchStats PathLocalSearch(OrientedGraph& g, int max_len);

struct LocalOptReport {
  bool ok = true;
  std::vector<int> witness;  // edge ids of an improving path, start to end
};

LocalOptReport VerifyLocalOpt(const OrientedGraph& g, int max_len = 1, int delta = 2);

// Orients every live edge so that |imbalance| <= 1, with 0 at even-degree
// vertices. Returns the number of edges whose direction changed.
int DiscrepancyOneOrientation(OrientedGraph& g);

}  // namespace dynbal

#endif  // DYNBAL_LOCAL_SEARCH_H_
