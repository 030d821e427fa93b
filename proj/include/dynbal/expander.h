#ifndef DYNBAL_EXPANDER_H_
#define DYNBAL_EXPANDER_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dynbal {

// Undirected multigraph given as an edge list over vertices 0..n-1.
struct UGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<int> Degrees() const;
  std::vector<std::vector<int>> Neighbors() const;  // with multiplicity
  // Connected components of the non-isolated vertices, as edge-index lists.
  std::vector<std::vector<int>> EdgeComponents() const;
};

struct SubgraphMap {
  UGraph graph;
  std::vector<int> vertex;  // local -> original vertex
  std::vector<int> edge;    // local -> original edge index
};

// Subgraph on the given edges, with the touched vertices renumbered ascending.
SubgraphMap Subgraph(const UGraph& g, const std::vector<int>& edge_ids);

struct CutReport {
  std::vector<int> side;  // the side of smaller volume, ascending
  int64_t cut_edges = 0;
  int64_t volume = 0;     // volume of `side`
  double conductance = 1.0;
  std::string method;
  double lambda2 = -1.0;  // set by spectral methods
  bool converged = true;
};

inline constexpr int kExactCutLimit = 24;

// Minimum conductance by enumeration; non-isolated vertices only.
CutReport ConductanceExact(const UGraph& g);

struct SpectrumResult {
  double lambda2 = 0.0;         // second eigenvalue of the normalized Laplacian
  std::vector<double> vector;   // its eigenvector
  bool converged = true;
  int iterations = 0;
};

struct SpectralOptions {
  uint64_t seed = 1;
  double tol = 1e-8;
  int max_iter = 10000;
  int dense_limit = 1500;
};

// `weights` replaces the degree normalization when nonempty (D_w^{-1/2} L D_w^{-1/2}).
SpectrumResult SecondEigen(const UGraph& g, const std::vector<double>& weights = {},
                           const SpectralOptions& opt = {});
SpectrumResult PowerIterationSecondEigen(const UGraph& g, const SpectralOptions& opt = {});

CutReport SweepCut(const UGraph& g, const SpectralOptions& opt = {});

bool IsWeaklyRegular(const UGraph& g, double gamma);

double DefaultPhi(int n);
inline double DefaultGamma(double phi) { return phi / 4.0; }

struct CertReport {
  bool passed = false;
  bool weakly_regular = false;
  bool expansion_ok = false;
  double measured = 0.0;  // exact conductance, or lambda2 / 2 in spectral mode
  std::string method;
  std::vector<int> witness;  // violating cut side, original vertex ids of the piece
};

CertReport CertifyPiece(const UGraph& piece, double phi, double gamma,
                        const SpectralOptions& opt = {});

struct DecomposeOptions {
  double phi = -1.0;    // <= 0 selects DefaultPhi(n)
  double gamma = -1.0;  // <= 0 selects phi / 4
  int exact_limit = 16;
  bool certify = true;
  SpectralOptions spectral;
};

struct Piece {
  std::vector<int> edges;     // indices into the input edge list, ascending
  std::vector<int> vertices;  // ascending
  bool certified = false;
  double measured = 0.0;
  std::string method;
};

struct Decomposition {
  std::vector<Piece> pieces;
  double phi = 0.0;
  double gamma = 0.0;
  std::vector<int> membership;  // per vertex of the input graph
  std::map<int, int> MembershipHistogram() const;
  int MaxMembership() const;
  std::string ToJson() const;
};

Decomposition Decompose(const UGraph& g, const DecomposeOptions& opt = {});

}  // namespace dynbal

#endif  // DYNBAL_EXPANDER_H_
