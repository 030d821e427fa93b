#include "dynbal/expander.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <json.hpp>

#include "dynbal/errors.h"

namespace dynbal {

std::vector<int> UGraph::Degrees() const {
  std::vector<int> d(n, 0);
  for (const auto& [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

std::vector<std::vector<int>> UGraph::Neighbors() const {
  std::vector<std::vector<int>> nb(n);
  for (const auto& [u, v] : edges) {
    nb[u].push_back(v);
    nb[v].push_back(u);
  }
  return nb;
}

std::vector<std::vector<int>> UGraph::EdgeComponents() const {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : edges) parent[find(u)] = find(v);
  std::map<int, int> index;
  std::vector<std::vector<int>> comps;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    int r = find(edges[e].first);
    auto [it, inserted] = index.emplace(r, static_cast<int>(comps.size()));
    if (inserted) comps.emplace_back();
    comps[it->second].push_back(e);
  }
  return comps;
}

SubgraphMap Subgraph(const UGraph& g, const std::vector<int>& edge_ids) {
  SubgraphMap sm;
  std::vector<int> local(g.n, -1);
  for (int e : edge_ids) {
    sm.vertex.push_back(g.edges[e].first);
    sm.vertex.push_back(g.edges[e].second);
  }
  std::sort(sm.vertex.begin(), sm.vertex.end());
  sm.vertex.erase(std::unique(sm.vertex.begin(), sm.vertex.end()), sm.vertex.end());
  for (size_t i = 0; i < sm.vertex.size(); ++i) local[sm.vertex[i]] = static_cast<int>(i);
  sm.graph.n = static_cast<int>(sm.vertex.size());
  for (int e : edge_ids) {
    sm.graph.edges.emplace_back(local[g.edges[e].first], local[g.edges[e].second]);
    sm.edge.push_back(e);
  }
  return sm;
}

namespace {

// a/b < c/d for positive denominators.
bool RatioLess(int64_t a, int64_t b, int64_t c, int64_t d) { return a * d < c * b; }

void CheckSimpleInput(const UGraph& g) {
  for (const auto& [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= g.n || v >= g.n) throw InvalidArgument("edge endpoint out of range");
    if (u == v) throw SelfLoop("vertex " + std::to_string(u));
  }
}

std::vector<int> NonIsolated(const UGraph& g) {
  std::vector<int> deg = g.Degrees();
  std::vector<int> out;
  for (int v = 0; v < g.n; ++v) {
    if (deg[v] > 0) out.push_back(v);
  }
  return out;
}

CutReport FinishCut(const std::vector<int>& verts, const std::vector<bool>& in_side,
                    int64_t cut, int64_t vol_side, int64_t vol_total) {
  CutReport r;
  bool take_side = vol_side <= vol_total - vol_side;
  for (size_t i = 0; i < verts.size(); ++i) {
    if (in_side[i] == take_side) r.side.push_back(verts[i]);
  }
  r.cut_edges = cut;
  r.volume = take_side ? vol_side : vol_total - vol_side;
  r.conductance = r.volume > 0 ? static_cast<double>(cut) / r.volume : 1.0;
  return r;
}

}  // namespace

CutReport ConductanceExact(const UGraph& g) {
  CheckSimpleInput(g);
  std::vector<int> verts = NonIsolated(g);
  const int k = static_cast<int>(verts.size());
  if (k > kExactCutLimit) {
    throw TooLarge(std::to_string(k) + " vertices exceed the exact limit of " +
                   std::to_string(kExactCutLimit));
  }
  CutReport best;
  best.method = "exact";
  if (k < 2) return best;
  std::vector<int> local(g.n, -1);
  for (int i = 0; i < k; ++i) local[verts[i]] = i;
  std::vector<std::vector<int>> nb(k);
  std::vector<int64_t> deg(k, 0);
  for (const auto& [u, v] : g.edges) {
    nb[local[u]].push_back(local[v]);
    nb[local[v]].push_back(local[u]);
    ++deg[local[u]];
    ++deg[local[v]];
  }
  const int64_t vol_total = 2 * static_cast<int64_t>(g.edges.size());

  // Gray-code walk over subsets of the first k-1 vertices.
  std::vector<bool> in(k, false);
  int64_t cut = 0, vol = 0;
  bool have = false;
  int64_t best_cut = 0, best_vol = 1;
  uint32_t best_mask = 0;
  uint32_t mask = 0;
  const uint64_t total = uint64_t{1} << (k - 1);
  for (uint64_t i = 1; i < total; ++i) {
    int v = __builtin_ctzll(i);
    int64_t to_inside = 0;
    for (int w : nb[v]) to_inside += in[w] ? 1 : 0;
    if (!in[v]) {
      cut += deg[v] - 2 * to_inside;
      vol += deg[v];
    } else {
      cut -= deg[v] - 2 * to_inside;
      vol -= deg[v];
    }
    in[v] = !in[v];
    mask ^= (1u << v);
    int64_t mv = std::min(vol, vol_total - vol);
    if (mv <= 0) continue;
    if (!have || RatioLess(cut, mv, best_cut, best_vol)) {
      have = true;
      best_cut = cut;
      best_vol = mv;
      best_mask = mask;
    }
  }
  std::vector<bool> side(k, false);
  int64_t vs = 0;
  for (int i = 0; i < k; ++i) {
    side[i] = (best_mask >> i) & 1u;
    if (side[i]) vs += deg[i];
  }
  CutReport r = FinishCut(verts, side, best_cut, vs, vol_total);
  r.method = "exact";
  return r;
}

namespace {

Eigen::MatrixXd ScaledLaplacian(const UGraph& g, const std::vector<double>& w) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& [u, v] : g.edges) {
    double s = 1.0 / std::sqrt(w[u] * w[v]);
    m(u, v) -= s;
    m(v, u) -= s;
    m(u, u) += 1.0 / w[u];
    m(v, v) += 1.0 / w[v];
  }
  return m;
}

// In-place solve of (T - sigma I) z = b for the symmetric tridiagonal T with
// diagonal d and off-diagonal e, by LU with partial pivoting.
void SolveShiftedTridiagonal(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double sigma,
                             Eigen::VectorXd& b) {
  const int n = static_cast<int>(d.size());
  const double tiny = 1e-300;
  std::vector<double> dg(n), dl(std::max(0, n - 1)), du(std::max(0, n - 1)),
      du2(std::max(0, n - 2), 0.0);
  std::vector<bool> swapped(std::max(0, n - 1), false);
  for (int i = 0; i < n; ++i) dg[i] = d(i) - sigma;
  for (int i = 0; i + 1 < n; ++i) dl[i] = du[i] = e(i);
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(dg[i]) >= std::abs(dl[i])) {
      if (dg[i] == 0.0) dg[i] = tiny;
      double f = dl[i] / dg[i];
      dl[i] = f;
      dg[i + 1] -= f * du[i];
    } else {
      double f = dg[i] / dl[i];
      dg[i] = dl[i];
      dl[i] = f;
      double tmp = du[i];
      du[i] = dg[i + 1];
      dg[i + 1] = tmp - f * dg[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  if (dg[n - 1] == 0.0) dg[n - 1] = tiny;
  for (int i = 0; i + 1 < n; ++i) {
    if (swapped[i]) {
      double tmp = b(i);
      b(i) = b(i + 1);
      b(i + 1) = tmp - dl[i] * b(i);
    } else {
      b(i + 1) -= dl[i] * b(i);
    }
  }
  b(n - 1) /= dg[n - 1];
  if (n >= 2) b(n - 2) = (b(n - 2) - du[n - 2] * b(n - 1)) / dg[n - 2];
  for (int i = n - 3; i >= 0; --i) {
    b(i) = (b(i) - du[i] * b(i + 1) - du2[i] * b(i + 2)) / dg[i];
  }
}

// Eigenvalues of the tridiagonal form, then inverse iteration for the second
// eigenvector; avoids accumulating the full eigenvector basis.
SpectrumResult DenseSecondEigen(const UGraph& g, const std::vector<double>& w,
                                const SpectralOptions& opt) {
  const int n = g.n;
  Eigen::MatrixXd lap = ScaledLaplacian(g, w);
  Eigen::Tridiagonalization<Eigen::MatrixXd> tri(lap);
  Eigen::VectorXd diag = tri.diagonal();
  Eigen::VectorXd sub = tri.subDiagonal();
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(sub(i - 1)) : 0.0) + (i + 1 < n ? std::abs(sub(i)) : 0.0);
    lo = std::min(lo, diag(i) - r);
    hi = std::max(hi, diag(i) + r);
  }
  const double scale = std::max(1.0, hi - lo);
  // Sturm count: eigenvalues of the tridiagonal form below x.
  auto below = [&](double x) {
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < n; ++i) {
      double off = i > 0 ? sub(i - 1) * sub(i - 1) : 0.0;
      q = diag(i) - x - (i > 0 ? off / q : 0.0);
      if (q == 0.0) q = -1e-300;
      if (q < 0.0) ++count;
    }
    return count;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-15 * scale; ++it) {
    double mid = 0.5 * (lo + hi);
    if (below(mid) >= 2) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double lambda2 = 0.5 * (lo + hi);

  Eigen::VectorXd top(n);
  for (int v = 0; v < n; ++v) top(v) = std::sqrt(w[v]);
  top.normalize();
  Eigen::VectorXd top_t = tri.matrixQ().adjoint() * top;

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = gauss(rng);
  const double sigma = lambda2 - 1e-10 * scale;
  bool ok = true;
  for (int it = 0; it < 6 && ok; ++it) {
    z -= top_t.dot(z) * top_t;
    double nz = z.norm();
    if (!(nz > 0.0) || !std::isfinite(nz)) {
      ok = false;
      break;
    }
    z /= nz;
    SolveShiftedTridiagonal(diag, sub, sigma, z);
    ok = z.allFinite();
  }
  if (ok) {
    z -= top_t.dot(z) * top_t;
    ok = z.norm() > 0.0 && std::isfinite(z.norm());
  }
  Eigen::VectorXd x;
  if (ok) {
    z.normalize();
    x = tri.matrixQ() * z;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(lap);
    if (full.info() != Eigen::Success) throw ConvergenceFailure("dense eigensolver failed");
    x = full.eigenvectors().col(1);
  }
  SpectrumResult res;
  res.lambda2 = std::max(0.0, lambda2);
  res.vector.assign(x.data(), x.data() + n);
  return res;
}

SpectrumResult PowerIteration(const UGraph& g, const std::vector<double>& w,
                              const SpectralOptions& opt) {
  const int n = g.n;
  std::vector<int> deg = g.Degrees();
  double shift = 0.0;
  for (int v = 0; v < n; ++v) shift = std::max(shift, 2.0 * deg[v] / w[v]);
  Eigen::VectorXd top(n);
  for (int v = 0; v < n; ++v) top(v) = std::sqrt(w[v]);
  top.normalize();
  std::vector<double> inv_sqrt(n);
  for (int v = 0; v < n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(w[v]);

  auto apply = [&](const Eigen::VectorXd& x) {
    // (shift * I - N) x, N = W^{-1/2} (D - A) W^{-1/2}
    Eigen::VectorXd y(n);
    for (int v = 0; v < n; ++v) y(v) = (shift - deg[v] / w[v]) * x(v);
    for (const auto& [u, v] : g.edges) {
      double s = inv_sqrt[u] * inv_sqrt[v];
      y(u) += s * x(v);
      y(v) += s * x(u);
    }
    return y;
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (int v = 0; v < n; ++v) x(v) = gauss(rng);
  x -= top.dot(x) * top;
  if (x.norm() == 0.0) throw ConvergenceFailure("degenerate start vector");
  x.normalize();
  SpectrumResult res;
  res.converged = false;
  double mu = 0.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    Eigen::VectorXd y = apply(x);
    y -= top.dot(y) * top;
    mu = x.dot(y);
    double resid = (y - mu * x).norm();
    double norm = y.norm();
    if (!std::isfinite(norm) || !std::isfinite(mu)) throw ConvergenceFailure("non-finite iterate");
    res.iterations = it;
    if (resid <= opt.tol) {
      res.converged = true;
      break;
    }
    if (norm == 0.0) {
      res.converged = true;
      break;
    }
    x = y / norm;
  }
  res.lambda2 = std::max(0.0, shift - mu);
  res.vector.assign(x.data(), x.data() + n);
  return res;
}

}  // namespace

SpectrumResult SecondEigen(const UGraph& g, const std::vector<double>& weights,
                           const SpectralOptions& opt) {
  CheckSimpleInput(g);
  if (g.n < 2) throw InvalidArgument("spectrum needs at least two vertices");
  std::vector<double> w = weights;
  if (w.empty()) {
    std::vector<int> deg = g.Degrees();
    w.assign(deg.begin(), deg.end());
  }
  for (double x : w) {
    if (!(x > 0)) throw InvalidArgument("spectral weights must be positive");
  }
  if (g.n > opt.dense_limit) return PowerIteration(g, w, opt);
  return DenseSecondEigen(g, w, opt);
}

SpectrumResult PowerIterationSecondEigen(const UGraph& g, const SpectralOptions& opt) {
  SpectralOptions o = opt;
  o.dense_limit = 0;
  return SecondEigen(g, {}, o);
}

CutReport SweepCut(const UGraph& g, const SpectralOptions& opt) {
  CheckSimpleInput(g);
  SubgraphMap sm;
  {
    std::vector<int> all(g.edges.size());
    std::iota(all.begin(), all.end(), 0);
    sm = Subgraph(g, all);
  }
  const UGraph& h = sm.graph;
  if (h.EdgeComponents().size() != 1) throw InvalidArgument("sweep cut needs a connected graph");
  SpectrumResult sp = SecondEigen(h, {}, opt);
  std::vector<int> deg = h.Degrees();
  std::vector<int> order(h.n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> key(h.n);
  for (int v = 0; v < h.n; ++v) key[v] = sp.vector[v] / std::sqrt(static_cast<double>(deg[v]));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });

  std::vector<std::vector<int>> nb = h.Neighbors();
  const int64_t vol_total = 2 * static_cast<int64_t>(h.edges.size());
  std::vector<bool> in(h.n, false);
  int64_t cut = 0, vol = 0;
  int best_k = -1;
  int64_t best_cut = 0, best_vol = 1;
  for (int k = 0; k + 1 < h.n; ++k) {
    int v = order[k];
    int64_t to_inside = 0;
    for (int w : nb[v]) to_inside += in[w] ? 1 : 0;
    cut += deg[v] - 2 * to_inside;
    vol += deg[v];
    in[v] = true;
    int64_t mv = std::min(vol, vol_total - vol);
    if (mv <= 0) continue;
    if (best_k < 0 || RatioLess(cut, mv, best_cut, best_vol)) {
      best_k = k;
      best_cut = cut;
      best_vol = mv;
    }
  }
  std::vector<bool> side(h.n, false);
  int64_t vs = 0;
  for (int k = 0; k <= best_k; ++k) {
    side[order[k]] = true;
    vs += deg[order[k]];
  }
  CutReport r = FinishCut(sm.vertex, side, best_cut, vs, vol_total);
  std::sort(r.side.begin(), r.side.end());
  r.method = "sweep";
  r.lambda2 = sp.lambda2;
  r.converged = sp.converged;
  return r;
}

bool IsWeaklyRegular(const UGraph& g, double gamma) {
  if (g.n == 0) return true;
  std::vector<int> deg = g.Degrees();
  double avg = 2.0 * static_cast<double>(g.edges.size()) / g.n;
  int mn = *std::min_element(deg.begin(), deg.end());
  return mn >= gamma * avg;
}

double DefaultPhi(int n) {
  if (n <= 2) return 1.0;
  return 1.0 / std::ceil(std::log2(static_cast<double>(n)));
}

CertReport CertifyPiece(const UGraph& piece, double phi, double gamma,
                        const SpectralOptions& opt) {
  CheckSimpleInput(piece);
  CertReport rep;
  rep.weakly_regular = IsWeaklyRegular(piece, gamma);
  std::vector<int> verts = NonIsolated(piece);
  if (piece.edges.empty() || verts.size() < 2) {
    rep.method = "trivial";
    rep.measured = 1.0;
    rep.expansion_ok = true;
  } else if (static_cast<int>(verts.size()) <= kExactCutLimit) {
    CutReport c = ConductanceExact(piece);
    rep.method = "exact";
    rep.measured = c.conductance;
    rep.expansion_ok = c.conductance >= phi;
    if (!rep.expansion_ok) rep.witness = c.side;
  } else {
    std::vector<int> all(piece.edges.size());
    std::iota(all.begin(), all.end(), 0);
    SubgraphMap sm = Subgraph(piece, all);
    rep.method = "spectral";
    if (sm.graph.EdgeComponents().size() > 1) {
      rep.measured = 0.0;
      rep.expansion_ok = false;
      std::vector<int> comp = sm.graph.EdgeComponents()[0];
      for (int e : comp) {
        rep.witness.push_back(sm.vertex[sm.graph.edges[e].first]);
        rep.witness.push_back(sm.vertex[sm.graph.edges[e].second]);
      }
      std::sort(rep.witness.begin(), rep.witness.end());
      rep.witness.erase(std::unique(rep.witness.begin(), rep.witness.end()), rep.witness.end());
    } else {
      SpectrumResult sp = SecondEigen(sm.graph, {}, opt);
      rep.measured = sp.lambda2 / 2.0;
      rep.expansion_ok = rep.measured >= phi;
      if (!rep.expansion_ok) {
        CutReport c = SweepCut(sm.graph, opt);
        for (int v : c.side) rep.witness.push_back(sm.vertex[v]);
      }
    }
  }
  rep.passed = rep.weakly_regular && rep.expansion_ok;
  return rep;
}

std::map<int, int> Decomposition::MembershipHistogram() const {
  std::map<int, int> h;
  for (int c : membership) {
    if (c > 0) ++h[c];
  }
  return h;
}

int Decomposition::MaxMembership() const {
  int m = 0;
  for (int c : membership) m = std::max(m, c);
  return m;
}

std::string Decomposition::ToJson() const {
  nlohmann::json j;
  j["phi"] = phi;
  j["gamma"] = gamma;
  nlohmann::json ps = nlohmann::json::array();
  for (const Piece& p : pieces) {
    ps.push_back({{"edges", p.edges},
                  {"vertices", p.vertices},
                  {"certified", p.certified},
                  {"measured", p.measured},
                  {"method", p.method}});
  }
  j["pieces"] = ps;
  nlohmann::json h = nlohmann::json::object();
  for (const auto& [k, v] : MembershipHistogram()) h[std::to_string(k)] = v;
  j["membership_histogram"] = h;
  return j.dump();
}

Decomposition Decompose(const UGraph& g, const DecomposeOptions& opt) {
  CheckSimpleInput(g);
  Decomposition out;
  out.phi = opt.phi > 0 ? opt.phi : DefaultPhi(g.n);
  out.gamma = opt.gamma > 0 ? opt.gamma : DefaultGamma(out.phi);
  out.membership.assign(g.n, 0);
  const int lg = std::max(1, static_cast<int>(std::ceil(std::log2(std::max(2, g.n)))));
  const int depth_limit = std::max(8, 4 * lg * lg);

  std::vector<std::vector<int>> accepted;
  struct Work {
    std::vector<int> edges;
    int depth;
  };
  std::vector<Work> stack;
  {
    std::vector<int> all(g.edges.size());
    std::iota(all.begin(), all.end(), 0);
    if (!all.empty()) stack.push_back({std::move(all), 0});
  }
  while (!stack.empty()) {
    Work w = std::move(stack.back());
    stack.pop_back();
    if (w.depth > depth_limit) {
      throw DecompositionOverflow("recursion depth " + std::to_string(w.depth) +
                                  " exceeds " + std::to_string(depth_limit));
    }
    SubgraphMap sm = Subgraph(g, w.edges);
    const UGraph& h = sm.graph;
    std::vector<std::vector<int>> comps = h.EdgeComponents();
    if (comps.size() > 1) {
      for (const auto& c : comps) {
        std::vector<int> orig;
        for (int e : c) orig.push_back(sm.edge[e]);
        stack.push_back({std::move(orig), w.depth});
      }
      continue;
    }
    if (h.edges.size() <= 2) {
      accepted.push_back(w.edges);
      continue;
    }
    CutReport cut = h.n <= opt.exact_limit ? ConductanceExact(h) : SweepCut(h, opt.spectral);
    if (cut.conductance < out.phi && !cut.side.empty()) {
      std::vector<bool> in_s(h.n, false);
      for (int v : cut.side) in_s[v] = true;
      std::vector<int> a, b, cross;
      for (size_t e = 0; e < h.edges.size(); ++e) {
        bool su = in_s[h.edges[e].first], sv = in_s[h.edges[e].second];
        int orig = sm.edge[e];
        if (su && sv) {
          a.push_back(orig);
        } else if (!su && !sv) {
          b.push_back(orig);
        } else {
          cross.push_back(orig);
        }
      }
      for (auto* part : {&a, &b, &cross}) {
        if (!part->empty()) stack.push_back({std::move(*part), w.depth + 1});
      }
      continue;
    }
    // Trim vertices below gamma times the average degree.
    std::vector<int> deg = h.Degrees();
    double avg = 2.0 * static_cast<double>(h.edges.size()) / h.n;
    std::vector<bool> taken(h.edges.size(), false);
    bool trimmed = false;
    std::vector<std::vector<int>> inc(h.n);
    for (size_t e = 0; e < h.edges.size(); ++e) {
      inc[h.edges[e].first].push_back(static_cast<int>(e));
      inc[h.edges[e].second].push_back(static_cast<int>(e));
    }
    for (int v = 0; v < h.n; ++v) {
      if (deg[v] >= out.gamma * avg) continue;
      trimmed = true;
      std::vector<int> chunk;
      for (int e : inc[v]) {
        if (taken[e]) continue;
        taken[e] = true;
        chunk.push_back(sm.edge[e]);
        if (chunk.size() == 2) {
          accepted.push_back(chunk);
          chunk.clear();
        }
      }
      if (!chunk.empty()) accepted.push_back(chunk);
    }
    if (trimmed) {
      std::vector<int> rest;
      for (size_t e = 0; e < h.edges.size(); ++e) {
        if (!taken[e]) rest.push_back(sm.edge[e]);
      }
      if (!rest.empty()) stack.push_back({std::move(rest), w.depth + 1});
      continue;
    }
    accepted.push_back(w.edges);
  }

  for (auto& edges : accepted) std::sort(edges.begin(), edges.end());
  std::sort(accepted.begin(), accepted.end());
  for (auto& edges : accepted) {
    Piece p;
    SubgraphMap sm = Subgraph(g, edges);
    p.edges = edges;
    p.vertices = sm.vertex;
    if (opt.certify) {
      CertReport c = CertifyPiece(sm.graph, out.phi, out.gamma, opt.spectral);
      p.certified = c.passed;
      p.measured = c.measured;
      p.method = c.method;
    }
    for (int v : p.vertices) ++out.membership[v];
    out.pieces.push_back(std::move(p));
  }
  return out;
}

}  // namespace dynbal
