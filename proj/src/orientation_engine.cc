#include "dynbal/orientation_engine.h"

#include <algorithm>
#include <cmath>

#include "dynbal/errors.h"
#include "dynbal/local_search.h"

namespace dynbal {

ReorientLedger PruneAndReorient(OrientedGraph& g, int deleted_edge,
                                const std::vector<int>& pruned_vertices,
                                std::vector<int>* removed) {
  ReorientLedger led;
  led.phi_prev = g.phi();
  g.RemoveEdge(deleted_edge);
  led.phi_after_delete = g.phi();

  std::vector<bool> in_p(g.num_vertices(), false);
  for (int p : pruned_vertices) in_p[p] = true;
  std::vector<std::pair<int, int>> plus, minus;  // (real endpoint, edge)
  std::vector<int> gone;
  for (int p : pruned_vertices) {
    for (int f : g.incident(p)) {
      const auto& ed = g.edge(f);
      int w = ed.other(p);
      gone.push_back(f);
      if (in_p[w]) continue;
      if (ed.tail() == w) {
        plus.emplace_back(w, f);
      } else {
        minus.emplace_back(w, f);
      }
    }
  }
  std::sort(gone.begin(), gone.end());
  gone.erase(std::unique(gone.begin(), gone.end()), gone.end());
  for (int f : gone) g.RemoveEdge(f);
  if (removed != nullptr) removed->insert(removed->end(), gone.begin(), gone.end());

  const int n_fake = static_cast<int>(pruned_vertices.size());
  int64_t total_flips = 0;
  if (n_fake == 0) {
    led.phi_redistributed = g.phi();
    total_flips += LocalSearch(g).flips;
  } else {
    std::vector<int> fakes(n_fake);
    for (int& f : fakes) f = g.AddVertex();
    std::sort(plus.begin(), plus.end());
    std::sort(minus.begin(), minus.end());
    for (size_t i = 1; i <= plus.size(); ++i) {
      g.AddEdge(plus[i - 1].first, fakes[i % n_fake]);
    }
    for (size_t i = 1; i <= minus.size(); ++i) {
      g.AddEdge(fakes[i % n_fake], minus[i - 1].first);
    }
    led.phi_redistributed = g.phi();
    int64_t sum = static_cast<int64_t>(plus.size()) - static_cast<int64_t>(minus.size());
    int64_t q = sum / n_fake;
    if (sum % n_fake != 0 && sum < 0) --q;
    led.d_prime = q;
    for (int f : fakes) {
      int64_t d = g.imbalance(f);
      led.fake_disc.push_back(d);
      if (d != q && d != q + 1) led.fakes_balanced = false;
    }
    total_flips += LocalSearch(g).flips;
    for (int f : fakes) {
      int64_t before = g.phi();
      std::vector<int> inc = g.incident(f);
      for (int e : inc) g.RemoveEdge(e);
      led.nonflip_delta += g.phi() - before;
      total_flips += LocalSearch(g).flips;
    }
  }
  led.nonflip_delta += (led.phi_after_delete - led.phi_prev) +
                       (led.phi_redistributed - led.phi_after_delete);
  led.flips = total_flips;
  led.phi_final = g.phi();
  return led;
}

struct OrientationEngine::PieceState {
  int level = -1;
  bool alive = true;
  bool certified = false;
  std::vector<int> vertices;  // global, ascending
  std::vector<int> snapshot;  // global edge ids, ascending
  std::set<int> live_edges;
  OrientedGraph og;
  std::vector<int> og_global;
  std::unique_ptr<PrunedExpander> pruner;
  std::vector<int> pr_global;
  int64_t deletions = 0;
  int64_t budget = 1;

  int Local(int v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    return static_cast<int>(it - vertices.begin());
  }
};

OrientationEngine::OrientationEngine(const OrientationConfig& config) : n_(config.n) {
  if (n_ <= 0) throw InvalidArgument("vertex universe must be nonempty");
  phi_ = config.phi > 0 ? config.phi : DefaultPhi(n_);
  gamma_ = config.gamma > 0 ? config.gamma : DefaultGamma(phi_);
  if (phi_ > 1.0) throw InvalidArgument("phi must lie in (0, 1]");
  decompose_opts_.phi = phi_;
  decompose_opts_.gamma = gamma_;
  decompose_opts_.exact_limit = config.exact_limit;
  decompose_opts_.spectral.seed = config.seed;
  imbalance_.assign(n_, 0);
}

OrientationEngine::~OrientationEngine() = default;

void OrientationEngine::CheckVertex(int v) const {
  if (v < 0 || v >= n_) throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
}

bool OrientationEngine::HasEdge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return key_to_id_.count(Key(u, v)) > 0;
}

int OrientationEngine::Tail(int u, int v) const {
  if (u > v) std::swap(u, v);
  auto it = key_to_id_.find(Key(u, v));
  if (it == key_to_id_.end()) {
    throw UnknownEdge("edge " + std::to_string(u) + "-" + std::to_string(v));
  }
  return edges_[it->second].tail;
}

int64_t OrientationEngine::MaxDiscrepancy() const {
  int64_t d = 0;
  for (int64_t x : imbalance_) d = std::max(d, std::abs(x));
  return d;
}

int OrientationEngine::MembershipBound() const {
  int lg = static_cast<int>(std::ceil(std::log2(std::max(2, n_))));
  return lg * lg;
}

void OrientationEngine::SetTail(int id, int tail) {
  EdgeRec& r = edges_[id];
  if (r.tail == tail) return;
  touched_.emplace(id, r.tail);
  int head = r.tail == r.u ? r.v : r.u;
  imbalance_[r.tail] += 2;
  imbalance_[head] -= 2;
  r.tail = tail;
}

void OrientationEngine::KillPiece(int p) {
  if (p < 0 || !pieces_[p]->alive) return;
  PieceState& ps = *pieces_[p];
  ps.alive = false;
  ps.pruner.reset();
  ps.og = OrientedGraph();
  ps.og_global = {};
  ps.pr_global = {};
  ps.snapshot = {};
  ps.vertices = {};
  ps.live_edges.clear();
  --pieces_live_;
}

void OrientationEngine::RebuildLevel(int level, const std::vector<int>& ids) {
  Level& lv = levels_[level];
  lv.edges = std::set<int>(ids.begin(), ids.end());
  lv.snapshot = lv.edges;
  lv.created_at = tau_;
  lv.pieces.clear();
  UGraph g;
  g.n = n_;
  for (int id : ids) g.edges.emplace_back(edges_[id].u, edges_[id].v);
  Decomposition d = Decompose(g, decompose_opts_);
  for (const Piece& piece : d.pieces) {
    auto ps = std::make_unique<PieceState>();
    ps->level = level;
    ps->certified = piece.certified;
    ps->vertices = piece.vertices;
    SubgraphMap sm = Subgraph(g, piece.edges);
    ps->og = OrientedGraph(sm.graph.n);
    for (size_t j = 0; j < piece.edges.size(); ++j) {
      int id = ids[piece.edges[j]];
      ps->snapshot.push_back(id);
      const EdgeRec& r = edges_[id];
      int head = r.tail == r.u ? r.v : r.u;
      ps->og.AddEdge(ps->Local(r.tail), ps->Local(head));
      ps->og_global.push_back(id);
      ps->pr_global.push_back(id);
    }
    event_flips_ += DiscrepancyOneOrientation(ps->og);
    ps->pruner = std::make_unique<PrunedExpander>(sm.graph, phi_, true);
    ps->budget = ps->pruner->budget();
    const int p = static_cast<int>(pieces_.size());
    for (size_t j = 0; j < ps->snapshot.size(); ++j) {
      int id = ps->snapshot[j];
      EdgeRec& r = edges_[id];
      r.level = level;
      r.piece = p;
      r.og_edge = static_cast<int>(j);
      r.pr_edge = static_cast<int>(j);
      SetTail(id, ps->vertices[ps->og.edge(static_cast<int>(j)).tail()]);
      ps->live_edges.insert(id);
    }
    std::vector<int> sorted = ps->snapshot;
    std::sort(sorted.begin(), sorted.end());
    ps->snapshot = std::move(sorted);
    lv.pieces.push_back(p);
    pieces_.push_back(std::move(ps));
    ++pieces_live_;
  }
  ++level_rebuilds_;
}

void OrientationEngine::InternalInsert(const std::vector<int>& batch) {
  if (batch.empty()) return;
  tau_ += static_cast<int64_t>(batch.size());
  int64_t count = static_cast<int64_t>(batch.size());
  int level = 0;
  for (;; ++level) {
    if (level >= static_cast<int>(levels_.size())) levels_.emplace_back();
    count += static_cast<int64_t>(levels_[level].edges.size());
    if (count <= (int64_t{1} << level)) break;
  }
  std::vector<int> ids = batch;
  for (int i = 0; i <= level; ++i) {
    ids.insert(ids.end(), levels_[i].edges.begin(), levels_[i].edges.end());
    for (int p : levels_[i].pieces) KillPiece(p);
    levels_[i].edges.clear();
    levels_[i].snapshot.clear();
    levels_[i].pieces.clear();
  }
  std::sort(ids.begin(), ids.end());
  RebuildLevel(level, ids);
}

void OrientationEngine::ReleaseEdgeFromPiece(int id) {
  EdgeRec& r = edges_[id];
  if (r.level >= 0) levels_[r.level].edges.erase(id);
  if (r.piece >= 0) pieces_[r.piece]->live_edges.erase(id);
  r.level = -1;
  r.piece = -1;
  r.og_edge = -1;
  r.pr_edge = -1;
}

EngineEventResult OrientationEngine::Finish() {
  EngineEventResult res;
  for (const auto& [id, old_tail] : touched_) {
    const EdgeRec& r = edges_[id];
    if (r.alive && r.tail != old_tail) res.changed.push_back({r.u, r.v, r.tail});
  }
  res.flips = event_flips_;
  touched_.clear();
  event_flips_ = 0;
  return res;
}

EngineEventResult OrientationEngine::InsertEdge(int u, int v) {
  CheckVertex(u);
  CheckVertex(v);
  if (u == v) throw SelfLoop("vertex " + std::to_string(u));
  if (u > v) std::swap(u, v);
  if (key_to_id_.count(Key(u, v))) {
    throw DuplicateId("edge " + std::to_string(u) + "-" + std::to_string(v) + " already live");
  }
  touched_.clear();
  event_flips_ = 0;
  const int id = static_cast<int>(edges_.size());
  EdgeRec r;
  r.u = u;
  r.v = v;
  r.tail = u;
  r.alive = true;
  edges_.push_back(r);
  key_to_id_[Key(u, v)] = id;
  imbalance_[u] -= 1;
  imbalance_[v] += 1;
  InternalInsert({id});
  touched_.erase(id);
  return Finish();
}

EngineEventResult OrientationEngine::DeleteEdge(int u, int v) {
  if (u > v) std::swap(u, v);
  auto it = key_to_id_.find(Key(u, v));
  if (it == key_to_id_.end()) {
    throw UnknownEdge("edge " + std::to_string(u) + "-" + std::to_string(v));
  }
  touched_.clear();
  event_flips_ = 0;
  ++tau_;
  const int id = it->second;
  key_to_id_.erase(it);
  EdgeRec& rec = edges_[id];
  const int p = rec.piece;
  const int og_edge = rec.og_edge;
  const int pr_edge = rec.pr_edge;
  {
    int head = rec.tail == rec.u ? rec.v : rec.u;
    imbalance_[rec.tail] += 1;
    imbalance_[head] -= 1;
  }
  ReleaseEdgeFromPiece(id);
  rec.alive = false;
  PieceState& ps = *pieces_[p];
  ++ps.deletions;

  if (ps.deletions >= ps.budget) {
    ++dissolves_;
    std::vector<int> survivors(ps.live_edges.begin(), ps.live_edges.end());
    for (int s : survivors) ReleaseEdgeFromPiece(s);
    KillPiece(p);
    InternalInsert(survivors);
    return Finish();
  }

  PruneResult pr = ps.pruner->Prune(pr_edge);
  for (int x : pr.removed_vertices) pruned_vol_cum_ += ps.pruner->vol0(x);
  ReorientLedger led = PruneAndReorient(ps.og, og_edge, pr.removed_vertices);
  event_flips_ += led.flips;
  if (record_ledgers_) {
    int64_t vol = 0;
    for (int x : pr.removed_vertices) vol += ps.pruner->vol0(x);
    ledgers_.push_back({led, ps.pruner->m0(), vol});
  }
  std::vector<int> released;
  for (int e : pr.removed_edges) released.push_back(ps.pr_global[e]);
  std::sort(released.begin(), released.end());
  for (int s : released) ReleaseEdgeFromPiece(s);
  for (int s : ps.live_edges) {
    const EdgeRec& r = edges_[s];
    SetTail(s, ps.vertices[ps.og.edge(r.og_edge).tail()]);
  }
  InternalInsert(released);
  return Finish();
}

EngineInvariantReport OrientationEngine::CheckInvariants() const {
  EngineInvariantReport rep;
  auto fail = [&](const std::string& msg) {
    if (rep.ok) {
      rep.ok = false;
      rep.message = msg;
    }
  };
  int64_t total = 0;
  for (size_t i = 0; i < levels_.size(); ++i) {
    const Level& lv = levels_[i];
    total += static_cast<int64_t>(lv.edges.size());
    if (static_cast<int64_t>(lv.edges.size()) > (int64_t{1} << i)) {
      fail("level " + std::to_string(i) + " holds " + std::to_string(lv.edges.size()) +
           " edges");
    }
    for (int id : lv.edges) {
      if (!lv.snapshot.count(id)) fail("level " + std::to_string(i) + " edge outside snapshot");
    }
    std::map<int, int> member;
    for (int p : lv.pieces) {
      const PieceState& ps = *pieces_[p];
      if (!ps.alive) continue;
      for (int v : ps.vertices) ++member[v];
    }
    for (const auto& [v, c] : member) {
      rep.max_membership = std::max(rep.max_membership, c);
      if (c > MembershipBound()) {
        fail("vertex " + std::to_string(v) + " in " + std::to_string(c) + " pieces of level " +
             std::to_string(i));
      }
    }
  }
  if (total != num_edges()) fail("level sizes do not cover the live edges");

  std::vector<int64_t> imb(n_, 0);
  for (size_t id = 0; id < edges_.size(); ++id) {
    const EdgeRec& r = edges_[id];
    if (!r.alive) continue;
    int head = r.tail == r.u ? r.v : r.u;
    --imb[r.tail];
    ++imb[head];
    if (r.level < 0 || r.piece < 0) {
      fail("live edge " + std::to_string(id) + " without a piece");
      continue;
    }
    const PieceState& ps = *pieces_[r.piece];
    if (!ps.alive || ps.level != r.level || !ps.live_edges.count(static_cast<int>(id)) ||
        !levels_[r.level].edges.count(static_cast<int>(id))) {
      fail("edge " + std::to_string(id) + " has stale piece bookkeeping");
      continue;
    }
    if (ps.vertices[ps.og.edge(r.og_edge).tail()] != r.tail) {
      fail("edge " + std::to_string(id) + " direction differs from its piece");
    }
  }
  if (imb != imbalance_) fail("imbalance bookkeeping drifted");

  for (const auto& pp : pieces_) {
    const PieceState& ps = *pp;
    if (!ps.alive) continue;
    if (!ps.certified) ++rep.flagged_pieces;
    for (int id : ps.live_edges) {
      if (!std::binary_search(ps.snapshot.begin(), ps.snapshot.end(), id)) {
        fail("piece edge outside its creation snapshot");
      }
    }
    LocalOptReport lo = VerifyLocalOpt(ps.og);
    if (!lo.ok) fail("piece orientation is not a local-search fixpoint");
  }
  return rep;
}

DedupOrientation::DedupOrientation(const OrientationConfig& config)
    : n_(config.n), inner_(config) {
  imbalance_.assign(n_, 0);
}

void DedupOrientation::Orient(Copies& c, int a, int b, int64_t dplus, int64_t dminus) {
  c.plus += dplus;
  c.minus += dminus;
  // a -> b copies add +1 at b.
  imbalance_[b] += dplus - dminus;
  imbalance_[a] -= dplus - dminus;
}

int64_t DedupOrientation::Apply(const EngineEventResult& r) {
  int64_t flips = 0;
  for (const DirectionChange& ch : r.changed) {
    Copies& c = copies_[{ch.u, ch.v}];
    if (ch.tail == ch.u) {
      Orient(c, ch.u, ch.v, +1, -1);
    } else {
      Orient(c, ch.u, ch.v, -1, +1);
    }
    ++flips;
  }
  return flips;
}

DedupEventResult DedupOrientation::Insert(int u, int v) {
  if (u == v) throw SelfLoop("vertex " + std::to_string(u));
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw InvalidArgument("vertex out of range");
  int a = std::min(u, v), b = std::max(u, v);
  Copies& c = copies_[{a, b}];
  DedupEventResult res;
  if ((c.plus + c.minus) % 2 == 0) {
    EngineEventResult r = inner_.InsertEdge(a, b);
    Copies& cc = copies_[{a, b}];
    if (inner_.Tail(a, b) == a) {
      Orient(cc, a, b, 1, 0);
    } else {
      Orient(cc, a, b, 0, 1);
    }
    res.flips = r.flips;
    res.recourse = Apply(r);
  } else {
    if (inner_.Tail(a, b) == a) {
      Orient(c, a, b, 0, 1);
    } else {
      Orient(c, a, b, 1, 0);
    }
    EngineEventResult r = inner_.DeleteEdge(a, b);
    res.flips = r.flips;
    res.recourse = Apply(r);
  }
  cum_recourse_ += res.recourse;
  return res;
}

DedupEventResult DedupOrientation::Delete(int u, int v) {
  int a = std::min(u, v), b = std::max(u, v);
  auto it = copies_.find({a, b});
  if (it == copies_.end() || it->second.plus + it->second.minus == 0) {
    throw UnknownEdge("edge " + std::to_string(a) + "-" + std::to_string(b));
  }
  DedupEventResult res;
  Copies& c = it->second;
  if ((c.plus + c.minus) % 2 == 1) {
    if (inner_.Tail(a, b) == a) {
      Orient(c, a, b, -1, 0);
    } else {
      Orient(c, a, b, 0, -1);
    }
    EngineEventResult r = inner_.DeleteEdge(a, b);
    res.flips = r.flips;
    res.recourse = Apply(r);
  } else {
    Orient(c, a, b, -1, 0);
    EngineEventResult r = inner_.InsertEdge(a, b);
    res.flips = r.flips;
    res.recourse = Apply(r);
    Copies& cc = copies_[{a, b}];
    // Remaining copies now sum to -1; match the inner direction.
    if (inner_.Tail(a, b) == a) {
      Orient(cc, a, b, +1, -1);
      ++res.recourse;
    }
  }
  Copies& fin = copies_[{a, b}];
  if (fin.plus + fin.minus == 0) copies_.erase({a, b});
  cum_recourse_ += res.recourse;
  return res;
}

int64_t DedupOrientation::MaxDiscrepancy() const {
  int64_t d = 0;
  for (int64_t x : imbalance_) d = std::max(d, std::abs(x));
  return d;
}

int64_t DedupOrientation::Multiplicity(int u, int v) const {
  auto it = copies_.find({std::min(u, v), std::max(u, v)});
  return it == copies_.end() ? 0 : it->second.plus + it->second.minus;
}

int64_t DedupOrientation::ForwardCopies(int u, int v) const {
  auto it = copies_.find({std::min(u, v), std::max(u, v)});
  return it == copies_.end() ? 0 : it->second.plus;
}

EngineInvariantReport DedupOrientation::CheckInvariants(bool include_inner) const {
  EngineInvariantReport rep;
  if (include_inner) rep = inner_.CheckInvariants();
  auto fail = [&](const std::string& msg) {
    if (rep.ok) {
      rep.ok = false;
      rep.message = msg;
    }
  };
  std::vector<int64_t> imb(n_, 0);
  int64_t odd = 0;
  for (const auto& [key, c] : copies_) {
    auto [a, b] = key;
    if (c.plus < 0 || c.minus < 0) fail("negative copy count");
    imb[b] += c.plus - c.minus;
    imb[a] -= c.plus - c.minus;
    int64_t total = c.plus + c.minus;
    std::string name = std::to_string(a) + "-" + std::to_string(b);
    if (total % 2 == 0) {
      if (inner_.HasEdge(a, b)) fail("even pair " + name + " present in the inner engine");
      if (c.plus != c.minus) fail("even pair " + name + " is unbalanced");
    } else {
      ++odd;
      if (!inner_.HasEdge(a, b)) {
        fail("odd pair " + name + " missing from the inner engine");
        continue;
      }
      int64_t sigma = inner_.Tail(a, b) == a ? 1 : -1;
      if (c.plus - c.minus != sigma) fail("odd pair " + name + " does not follow the inner edge");
    }
  }
  if (odd != inner_.num_edges()) fail("inner engine holds edges without odd multiplicity");
  if (imb != imbalance_) fail("copy imbalance bookkeeping drifted");
  return rep;
}

}  // namespace dynbal
