#include "dynbal/oriented_graph.h"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "dynbal/errors.h"

namespace dynbal {

OrientedGraph::OrientedGraph(int num_vertices) { EnsureVertices(num_vertices); }

int OrientedGraph::AddVertex() {
  incident_.emplace_back();
  imbalance_.push_back(0);
  return num_vertices() - 1;
}

void OrientedGraph::EnsureVertices(int n) {
  if (n > num_vertices()) {
    incident_.resize(n);
    imbalance_.resize(n, 0);
  }
}

void OrientedGraph::CheckVertex(int v) const {
  if (v < 0 || v >= num_vertices()) {
    throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
  }
}

void OrientedGraph::CheckEdge(int e) const {
  if (!alive(e)) throw UnknownEdge("edge " + std::to_string(e));
}

void OrientedGraph::AddToBalance(int v, int64_t delta) {
  int64_t old = imbalance_[v];
  imbalance_[v] = old + delta;
  phi_ += imbalance_[v] * imbalance_[v] - old * old;
}

int OrientedGraph::AddEdge(int tail, int head) {
  CheckVertex(tail);
  CheckVertex(head);
  if (tail == head) throw SelfLoop("vertex " + std::to_string(tail));
  int e = edge_capacity();
  edges_.push_back({tail, head, true, true});
  pos_a_.push_back(static_cast<int>(incident_[tail].size()));
  incident_[tail].push_back(e);
  pos_b_.push_back(static_cast<int>(incident_[head].size()));
  incident_[head].push_back(e);
  AddToBalance(tail, -1);
  AddToBalance(head, +1);
  ++live_edges_;
  return e;
}

void OrientedGraph::RemoveEdge(int e) {
  CheckEdge(e);
  Edge& ed = edges_[e];
  auto detach = [&](int v, int pos) {
    std::vector<int>& inc = incident_[v];
    int last = inc.back();
    inc[pos] = last;
    inc.pop_back();
    if (last != e) {
      if (edges_[last].a == v) {
        pos_a_[last] = pos;
      } else {
        pos_b_[last] = pos;
      }
    }
  };
  detach(ed.a, pos_a_[e]);
  detach(ed.b, pos_b_[e]);
  AddToBalance(ed.tail(), +1);
  AddToBalance(ed.head(), -1);
  ed.alive = false;
  --live_edges_;
}

void OrientedGraph::FlipEdge(int e) {
  CheckEdge(e);
  Edge& ed = edges_[e];
  AddToBalance(ed.tail(), +2);
  AddToBalance(ed.head(), -2);
  ed.forward = !ed.forward;
}

void OrientedGraph::SetDirection(int e, int tail) {
  CheckEdge(e);
  if (edges_[e].tail() != tail) FlipEdge(e);
}

int64_t OrientedGraph::RecomputePhi() const {
  std::vector<int64_t> imb(num_vertices(), 0);
  for (const Edge& ed : edges_) {
    if (!ed.alive) continue;
    --imb[ed.tail()];
    ++imb[ed.head()];
  }
  int64_t p = 0;
  for (int64_t x : imb) p += x * x;
  return p;
}

int64_t OrientedGraph::MaxDiscrepancy() const {
  int64_t d = 0;
  for (int64_t x : imbalance_) d = std::max(d, std::abs(x));
  return d;
}

std::vector<int> OrientedGraph::LiveEdges() const {
  std::vector<int> out;
  out.reserve(live_edges_);
  for (int e = 0; e < edge_capacity(); ++e) {
    if (edges_[e].alive) out.push_back(e);
  }
  return out;
}

void OrientedGraph::Dump(std::ostream& out) const {
  nlohmann::json meta;
  meta["num_vertices"] = num_vertices();
  meta["num_edges"] = num_edges();
  out << "# " << meta.dump() << "\n";
  for (const Edge& ed : edges_) {
    if (!ed.alive) continue;
    out << ed.a << " " << ed.b << " " << (ed.forward ? 1 : -1) << "\n";
  }
}

std::string OrientedGraph::DumpString() const {
  std::ostringstream os;
  Dump(os);
  return os.str();
}

OrientedGraph OrientedGraph::Load(std::istream& in) {
  OrientedGraph g;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (body.find('{') == std::string::npos) continue;
      try {
        nlohmann::json meta = nlohmann::json::parse(body);
        if (meta.contains("num_vertices")) g.EnsureVertices(meta["num_vertices"].get<int>());
      } catch (const nlohmann::json::exception& ex) {
        throw ParseError("line " + std::to_string(line_no) + ": " + ex.what());
      }
      continue;
    }
    std::istringstream ls(line);
    long long u, v;
    int dir;
    if (!(ls >> u >> v >> dir) || (dir != 1 && dir != -1) || u < 0 || v < 0) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'u v dir'");
    }
    g.EnsureVertices(static_cast<int>(std::max(u, v) + 1));
    int e = g.AddEdge(static_cast<int>(u), static_cast<int>(v));
    if (dir == -1) g.FlipEdge(e);
  }
  return g;
}

OrientedGraph OrientedGraph::LoadString(const std::string& text) {
  std::istringstream is(text);
  return Load(is);
}

}  // namespace dynbal
