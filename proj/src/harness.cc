#include "dynbal/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dynbal/dbg_engine.h"
#include "dynbal/dyadic.h"
#include "dynbal/errors.h"
#include "dynbal/local_search.h"
#include "dynbal/orientation_engine.h"

namespace dynbal {

using nlohmann::json;

namespace {

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int64_t ParseInt(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
  }
}

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  }
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects a boolean, got '" + v + "'");
}

int AsInt(const std::string& key, const std::string& v) {
  int64_t x = ParseInt(key, v);
  if (x < INT32_MIN || x > INT32_MAX) throw ConfigError("key '" + key + "' out of range");
  return static_cast<int>(x);
}

bool IsVectorWorkload(const std::string& w) {
  return w == "vector-box" || w == "vector-unit" || w == "vector-sparse" || w == "orthogonal";
}
bool IsGraphWorkload(const std::string& w) { return w == "graph-random" || w == "forest"; }

std::string Num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

int PathLength(const ExperimentConfig& cfg, int n) {
  if (cfg.path_len > 0) return cfg.path_len;
  return std::max(1, CeilLog2(std::max(2, n)));
}

// Exit code for an error raised while replaying.
int ClassifyEngineError(const Error& e) {
  if (dynamic_cast<const InvariantViolation*>(&e) || dynamic_cast<const NumericalFailure*>(&e) ||
      dynamic_cast<const DecompositionOverflow*>(&e) ||
      dynamic_cast<const ConvergenceFailure*>(&e) || dynamic_cast<const BudgetExceeded*>(&e) ||
      dynamic_cast<const IndexOutOfPhase*>(&e)) {
    return 3;
  }
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  return 2;
}

VectorKind KindOf(const std::string& w) {
  if (w == "vector-unit") return VectorKind::kUnitL2;
  if (w == "vector-sparse") return VectorKind::kSparsePm1;
  return VectorKind::kUniformBox;
}

std::vector<VectorEvent> LoadOrGenVectors(const ExperimentConfig& cfg, uint64_t seed) {
  if (cfg.workload == "file") {
    std::istringstream in(ReadFile(cfg.stream));
    return ReadVectorStream(in);
  }
  VectorStreamSpec spec;
  spec.dim = cfg.n;
  spec.t = cfg.t;
  spec.seed = seed;
  spec.kind = KindOf(cfg.workload);
  spec.sparsity = cfg.sparsity;
  spec.insert_prob = cfg.EffectiveInsertProb();
  return GenVectorStream(spec);
}

std::vector<GraphEvent> LoadOrGenGraph(const ExperimentConfig& cfg, uint64_t seed) {
  if (cfg.workload == "file") {
    std::istringstream in(ReadFile(cfg.stream));
    return ReadGraphStream(in);
  }
  if (cfg.workload == "forest") {
    return GenForestStream(cfg.n, cfg.t, seed, cfg.EffectiveInsertProb());
  }
  return GenGraphWorkload(cfg.n, cfg.t, seed, cfg.EffectiveInsertProb());
}

int InferDim(const std::vector<VectorEvent>& events, int fallback) {
  for (const auto& e : events) {
    if (e.insert) return static_cast<int>(e.v.size());
  }
  return fallback;
}

int InferVertices(const std::vector<GraphEvent>& events, int fallback) {
  int n = fallback;
  for (const auto& e : events) n = std::max({n, e.u + 1, e.v + 1});
  return n;
}

template <typename Fn>
void Guarded(int64_t event, Fn&& fn) {
  try {
    fn();
  } catch (const ReplayError&) {
    throw;
  } catch (const Error& e) {
    throw ReplayError(event, ClassifyEngineError(e), e.what());
  }
}

TrialResult RunDbg(const ExperimentConfig& cfg, uint64_t seed) {
  TrialResult res;
  std::vector<VectorEvent> events;
  const bool adaptive = cfg.workload == "orthogonal";
  if (!adaptive) events = LoadOrGenVectors(cfg, seed);
  const int dim = adaptive ? 2 : InferDim(events, cfg.n);
  const int64_t total = adaptive ? cfg.t : static_cast<int64_t>(events.size());
  DynamicBalancer eng(dim, seed, cfg.initial_level);
  std::ostringstream csv;
  csv << CsvHeader("dbg");
  int max_changed = 0;
  double max_ratio = 0.0;
  for (int64_t k = 0; k < total; ++k) {
    bool insert = true;
    Guarded(k, [&] {
      DbgEventStats st;
      if (adaptive) {
        st = eng.Insert(k, OrthogonalUnit(eng.SignedSum()));
      } else if (events[k].insert) {
        st = eng.Insert(events[k].id, events[k].v);
      } else {
        insert = false;
        st = eng.Delete(events[k].id);
      }
      if (!st.rebuilt) {
        const int bound = eng.ChangedCoordBound();
        if (st.changed_coords > bound) {
          throw InvariantViolation("changed coordinates " + std::to_string(st.changed_coords) +
                                   " exceed " + std::to_string(bound));
        }
        max_changed = std::max(max_changed, st.changed_coords);
        max_ratio = std::max(max_ratio, static_cast<double>(st.changed_coords) / bound);
      }
      if (cfg.check_invariants) {
        DbgInvariantReport rep = CheckDbgInvariants(eng.tree());
        if (!rep.ok) throw InvariantViolation(rep.message);
      }
      double disc = eng.Discrepancy();
      res.summary.max_disc = std::max(res.summary.max_disc, disc);
      csv << k + 1 << ',' << (insert ? "insert" : "delete") << ',' << Num(disc) << ','
          << st.changed_coords << ',' << st.recourse << ',' << eng.cumulative_recourse() << ','
          << eng.rebuilds() << ',' << eng.live() << '\n';
    });
  }
  res.csv = csv.str();
  res.summary.events = total;
  if (total > 0) {
    res.summary.amortized_recourse = static_cast<double>(eng.cumulative_recourse()) / total;
  }
  if (total >= 2) {
    res.summary.extra["c"] = res.summary.amortized_recourse / (dim * std::log2(double(total)));
  }
  res.summary.extra["rebuilds"] = static_cast<double>(eng.rebuilds());
  res.summary.extra["max_changed_coords"] = max_changed;
  res.summary.extra["max_changed_ratio"] = max_ratio;
  res.summary.extra["dim"] = dim;
  return res;
}

TrialResult RunDyadic(const ExperimentConfig& cfg, uint64_t seed) {
  TrialResult res;
  std::vector<VectorEvent> events;
  const bool adaptive = cfg.workload == "orthogonal";
  if (!adaptive) events = LoadOrGenVectors(cfg, seed);
  const int dim = adaptive ? 2 : InferDim(events, cfg.n);
  const int64_t total = adaptive ? cfg.t : static_cast<int64_t>(events.size());
  DyadicResigner eng(dim, seed);
  std::ostringstream csv;
  csv << CsvHeader("dyadic");
  int64_t cum = 0;
  for (int64_t k = 0; k < total; ++k) {
    Guarded(k, [&] {
      ResignRange r;
      if (adaptive) {
        r = eng.Insert(OrthogonalUnit(eng.signed_sum()));
      } else {
        if (!events[k].insert) throw InvalidArgument("dyadic streams are insert-only");
        r = eng.Insert(events[k].v);
      }
      cum += r.end - r.begin - 1;
      const double disc = eng.Discrepancy();
      if (disc > eng.PrefixBound() + 1e-9) {
        throw InvariantViolation("prefix discrepancy " + Num(disc) + " exceeds " +
                                 Num(eng.PrefixBound()));
      }
      if (eng.max_resign_count() > CeilLog2(eng.size())) {
        throw InvariantViolation("resign count above ceil(log2 t)");
      }
      res.summary.max_disc = std::max(res.summary.max_disc, disc);
      csv << k + 1 << ',' << Num(disc) << ',' << (r.end - r.begin - 1) << ',' << cum << ','
          << Num(r.disc) << ',' << Num(eng.PrefixBound()) << ',' << eng.intervals().size()
          << '\n';
    });
  }
  res.csv = csv.str();
  res.summary.events = total;
  if (total > 0) res.summary.amortized_recourse = static_cast<double>(cum) / total;
  res.summary.extra["max_interval_disc"] = eng.max_interval_disc();
  res.summary.extra["max_resign_count"] = eng.max_resign_count();
  res.summary.extra["sign_changes"] = static_cast<double>(eng.total_sign_changes());
  return res;
}

TrialResult RunOrient(const ExperimentConfig& cfg, uint64_t seed) {
  TrialResult res;
  std::vector<GraphEvent> events = LoadOrGenGraph(cfg, seed);
  OrientationConfig oc;
  oc.n = InferVertices(events, cfg.n);
  oc.phi = cfg.phi;
  oc.gamma = cfg.gamma;
  oc.seed = seed;
  DedupOrientation eng(oc);
  std::ostringstream csv;
  csv << CsvHeader("orient");
  int64_t cum = 0, inner_flips = 0;
  int max_membership = 0;
  for (int64_t k = 0; k < static_cast<int64_t>(events.size()); ++k) {
    Guarded(k, [&] {
      const GraphEvent& e = events[k];
      DedupEventResult r = e.insert ? eng.Insert(e.u, e.v) : eng.Delete(e.u, e.v);
      cum += r.recourse;
      inner_flips += r.flips;
      if (cfg.check_invariants) {
        EngineInvariantReport rep = eng.CheckInvariants(true);
        if (!rep.ok) throw InvariantViolation(rep.message);
        max_membership = std::max(max_membership, rep.max_membership);
      }
      const int64_t disc = eng.MaxDiscrepancy();
      res.summary.max_disc = std::max(res.summary.max_disc, static_cast<double>(disc));
      const OrientationEngine& in = eng.inner();
      csv << k + 1 << ',' << disc << ',' << r.recourse << ',' << cum << ','
          << in.level_rebuilds() << ',' << in.pieces_live() << ',' << in.pruned_volume() << ','
          << r.flips << '\n';
    });
  }
  res.csv = csv.str();
  res.summary.events = static_cast<int64_t>(events.size());
  if (!events.empty()) res.summary.amortized_recourse = static_cast<double>(cum) / events.size();
  res.summary.extra["inner_flips"] = static_cast<double>(inner_flips);
  res.summary.extra["level_rebuilds"] = static_cast<double>(eng.inner().level_rebuilds());
  res.summary.extra["dissolves"] = static_cast<double>(eng.inner().dissolves());
  res.summary.extra["pruned_volume"] = static_cast<double>(eng.inner().pruned_volume());
  if (cfg.check_invariants) res.summary.extra["max_membership"] = max_membership;
  return res;
}

TrialResult RunPathSearch(const ExperimentConfig& cfg, uint64_t seed) {
  TrialResult res;
  std::vector<GraphEvent> events = LoadOrGenGraph(cfg, seed);
  const int n = InferVertices(events, cfg.n);
  const int len = PathLength(cfg, n);
  OrientedGraph g(n);
  std::map<std::pair<int, int>, std::vector<int>> ids;
  std::ostringstream csv;
  csv << CsvHeader("local-search-variant");
  int64_t cum = 0;
  for (int64_t k = 0; k < static_cast<int64_t>(events.size()); ++k) {
    Guarded(k, [&] {
      const GraphEvent& e = events[k];
      auto key = std::minmax(e.u, e.v);
      if (e.insert) {
        ids[key].push_back(g.AddEdge(e.u, e.v));
      } else {
        auto it = ids.find(key);
        if (it == ids.end() || it->second.empty()) {
          throw UnknownEdge(std::to_string(e.u) + "-" + std::to_string(e.v));
        }
        g.RemoveEdge(it->second.back());
        it->second.pop_back();
      }
      LocalSearchStats st = PathLocalSearch(g, len);
      cum += st.flips;
      if (cfg.check_invariants && !VerifyLocalOpt(g, len).ok) {
        throw InvariantViolation("orientation is not a fixpoint");
      }
      const int64_t disc = g.MaxDiscrepancy();
      res.summary.max_disc = std::max(res.summary.max_disc, static_cast<double>(disc));
      csv << k + 1 << ',' << disc << ',' << st.flips << ',' << cum << ',' << g.phi() << '\n';
    });
  }
  res.csv = csv.str();
  res.summary.events = static_cast<int64_t>(events.size());
  if (!events.empty()) res.summary.amortized_recourse = static_cast<double>(cum) / events.size();
  res.summary.extra["path_len"] = len;
  return res;
}

json ParseJsonLine(const std::string& line, int line_no) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
  }
}

}  // namespace

double ExperimentConfig::EffectiveInsertProb() const {
  if (insert_prob >= 0.0) return insert_prob;
  if (algo == "dyadic") return 1.0;
  if (IsGraphWorkload(workload)) return 0.6;
  return 2.0 / 3.0;
}

void ApplyConfigEntry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "algo") {
    cfg.algo = value;
  } else if (key == "workload") {
    cfg.workload = value;
  } else if (key == "n") {
    cfg.n = AsInt(key, value);
  } else if (key == "T" || key == "t") {
    cfg.t = AsInt(key, value);
  } else if (key == "seed") {
    cfg.seed = static_cast<uint64_t>(ParseInt(key, value));
  } else if (key == "phi") {
    cfg.phi = ParseDouble(key, value);
  } else if (key == "gamma") {
    cfg.gamma = ParseDouble(key, value);
  } else if (key == "insert_prob") {
    cfg.insert_prob = ParseDouble(key, value);
  } else if (key == "sparsity") {
    cfg.sparsity = AsInt(key, value);
  } else if (key == "trials") {
    cfg.trials = AsInt(key, value);
  } else if (key == "path_len") {
    cfg.path_len = AsInt(key, value);
  } else if (key == "pad_width") {
    cfg.pad_width = AsInt(key, value);
  } else if (key == "k") {
    cfg.k = AsInt(key, value);
  } else if (key == "layer_len") {
    cfg.layer_len = AsInt(key, value);
  } else if (key == "degree") {
    cfg.degree = AsInt(key, value);
  } else if (key == "initial_level") {
    cfg.initial_level = AsInt(key, value);
  } else if (key == "check_invariants") {
    cfg.check_invariants = ParseBool(key, value);
  } else if (key == "stream") {
    cfg.stream = value;
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

ExperimentConfig ParseConfig(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    ApplyConfigEntry(cfg, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

void ValidateConfig(const ExperimentConfig& cfg) {
  static const char* kAlgos[] = {"dbg", "orient", "dyadic", "local-search-variant"};
  if (std::find(std::begin(kAlgos), std::end(kAlgos), cfg.algo) == std::end(kAlgos)) {
    throw ConfigError("unknown algo '" + cfg.algo + "'");
  }
  const bool vec_algo = cfg.algo == "dbg" || cfg.algo == "dyadic";
  if (cfg.workload == "file") {
    if (cfg.stream.empty()) throw ConfigError("workload=file needs stream=<path>");
  } else if (vec_algo && !IsVectorWorkload(cfg.workload)) {
    throw ConfigError("algo " + cfg.algo + " needs a vector workload");
  } else if (!vec_algo && !IsGraphWorkload(cfg.workload)) {
    throw ConfigError("algo " + cfg.algo + " needs a graph workload");
  }
  if (cfg.workload == "orthogonal" && cfg.n != 2) {
    throw ConfigError("the orthogonal adversary is planar (n = 2)");
  }
  if (cfg.n <= 0) throw ConfigError("n must be positive");
  if (cfg.t < 0) throw ConfigError("T must be nonnegative");
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.insert_prob > 1.0) throw ConfigError("insert_prob must be at most 1");
  if (cfg.algo == "dyadic" && cfg.EffectiveInsertProb() < 1.0) {
    throw ConfigError("dyadic streams are insert-only");
  }
  if (cfg.workload == "vector-sparse" && (cfg.sparsity < 1 || cfg.sparsity > cfg.n)) {
    throw ConfigError("sparsity must lie in [1, n]");
  }
}

void WriteVectorStream(std::ostream& out, const std::vector<VectorEvent>& events) {
  for (const auto& e : events) {
    json j;
    j["op"] = e.insert ? "insert" : "delete";
    j["id"] = e.id;
    if (e.insert) j["v"] = e.v;
    out << j.dump() << '\n';
  }
}

void WriteGraphStream(std::ostream& out, const std::vector<GraphEvent>& events) {
  for (const auto& e : events) {
    json j;
    j["op"] = e.insert ? "insert" : "delete";
    j["u"] = e.u;
    j["v"] = e.v;
    out << j.dump() << '\n';
  }
}

bool IsGraphStream(const std::string& first_line) {
  json j = ParseJsonLine(first_line, 1);
  return j.contains("u");
}

std::vector<VectorEvent> ReadVectorStream(std::istream& in) {
  std::vector<VectorEvent> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    json j = ParseJsonLine(line, line_no);
    try {
      VectorEvent e;
      const std::string op = j.at("op").get<std::string>();
      if (op != "insert" && op != "delete") throw ParseError("bad op '" + op + "'");
      e.insert = op == "insert";
      e.id = j.at("id").get<int64_t>();
      if (e.insert) e.v = j.at("v").get<std::vector<double>>();
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ParseError("line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

std::vector<GraphEvent> ReadGraphStream(std::istream& in) {
  std::vector<GraphEvent> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    json j = ParseJsonLine(line, line_no);
    try {
      GraphEvent e;
      const std::string op = j.at("op").get<std::string>();
      if (op != "insert" && op != "delete") throw ParseError("bad op '" + op + "'");
      e.insert = op == "insert";
      e.u = j.at("u").get<int>();
      e.v = j.at("v").get<int>();
      if (e.u < 0 || e.v < 0) throw ParseError("negative vertex");
      out.push_back(e);
    } catch (const json::exception& ex) {
      throw ParseError("line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

uint64_t Fnv1a64(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string HexHash(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string CsvHeader(const std::string& algo) {
  if (algo == "dbg") return "t,op,max_disc,changed_coords,recourse,cum_recourse,rebuilds,live\n";
  if (algo == "dyadic") {
    return "t,max_disc,resigned,cum_resigns,call_disc,prefix_bound,intervals\n";
  }
  if (algo == "orient") {
    return "t,max_disc,flips_this_event,cum_recourse,level_rebuilds,pieces_live,"
           "pruned_vol_cum,inner_flips\n";
  }
  if (algo == "local-search-variant") return "t,max_disc,flips_this_event,cum_flips,phi\n";
  throw ConfigError("unknown algo '" + algo + "'");
}

namespace {

json SummaryObject(const TrialSummary& s) {
  json j;
  j["events"] = s.events;
  j["max_disc"] = s.max_disc;
  j["amortized_recourse"] = s.amortized_recourse;
  j["wall_time"] = s.wall_time;
  for (const auto& [k, v] : s.extra) j[k] = v;
  return j;
}

}  // namespace

std::string SummaryJson(const TrialSummary& s) { return SummaryObject(s).dump(2) + "\n"; }

TrialResult RunTrial(const ExperimentConfig& cfg, uint64_t seed) {
  ValidateConfig(cfg);
  auto start = std::chrono::steady_clock::now();
  TrialResult r;
  if (cfg.algo == "dbg") {
    r = RunDbg(cfg, seed);
  } else if (cfg.algo == "dyadic") {
    r = RunDyadic(cfg, seed);
  } else if (cfg.algo == "orient") {
    r = RunOrient(cfg, seed);
  } else {
    r = RunPathSearch(cfg, seed);
  }
  r.summary.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<TrialResult> RunExperiment(const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  const int trials = cfg.trials;
  std::vector<TrialResult> results(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < trials; i = next++) {
      try {
        results[i] = RunTrial(cfg, cfg.seed + static_cast<uint64_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers =
      std::max(1, std::min<int>(trials, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void WriteExperimentOutputs(const ExperimentConfig& cfg, const std::vector<TrialResult>& results) {
  if (cfg.out.empty()) throw ConfigError("no output prefix (out=...)");
  if (results.size() == 1) {
    WriteFile(cfg.out + ".csv", results[0].csv);
    WriteFile(cfg.out + ".json", SummaryJson(results[0].summary));
    return;
  }
  json j;
  j["trials"] = json::array();
  double max_disc = 0.0, rec = 0.0, wall = 0.0;
  for (size_t i = 0; i < results.size(); ++i) {
    WriteFile(cfg.out + "." + std::to_string(i) + ".csv", results[i].csv);
    json t = SummaryObject(results[i].summary);
    t["seed"] = cfg.seed + i;
    j["trials"].push_back(t);
    max_disc = std::max(max_disc, results[i].summary.max_disc);
    rec += results[i].summary.amortized_recourse;
    wall += results[i].summary.wall_time;
  }
  j["max_disc"] = max_disc;
  j["amortized_recourse"] = rec / results.size();
  j["wall_time"] = wall;
  WriteFile(cfg.out + ".json", j.dump(2) + "\n");
}

std::string VectorInstanceJson(const IntVectorInstance& inst) {
  json j;
  j["dim"] = inst.dim;
  j["vectors"] = inst.vectors;
  j["signs"] = inst.signs;
  return j.dump() + "\n";
}

std::string VectorInstanceJson(const VectorInstance& inst) {
  json j;
  j["dim"] = inst.dim;
  j["vectors"] = inst.vectors;
  j["signs"] = inst.signs;
  return j.dump() + "\n";
}

Generated Generate(const ExperimentConfig& cfg) {
  Generated g;
  const std::string& w = cfg.workload;
  std::ostringstream os;
  if (w == "vector-box" || w == "vector-unit" || w == "vector-sparse") {
    VectorStreamSpec spec;
    spec.dim = cfg.n;
    spec.t = cfg.t;
    spec.seed = cfg.seed;
    spec.kind = KindOf(w);
    spec.sparsity = cfg.sparsity;
    spec.insert_prob = cfg.EffectiveInsertProb();
    WriteVectorStream(os, GenVectorStream(spec));
    g.kind = "vector-stream";
  } else if (w == "graph-random" || w == "forest") {
    ExperimentConfig c = cfg;
    WriteGraphStream(os, LoadOrGenGraph(c, cfg.seed));
    g.kind = "graph-stream";
  } else if (w == "pm1-localopt") {
    os << VectorInstanceJson(GenPm1LocalOpt(cfg.n, cfg.pad_width));
    g.kind = "vector-instance";
  } else if (w == "2d-localopt") {
    os << VectorInstanceJson(Gen2dLocalOpt(cfg.t));
    g.kind = "vector-instance";
  } else if (w == "layered") {
    GenLayeredGraph(cfg.k, cfg.layer_len).graph.Dump(os);
    g.kind = "graph-dump";
  } else if (w == "random-regular") {
    UGraph u = GenRandomRegular(cfg.n, cfg.degree, cfg.seed);
    OrientedGraph og(u.n);
    for (const auto& [a, b] : u.edges) og.AddEdge(a, b);
    og.Dump(os);
    g.kind = "graph-dump";
  } else {
    throw ConfigError("workload '" + w + "' cannot be generated");
  }
  g.content = os.str();
  return g;
}

UGraph ToUGraph(const OrientedGraph& g) {
  UGraph u;
  u.n = g.num_vertices();
  for (int e : g.LiveEdges()) u.edges.emplace_back(g.edge(e).a, g.edge(e).b);
  return u;
}

std::string DecomposeJson(const UGraph& g, const DecomposeOptions& opt) {
  Decomposition d = Decompose(g, opt);
  json j;
  j["n"] = g.n;
  j["edges"] = json::array();
  for (const auto& [a, b] : g.edges) j["edges"].push_back({a, b});
  j["phi"] = d.phi;
  j["gamma"] = d.gamma;
  j["decomposition"] = json::parse(d.ToJson());
  return j.dump() + "\n";
}

VerifyReport CertifyJson(const UGraph& g, double phi, double gamma) {
  if (phi <= 0) phi = DefaultPhi(g.n);
  if (gamma <= 0) gamma = DefaultGamma(phi);
  CertReport c = CertifyPiece(g, phi, gamma);
  json j;
  j["passed"] = c.passed;
  j["weakly_regular"] = c.weakly_regular;
  j["expansion_ok"] = c.expansion_ok;
  j["measured"] = c.measured;
  j["method"] = c.method;
  j["witness"] = c.witness;
  j["phi"] = phi;
  j["gamma"] = gamma;
  return {c.passed, j.dump() + "\n"};
}

namespace {

VerifyReport VerifyVectorInstance(const std::string& content) {
  json in;
  try {
    in = json::parse(content);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  json out;
  out["kind"] = "vector-local-opt";
  try {
    bool integral = true;
    for (const auto& row : in.at("vectors")) {
      for (const auto& x : row) integral = integral && x.is_number_integer();
    }
    VectorLocalOptReport rep;
    if (integral) {
      IntVectorInstance inst;
      inst.dim = in.at("dim").get<int>();
      inst.vectors = in.at("vectors").get<std::vector<std::vector<int64_t>>>();
      inst.signs = in.at("signs").get<std::vector<int>>();
      for (const auto& v : inst.vectors) {
        if (static_cast<int>(v.size()) != inst.dim) throw ParseError("row length differs from dim");
      }
      if (inst.signs.size() != inst.vectors.size()) throw ParseError("signs length mismatch");
      rep = VerifyVectorLocalOptExact(inst);
      out["arithmetic"] = "integer";
    } else {
      VectorInstance inst;
      inst.dim = in.at("dim").get<int>();
      inst.vectors = in.at("vectors").get<std::vector<std::vector<double>>>();
      inst.signs = in.at("signs").get<std::vector<int>>();
      for (const auto& v : inst.vectors) {
        if (static_cast<int>(v.size()) != inst.dim) throw ParseError("row length differs from dim");
      }
      if (inst.signs.size() != inst.vectors.size()) throw ParseError("signs length mismatch");
      rep = VerifyVectorLocalOpt(inst, false);
      out["arithmetic"] = "double";
    }
    out["pass"] = rep.ok;
    out["violator"] = rep.violator;
    out["rows"] = in.at("vectors").size();
    return {rep.ok, out.dump() + "\n"};
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

VerifyReport Verify(const std::string& kind, const std::string& content,
                    const ExperimentConfig& cfg) {
  json out;
  out["kind"] = kind;
  if (kind == "vector-local-opt") return VerifyVectorInstance(content);
  if (kind == "graph-local-opt") {
    OrientedGraph g = OrientedGraph::LoadString(content);
    const int len = cfg.path_len > 0 ? cfg.path_len : 1;
    LocalOptReport rep = VerifyLocalOpt(g, len);
    out["pass"] = rep.ok;
    out["path_len"] = len;
    out["witness"] = json::array();
    for (int e : rep.witness) {
      const auto& ed = g.edge(e);
      out["witness"].push_back({{"line", e}, {"tail", ed.tail()}, {"head", ed.head()}});
    }
    out["max_disc"] = g.MaxDiscrepancy();
    return {rep.ok, out.dump() + "\n"};
  }
  if (kind == "expander-cert") {
    json in;
    try {
      in = json::parse(content);
      UGraph g;
      g.n = in.at("n").get<int>();
      for (const auto& e : in.at("edges")) g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      const double phi = in.at("phi").get<double>();
      const double gamma = in.at("gamma").get<double>();
      bool all = true;
      out["pieces"] = json::array();
      int idx = 0;
      for (const auto& p : in.at("decomposition").at("pieces")) {
        std::vector<int> edges = p.at("edges").get<std::vector<int>>();
        for (int e : edges) {
          if (e < 0 || e >= static_cast<int>(g.edges.size())) throw ParseError("edge index");
        }
        SubgraphMap sub = Subgraph(g, edges);
        CertReport c = CertifyPiece(sub.graph, phi, gamma);
        all = all && c.passed;
        out["pieces"].push_back({{"index", idx++},
                                 {"passed", c.passed},
                                 {"method", c.method},
                                 {"measured", c.measured}});
      }
      out["pass"] = all;
      return {all, out.dump() + "\n"};
    } catch (const json::exception& e) {
      throw ParseError(e.what());
    }
  }
  if (kind == "dbg-invariants") {
    std::istringstream in(content);
    std::vector<VectorEvent> events = ReadVectorStream(in);
    DynamicBalancer eng(InferDim(events, cfg.n), cfg.seed, cfg.initial_level);
    out["pass"] = true;
    out["events"] = events.size();
    for (size_t k = 0; k < events.size(); ++k) {
      DbgEventStats st = events[k].insert ? eng.Insert(events[k].id, events[k].v)
                                          : eng.Delete(events[k].id);
      DbgInvariantReport rep = CheckDbgInvariants(eng.tree());
      bool bound_ok = st.rebuilt || st.changed_coords <= eng.ChangedCoordBound();
      if (!rep.ok || !bound_ok) {
        out["pass"] = false;
        out["event"] = k;
        out["node"] = rep.failing_node;
        out["message"] = rep.ok ? "changed-coordinate bound exceeded" : rep.message;
        return {false, out.dump() + "\n"};
      }
    }
    return {true, out.dump() + "\n"};
  }
  if (kind == "dedup-invariants") {
    std::istringstream in(content);
    std::vector<GraphEvent> events = ReadGraphStream(in);
    OrientationConfig oc;
    oc.n = InferVertices(events, cfg.n);
    oc.phi = cfg.phi;
    oc.gamma = cfg.gamma;
    oc.seed = cfg.seed;
    DedupOrientation eng(oc);
    out["pass"] = true;
    out["events"] = events.size();
    for (size_t k = 0; k < events.size(); ++k) {
      const GraphEvent& e = events[k];
      if (e.insert) {
        eng.Insert(e.u, e.v);
      } else {
        eng.Delete(e.u, e.v);
      }
      EngineInvariantReport rep = eng.CheckInvariants(true);
      if (!rep.ok) {
        out["pass"] = false;
        out["event"] = k;
        out["message"] = rep.message;
        return {false, out.dump() + "\n"};
      }
    }
    out["max_disc"] = eng.MaxDiscrepancy();
    return {true, out.dump() + "\n"};
  }
  throw ConfigError("unknown verify kind '" + kind + "'");
}

}  // namespace dynbal
