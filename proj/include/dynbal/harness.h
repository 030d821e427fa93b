#ifndef DYNBAL_HARNESS_H_
#define DYNBAL_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dynbal/expander.h"
#include "dynbal/instances.h"
#include "dynbal/oriented_graph.h"

namespace dynbal {

// Plain key=value experiment description. Unknown keys are rejected.
struct ExperimentConfig {
  std::string algo = "dbg";  // dbg | orient | dyadic | local-search-variant
  // vector-box | vector-unit | vector-sparse | orthogonal | graph-random | forest
  // | file; gen also accepts pm1-localopt | 2d-localopt | layered | random-regular
  std::string workload = "vector-box";
  int n = 8;        // dimension or vertex count
  int t = 1024;     // events
  uint64_t seed = 1;
  double phi = -1.0;
  double gamma = -1.0;
  double insert_prob = -1.0;  // < 0: workload default
  int sparsity = 1;
  int trials = 1;
  int path_len = 1;
  int pad_width = -1;
  int k = 4;          // layered
  int layer_len = 1;  // layered
  int degree = 10;    // random-regular
  int initial_level = 3;
  bool check_invariants = false;
  std::string stream;  // input stream for workload=file
  std::string out;     // output prefix

  double EffectiveInsertProb() const;
};

ExperimentConfig ParseConfig(const std::string& text);
ExperimentConfig LoadConfig(const std::string& path);
// Applies one key=value assignment.
void ApplyConfigEntry(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void ValidateConfig(const ExperimentConfig& cfg);

// JSON-lines streams.
void WriteVectorStream(std::ostream& out, const std::vector<VectorEvent>& events);
void WriteGraphStream(std::ostream& out, const std::vector<GraphEvent>& events);
std::vector<VectorEvent> ReadVectorStream(std::istream& in);
std::vector<GraphEvent> ReadGraphStream(std::istream& in);
bool IsGraphStream(const std::string& first_line);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& content);
uint64_t Fnv1a64(const std::string& data);
std::string HexHash(uint64_t h);

struct TrialSummary {
  int64_t events = 0;
  double max_disc = 0.0;
  double amortized_recourse = 0.0;
  double wall_time = 0.0;
  std::map<std::string, double> extra;
};

struct TrialResult {
  std::string csv;
  TrialSummary summary;
};

std::string CsvHeader(const std::string& algo);
std::string SummaryJson(const TrialSummary& s);

// One replay with the given seed (the config seed is ignored).
TrialResult RunTrial(const ExperimentConfig& cfg, uint64_t seed);
// cfg.trials replays with seeds seed, seed+1, ...; ordered by trial index.
std::vector<TrialResult> RunExperiment(const ExperimentConfig& cfg);
// Writes <out>.csv and <out>.json (one trial) or <out>.<i>.csv and <out>.json.
void WriteExperimentOutputs(const ExperimentConfig& cfg, const std::vector<TrialResult>& results);

// gen: generated content and its file kind ("vector-stream", "graph-stream",
// "vector-instance", "graph-dump").
struct Generated {
  std::string kind;
  std::string content;
};
Generated Generate(const ExperimentConfig& cfg);

std::string VectorInstanceJson(const IntVectorInstance& inst);
std::string VectorInstanceJson(const VectorInstance& inst);

struct VerifyReport {
  bool pass = true;
  std::string json;
};
// kinds: vector-local-opt, graph-local-opt, expander-cert, dbg-invariants,
// dedup-invariants.
VerifyReport Verify(const std::string& kind, const std::string& content,
                    const ExperimentConfig& cfg);

UGraph ToUGraph(const OrientedGraph& g);
std::string DecomposeJson(const UGraph& g, const DecomposeOptions& opt);
VerifyReport CertifyJson(const UGraph& g, double phi, double gamma);

}  // namespace dynbal

#endif  // DYNBAL_HARNESS_H_
