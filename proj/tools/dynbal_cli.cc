#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynbal/errors.h"
#include "dynbal/expander.h"
#include "dynbal/harness.h"
#include "dynbal/oriented_graph.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitInvariant = 3;

struct CommonFlags {
  std::string config;
  std::string out;
  std::string algo;
  std::vector<std::string> overrides;
  long long seed = -1;
  double phi = -1.0;
  double gamma = -1.0;
  int trials = 0;
};

void AddCommon(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "key=value experiment file");
  app->add_option("--seed", f.seed, "base seed");
  app->add_option("--out", f.out, "output path or prefix");
  app->add_option("--algo", f.algo, "dbg | orient | dyadic | local-search-variant");
  app->add_option("--phi", f.phi, "expansion parameter");
  app->add_option("--gamma", f.gamma, "weak-regularity parameter");
  app->add_option("--trials", f.trials, "independent trials");
}

dynbal::ExperimentConfig BuildConfig(const CommonFlags& f) {
  dynbal::ExperimentConfig cfg;
  if (!f.config.empty()) cfg = dynbal::LoadConfig(f.config);
  for (const std::string& kv : f.overrides) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos) throw dynbal::ConfigError("expected key=value, got '" + kv + "'");
    dynbal::ApplyConfigEntry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed >= 0) cfg.seed = static_cast<uint64_t>(f.seed);
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.algo.empty()) cfg.algo = f.algo;
  if (f.phi > 0) cfg.phi = f.phi;
  if (f.gamma > 0) cfg.gamma = f.gamma;
  if (f.trials > 0) cfg.trials = f.trials;
  return cfg;
}

void Emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    dynbal::WriteFile(path, content);
  }
}

dynbal::UGraph LoadGraph(const std::string& path) {
  return dynbal::ToUGraph(dynbal::OrientedGraph::LoadString(dynbal::ReadFile(path)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic vector balancing and edge orientation toolkit"};
  app.require_subcommand(1);

  CommonFlags run_f, gen_f, ver_f, dec_f, cert_f;
  std::string verify_kind, verify_file, dec_file, cert_file;

  CLI::App* run = app.add_subcommand("run", "replay a stream through an engine");
  AddCommon(run, run_f);
  run->add_option("overrides", run_f.overrides, "key=value config overrides");

  CLI::App* gen = app.add_subcommand("gen", "write a stream or instance file");
  AddCommon(gen, gen_f);
  gen->add_option("overrides", gen_f.overrides, "key=value config overrides");

  CLI::App* ver = app.add_subcommand("verify", "check a dump, instance or stream");
  AddCommon(ver, ver_f);
  ver->add_option("--kind", verify_kind,
                  "vector-local-opt | graph-local-opt | expander-cert | dbg-invariants | "
                  "dedup-invariants")
      ->required();
  ver->add_option("--path-len", ver_f.trials, "path length for graph-local-opt");
  ver->add_option("file", verify_file, "subject file")->required();

  CLI::App* dec = app.add_subcommand("decompose", "expander decomposition of a graph dump");
  AddCommon(dec, dec_f);
  dec->add_option("file", dec_file, "graph dump")->required();

  CLI::App* cert = app.add_subcommand("certify", "certify a graph dump as one piece");
  AddCommon(cert, cert_f);
  cert->add_option("file", cert_file, "graph dump")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      dynbal::ExperimentConfig cfg = BuildConfig(run_f);
      auto results = dynbal::RunExperiment(cfg);
      if (cfg.out.empty()) {
        std::cout << results[0].csv;
        std::cerr << dynbal::SummaryJson(results[0].summary);
      } else {
        dynbal::WriteExperimentOutputs(cfg, results);
        std::cout << dynbal::SummaryJson(results[0].summary);
      }
    } else if (gen->parsed()) {
      dynbal::ExperimentConfig cfg = BuildConfig(gen_f);
      dynbal::Generated g = dynbal::Generate(cfg);
      const std::string hash = dynbal::HexHash(dynbal::Fnv1a64(g.content));
      if (cfg.out.empty()) {
        std::cout << g.content;
        std::cerr << g.kind << " fnv1a64 " << hash << "\n";
      } else {
        dynbal::WriteFile(cfg.out, g.content);
        std::cout << g.kind << " fnv1a64 " << hash << "\n";
      }
    } else if (ver->parsed()) {
      int path_len = ver_f.trials;
      ver_f.trials = 0;
      dynbal::ExperimentConfig cfg = BuildConfig(ver_f);
      if (path_len > 0) cfg.path_len = path_len;
      dynbal::VerifyReport rep = dynbal::Verify(verify_kind, dynbal::ReadFile(verify_file), cfg);
      Emit(cfg.out, rep.json);
      return rep.pass ? kExitOk : kExitInvariant;
    } else if (dec->parsed()) {
      dynbal::ExperimentConfig cfg = BuildConfig(dec_f);
      dynbal::DecomposeOptions opt;
      opt.phi = cfg.phi;
      opt.gamma = cfg.gamma;
      opt.spectral.seed = cfg.seed;
      Emit(cfg.out, dynbal::DecomposeJson(LoadGraph(dec_file), opt));
    } else if (cert->parsed()) {
      dynbal::ExperimentConfig cfg = BuildConfig(cert_f);
      dynbal::VerifyReport rep = dynbal::CertifyJson(LoadGraph(cert_file), cfg.phi, cfg.gamma);
      Emit(cfg.out, rep.json);
      return rep.pass ? kExitOk : kExitInvariant;
    }
  } catch (const dynbal::ReplayError& e) {
    std::cerr << e.what() << "\n";
    return e.exit_code();
  } catch (const dynbal::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const dynbal::IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const dynbal::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const dynbal::InvariantViolation& e) {
    std::cerr << e.what() << "\n";
    return kExitInvariant;
  } catch (const dynbal::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
