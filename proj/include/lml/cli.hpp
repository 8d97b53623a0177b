#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "lml/entropy.hpp"
#include "lml/projection.hpp"
#include "lml/train.hpp"

namespace lml::cli {

/// Comma/whitespace separated reals, or the path of a file holding them.
std::vector<double> parse_scores(const std::string& arg);

struct ProjectOptions {
  std::string x;
  int k = 1;
  SolverConfig solver{};
  bool oracle = false;
};

/// {"n","k","probs","dual","iterations","g_residual","solver"}
nlohmann::json run_project(const ProjectOptions& opts);

struct BenchRecord {
  int n = 0;
  int k = 0;
  std::string pass;  // "forward" or "backward"
  int trials = 0;
  std::int64_t mean_ns = 0;
  std::int64_t p50_ns = 0;
  std::int64_t p95_ns = 0;
};

struct BenchOptions {
  std::vector<int> n_list{1000};
  std::vector<int> k_list{1, 5, 25, 50};
  int trials = 50;
  int batch = 256;
  bool parallel = false;
  std::uint64_t seed = 0;
  SolverConfig solver{};
};

/// Times lml_project and lml_backward over one batch per trial for every
/// (n, k) pair. Records come out n-major, then k, then forward/backward.
std::vector<BenchRecord> run_bench(const BenchOptions& opts);

/// Header n,k,pass,trials,mean_ns,p50_ns,p95_ns (plus ",parallel" if set).
std::string bench_csv(const std::vector<BenchRecord>& records, bool parallel);

struct SurfaceOptions {
  int n = 3;
  int k = 1;
  Penalty penalty = Penalty::kBinary;
  int resolution = 60;
};

/// Header y1,...,yn,penalty; one row per interior grid point.
std::string surfaces_csv(const SurfaceOptions& opts);

struct TrainOptions {
  int n = 10;
  int k = 3;
  int input_dim = 16;
  int samples = 2000;
  double observe_prob = 1.0;
  TrainConfig train{};
};

struct TrainOutcome {
  TrainReport report;
  nlohmann::json summary;
};

TrainOutcome run_train(const TrainOptions& opts);

/// Full command-line entry point. Returns 0 on success, 1 on usage errors
/// (bad flags, invalid k or malformed input) and 2 on runtime failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lml::cli
