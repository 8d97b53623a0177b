#include "lml/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "lml/oracle.hpp"

namespace lml::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoError("failed writing '" + path + "'");
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-")
    out << content;
  else
    write_file(path, content);
}

std::int64_t percentile(const std::vector<std::int64_t>& sorted, double q) {
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

BenchRecord summarize(int n, int k, const char* pass,
                      std::vector<std::int64_t> times) {
  std::sort(times.begin(), times.end());
  long double total = 0.0L;
  for (auto t : times) total += t;
  BenchRecord r{n, k, pass, static_cast<int>(times.size()), 0, 0, 0};
  r.mean_ns = static_cast<std::int64_t>(std::llround(total / times.size()));
  r.p50_ns = percentile(times, 0.50);
  r.p95_ns = percentile(times, 0.95);
  return r;
}

}  // namespace

std::vector<double> parse_scores(const std::string& arg) {
  std::string text = arg;
  std::error_code ec;
  if (!arg.empty() && std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream f(arg);
    if (!f) throw IoError("cannot read '" + arg + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  std::replace_if(text.begin(), text.end(),
                  [](char c) { return c == ',' || c == '\n' || c == '\t' || c == '\r'; },
                  ' ');
  std::istringstream in(text);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size())
      throw std::invalid_argument("malformed score '" + token + "'");
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("no scores given");
  return values;
}

nlohmann::json run_project(const ProjectOptions& opts) {
  const std::vector<double> x = parse_scores(opts.x);
  opts.solver.validate();
  const LmlPoint y = opts.oracle ? oracle::reference_project(x, opts.k)
                                 : lml_project(x, opts.k, opts.solver);
  double residual = -static_cast<double>(y.k);
  for (double p : y.probs) residual += p;
  return {{"n", x.size()},
          {"k", y.k},
          {"probs", y.probs},
          {"dual", y.dual},
          {"iterations", y.iterations},
          {"g_residual", residual},
          {"solver", opts.oracle ? "reference_bisection" : "bracketing"}};
}

std::vector<BenchRecord> run_bench(const BenchOptions& opts) {
  if (opts.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (opts.batch < 1) throw std::invalid_argument("batch must be at least 1");
  SolverConfig solver = opts.solver;
  solver.parallel = opts.parallel;
  solver.validate();

  using clock = std::chrono::steady_clock;
  std::vector<BenchRecord> records;
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  volatile double sink = 0.0;

  for (int n : opts.n_list) {
    for (int k : opts.k_list) {
      validate_k(static_cast<std::size_t>(std::max(n, 0)), k);
      std::vector<std::vector<double>> xs(static_cast<std::size_t>(opts.batch),
                                          std::vector<double>(n));
      std::vector<std::vector<double>> upstream = xs;
      for (auto& x : xs)
        for (double& v : x) v = normal(rng);
      for (auto& g : upstream)
        for (double& v : g) v = normal(rng);

      std::vector<LmlPoint> projected(xs.size());
      std::vector<std::int64_t> fwd;
      std::vector<std::int64_t> bwd;
      for (int t = 0; t < opts.trials; ++t) {
        auto start = clock::now();
        for (std::size_t b = 0; b < xs.size(); ++b)
          projected[b] = lml_project(xs[b], k, solver);
        auto stop = clock::now();
        fwd.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
        sink = sink + projected.back().dual;

        start = clock::now();
        for (std::size_t b = 0; b < xs.size(); ++b)
          sink = sink + lml_backward(projected[b], upstream[b]).front();
        stop = clock::now();
        bwd.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
      }
      records.push_back(summarize(n, k, "forward", std::move(fwd)));
      records.push_back(summarize(n, k, "backward", std::move(bwd)));
    }
  }
  return records;
}

std::string bench_csv(const std::vector<BenchRecord>& records, bool parallel) {
  std::string out = "n,k,pass,trials,mean_ns,p50_ns,p95_ns";
  out += parallel ? ",parallel\n" : "\n";
  for (const auto& r : records) {
    out += std::to_string(r.n) + ',' + std::to_string(r.k) + ',' + r.pass + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.mean_ns) + ',' +
           std::to_string(r.p50_ns) + ',' + std::to_string(r.p95_ns);
    out += parallel ? ",1\n" : "\n";
  }
  return out;
}

std::string surfaces_csv(const SurfaceOptions& opts) {
  const auto grid =
      entropy_surface_grid(opts.n, opts.k, opts.penalty, opts.resolution);
  std::string out;
  for (int i = 1; i <= opts.n; ++i) out += 'y' + std::to_string(i) + ',';
  out += "penalty\n";
  for (const auto& p : grid) {
    for (double v : p.y) out += format_double(v) + ',';
    out += format_double(p.penalty) + '\n';
  }
  return out;
}

TrainOutcome run_train(const TrainOptions& opts) {
  const SyntheticTask task =
      generate_task(opts.n, opts.k, opts.input_dim, opts.samples,
                    opts.observe_prob, opts.train.seed);
  TrainOutcome outcome;
  outcome.report = train_loop(task, opts.train);
  const EpochMetrics& last = outcome.report.epochs.back();
  outcome.summary = {
      {"config",
       {{"loss", loss_name(opts.train.loss)},
        {"n", opts.n},
        {"k", opts.k},
        {"d_in", opts.input_dim},
        {"samples", opts.samples},
        {"observe_prob", opts.observe_prob},
        {"epochs", opts.train.epochs},
        {"lr", opts.train.lr},
        {"batch_size", opts.train.batch_size},
        {"hidden", opts.train.hidden},
        {"seed", opts.train.seed}}},
      {"final",
       {{"loss", last.loss},
        {"gt_recall", last.gt_recall},
        {"obs_recall", last.obs_recall},
        {"zero_one_error", last.zero_one_error},
        {"mean_prob", last.mean_prob}}},
      {"initial_digest", outcome.report.initial_digest},
      {"final_digest", outcome.report.final_digest}};
  return outcome;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limited multi-label projection: solver, benchmarks, training"};
  app.require_subcommand(1);

  ProjectOptions project;
  auto* project_cmd = app.add_subcommand("project", "Project a score vector");
  project_cmd->add_option("--x", project.x, "Scores (comma separated) or a file path")
      ->required()
      ->allow_extra_args(false);
  project_cmd->add_option("--k", project.k, "Number of labels")->required();
  project_cmd->add_option("--d", project.solver.samples_per_iter, "Samples per iteration");
  project_cmd->add_option("--delta", project.solver.saturation_offset, "Saturation offset");
  project_cmd->add_option("--tol", project.solver.tolerance, "Bracket width tolerance");
  project_cmd->add_flag("--oracle", project.oracle, "Use the reference bisection solver");

  BenchOptions bench;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Time forward and backward passes");
  bench_cmd->add_option("--n-list", bench.n_list, "Dimensions")->delimiter(',');
  bench_cmd->add_option("--k-list", bench.k_list, "Set sizes")->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Trials per point");
  bench_cmd->add_option("--batch", bench.batch, "Vectors per trial");
  bench_cmd->add_option("--seed", bench.seed, "Input generator seed");
  bench_cmd->add_option("--d", bench.solver.samples_per_iter, "Samples per iteration");
  bench_cmd->add_flag("--parallel", bench.parallel, "Evaluate samples on worker threads");
  bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");

  SurfaceOptions surf;
  std::string surf_penalty = "binary";
  std::string surf_out;
  auto* surf_cmd = app.add_subcommand("surfaces", "Entropy penalty over the polytope");
  surf_cmd->add_option("--n", surf.n, "Dimension (3 or 4)")->required();
  surf_cmd->add_option("--k", surf.k, "Set size")->required();
  surf_cmd->add_option("--penalty", surf_penalty, "binary or shannon")
      ->check(CLI::IsMember({"binary", "shannon"}));
  surf_cmd->add_option("--resolution", surf.resolution, "Grid divisions per axis");
  surf_cmd->add_option("--out", surf_out, "CSV path (default stdout)");

  TrainOptions train;
  std::string train_loss = "lml";
  std::string train_out;
  std::string train_summary;
  auto* train_cmd = app.add_subcommand("train", "Train on a planted synthetic task");
  train_cmd->add_option("--loss", train_loss,
                        "lml, truncated_entropy, multilabel_truncated_entropy, "
                        "sigmoid or softmax_ce")
      ->check(CLI::IsMember({"lml", "truncated_entropy",
                             "multilabel_truncated_entropy", "sigmoid",
                             "softmax_ce"}));
  train_cmd->add_option("--n", train.n, "Number of labels");
  train_cmd->add_option("--k", train.k, "Labels per sample");
  train_cmd->add_option("--d-in", train.input_dim, "Feature dimension");
  train_cmd->add_option("--samples", train.samples, "Number of samples");
  train_cmd->add_option("--observe-prob", train.observe_prob, "Label keep probability");
  train_cmd->add_option("--epochs", train.train.epochs, "Epochs");
  train_cmd->add_option("--lr", train.train.lr, "Learning rate");
  train_cmd->add_option("--batch-size", train.train.batch_size, "Minibatch size");
  train_cmd->add_option("--hidden", train.train.hidden, "Hidden widths")->delimiter(',');
  train_cmd->add_option("--seed", train.train.seed, "Seed");
  train_cmd->add_option("--out", train_out, "Per-epoch CSV path (default stdout)");
  train_cmd->add_option("--summary", train_summary, "Summary JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*project_cmd) {
      out << run_project(project).dump(2) << '\n';
    } else if (*bench_cmd) {
      emit(bench_out, bench_csv(run_bench(bench), bench.parallel), out);
    } else if (*surf_cmd) {
      surf.penalty = parse_penalty(surf_penalty);
      emit(surf_out, surfaces_csv(surf), out);
    } else if (*train_cmd) {
      train.train.loss = parse_loss(train_loss);
      const TrainOutcome outcome = run_train(train);
      const std::string csv = report_csv(outcome.report);
      const std::string summary = outcome.summary.dump(2) + '\n';
      if (train_out.empty() || train_out == "-") {
        out << csv;
      } else {
        write_file(train_out, csv);
      }
      if (train_summary.empty())
        out << summary;
      else
        write_file(train_summary, summary);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace lml::cli
