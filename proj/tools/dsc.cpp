// dsc: generate synthetic data, cluster, score and run benchmark sweeps.
//
// Exit codes: 0 success, 1 compute failure, 2 usage or I/O error. Every long
// flag can also be set through DSC_<FLAG> (upper case, '-' -> '_').

#include "dsc/evalbench.hpp"
#include "dsc/experiment.hpp"
#include "dsc/pipeline.hpp"
#include "dsc/synthgen.hpp"

#include "CLI11.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifndef DSC_VERSION
#define DSC_VERSION "unknown"
#endif
#ifndef DSC_PRESET_DIR
#define DSC_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace dsc;

namespace {

constexpr int kComputeFailure = 1;
constexpr int kUsageError = 2;

/// Raised for bad flags, unreadable inputs and unwritable outputs.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string env_name(const std::string& flag) {
  std::string out = "DSC_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void bind_environment(CLI::App& app) {
  for (CLI::Option* opt : app.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help") continue;
    opt->envname(env_name(names.front()));
  }
}

/// `name=value` for every flag of the subcommand, defaults included, so a
/// run can be repeated from its output files alone.
std::vector<std::string> repro_header(const CLI::App& app, const std::vector<std::string>& extra = {}) {
  std::vector<std::string> lines{"dsc " + std::string(DSC_VERSION) + " " + app.get_name()};
  std::string flags;
  for (const CLI::Option* opt : app.get_options()) {
    const auto& names = opt->get_lnames();
    const std::string name = names.empty() ? opt->get_name() : names.front();
    if (name.empty() || name == "help" || name == "--help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ";") + r;
    } else {
      value = opt->get_default_str();
    }
    if (opt->get_expected_min() == 0 && value.empty()) value = "false";
    flags += (flags.empty() ? "" : " ") + name + "=" + value;
  }
  lines.push_back(flags);
  lines.insert(lines.end(), extra.begin(), extra.end());
  return lines;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

InputFormat parse_format(const std::string& text) {
  if (text == "csv") return InputFormat::Csv;
  if (text == "pgm") return InputFormat::PgmDir;
  throw UsageError("unknown input format '" + text + "' (csv | pgm)");
}

DataMatrix load_input(const std::string& path, const std::string& format) {
  try {
    return load_matrix(path, parse_format(format));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot load ") + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  SynthConfig cfg;
  double tau = 0.0;
  std::string out;
};

void add_synth(CLI::App& root, SynthArgs& a) {
  CLI::App* cmd = root.add_subcommand("synth", "Generate a union-of-subspaces dataset");
  cmd->add_option("--m1", a.cfg.ambient_dim, "Ambient dimension");
  cmd->add_option("--n", a.cfg.num_subspaces, "Number of subspaces");
  cmd->add_option("--d", a.cfg.subspace_dim, "Subspace dimension");
  cmd->add_option("--y", a.cfg.intersection_dim, "Dimension of the shared intersection");
  cmd->add_option("--per-cluster", a.cfg.points_per_cluster, "Points per subspace");
  cmd->add_option("--seed", a.cfg.seed, "Random seed");
  cmd->add_option("--tau", a.tau, "Noise-to-data Frobenius ratio");
  cmd->add_option("-o,--out", a.out, "Output CSV (labels in the last column)")->required();
}

int run_synth(const CLI::App& cmd, const SynthArgs& a) {
  try {
    a.cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(a.tau >= 0.0)) throw UsageError("--tau must be >= 0");
  const DataMatrix clean = generate(a.cfg);
  const DataMatrix noisy = add_noise(clean, {a.tau, a.cfg.seed});
  const double achieved = (noisy.D - clean.D).norm() / clean.D.norm();
  try {
    write_matrix(a.out, noisy, repro_header(cmd, {"tau_achieved=" + fixed(achieved, 15)}));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  std::cout << "wrote " << noisy.num_points() << " points of dimension " << noisy.ambient_dim()
            << " to " << a.out << " (tau " << fixed(achieved, 6) << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct ClusterArgs {
  std::string input;
  std::string format = "csv";
  std::string out = "labels.csv";
  std::string truth;
  std::string graph_out;
  std::string algo = "dsc";
  std::string a_update = "paper";
  std::string rank = "energy:0.95";
  int clusters = 0;
  Index g = 0;
  Index d = 0;
  PipelineOptions opts;
};

void add_cluster(CLI::App& root, ClusterArgs& a) {
  CLI::App* cmd = root.add_subcommand("cluster", "Cluster a dataset");
  cmd->add_option("-i,--input", a.input, "Input CSV file or PGM directory")->required();
  cmd->add_option("--format", a.format, "csv | pgm");
  cmd->add_option("-o,--out", a.out, "Predicted labels CSV");
  cmd->add_option("--truth", a.truth, "Ground-truth label file (when the input has none)");
  cmd->add_option("--graph-out", a.graph_out, "Write the similarity graph as an edge list");
  cmd->add_option("--algo", a.algo, "dsc | tsc");
  cmd->add_option("--p", a.opts.admm.p, "Response norm: 1 or 2");
  cmd->add_option("--mu", a.opts.admm.mu, "Augmented-Lagrangian parameter");
  cmd->add_option("--gamma", a.opts.admm.gamma, "Weight of the sparsity term");
  cmd->add_option("--tol", a.opts.admm.tol, "Residual tolerance");
  cmd->add_option("--dual-tol", a.opts.admm.dual_tol, "Also require the iterate change to fall below this (0: off)");
  cmd->add_option("--max-iters", a.opts.admm.max_iters, "Iteration cap");
  cmd->add_option("--a-update", a.a_update, "paper | exact");
  cmd->add_option("--rank", a.rank, "exact | fixed:<r> | energy:<fraction>");
  cmd->add_option("--clusters", a.clusters, "Number of clusters (default: number of true classes)");
  cmd->add_option("--g", a.g, "Neighborhood size (default from --d or the data size)");
  cmd->add_option("--d", a.d, "Subspace dimension, used only for the default neighborhood size");
  cmd->add_option("--restarts", a.opts.restarts, "k-means restarts");
  cmd->add_option("--seed", a.opts.seed, "k-means seed");
  cmd->add_flag("--exclude-self", a.opts.exclude_self, "Drop the point itself from its neighborhood");
  cmd->add_flag("--renorm-x", a.opts.renormalize_x, "Renormalize projected points before weighting");
}

int run_cluster(const CLI::App& cmd, ClusterArgs& a) {
  PipelineOptions opts = a.opts;
  try {
    opts.algorithm = parse_algorithm(a.algo);
    opts.admm.a_update = parse_a_update_mode(a.a_update);
    opts.rank = RankPolicy::parse(a.rank);
    opts.admm.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (opts.restarts < 1) throw UsageError("--restarts must be >= 1");

  DataMatrix data = load_input(a.input, a.format);
  if (!a.truth.empty()) {
    try {
      data.labels = read_labels(a.truth);
    } catch (const std::exception& e) {
      throw UsageError(std::string("cannot load ") + a.truth + ": " + e.what());
    }
    if (static_cast<Index>(data.labels->size()) != data.num_points()) {
      throw UsageError(a.truth + ": " + std::to_string(data.labels->size()) + " labels for " +
                       std::to_string(data.num_points()) + " points");
    }
  }
  opts.num_clusters = a.clusters > 0 ? a.clusters : (data.labels ? count_classes(*data.labels) : 0);
  if (opts.num_clusters < 1) throw UsageError("--clusters is required when the data carries no labels");
  if (opts.num_clusters > data.num_points()) throw UsageError("--clusters exceeds the number of points");
  if (a.g > 0) {
    if (a.g > data.num_points()) throw UsageError("--g exceeds the number of points");
    opts.neighborhood_size = a.g;
  }
  if (a.d > 0) opts.subspace_dim = a.d;

  PipelineResult res;
  try {
    res = run_pipeline(data, opts);
  } catch (const DivergenceError& e) {
    std::cerr << "dsc: " << e.what() << " (try a different --mu)\n";
    return kComputeFailure;
  } catch (const std::exception& e) {
    std::cerr << "dsc: clustering failed: " << e.what() << '\n';
    return kComputeFailure;
  }

  std::vector<std::string> header = repro_header(cmd);
  header.push_back("rank=" + std::to_string(res.rank) + " energy=" + fixed(res.energy_captured, 6) +
                   " g=" + std::to_string(res.neighborhood_size) +
                   " iterations=" + std::to_string(res.iterations) +
                   " converged=" + (res.converged ? "true" : "false"));
  try {
    write_labels(a.out, res.clusters.labels, header);
    if (!a.graph_out.empty()) {
      std::ofstream g(a.graph_out);
      if (!g) throw std::runtime_error("cannot open " + a.graph_out + " for writing");
      for (const auto& line : header) g << "# " << line << '\n';
      write_edge_list(g, res.graph);
    }
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }

  std::cerr << to_string(opts.algorithm) << ": " << data.num_points() << " points, rank " << res.rank
            << ", g " << res.neighborhood_size;
  if (opts.algorithm == Algorithm::Dsc) {
    std::cerr << ", " << res.iterations << " iterations" << (res.converged ? "" : " (not converged)")
              << ", max residual " << res.residuals.max();
  }
  std::cerr << ", " << fixed(res.seconds, 2) << " s\n";
  if (res.clusters.degenerate) std::cerr << "warning: some clusters are empty\n";
  if (data.labels) std::cout << "error " << fixed(clustering_error(res.clusters.labels, *data.labels), 2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string predicted;
  std::string truth;
  std::string data;
};

void add_evaluate(CLI::App& root, EvaluateArgs& a) {
  CLI::App* cmd = root.add_subcommand("evaluate", "Clustering error of a labelling");
  cmd->add_option("--pred", a.predicted, "Predicted label file")->required();
  auto* truth = cmd->add_option("--truth", a.truth, "Ground-truth label file");
  auto* data = cmd->add_option("--data", a.data, "Dataset CSV carrying ground-truth labels");
  truth->excludes(data);
}

int run_evaluate(const EvaluateArgs& a) {
  Labels predicted, truth;
  try {
    predicted = read_labels(a.predicted);
    if (!a.truth.empty()) {
      truth = read_labels(a.truth);
    } else if (!a.data.empty()) {
      const DataMatrix d = load_matrix(a.data, InputFormat::Csv);
      if (!d.labels) throw std::runtime_error(a.data + " has no labels");
      truth = *d.labels;
    } else {
      throw std::runtime_error("one of --truth or --data is required");
    }
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (predicted.size() != truth.size()) {
    throw UsageError(std::to_string(predicted.size()) + " predicted labels vs " +
                     std::to_string(truth.size()) + " true labels");
  }
  std::cout << "error " << fixed(clustering_error(predicted, truth), 2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string preset;
  std::string out;
  std::string data;
  int jobs = 0;
  int trials = 0;
  long long seed = -1;
  bool quiet = false;
};

void add_bench(CLI::App& root, BenchArgs& a) {
  CLI::App* cmd = root.add_subcommand("bench", "Run a benchmark sweep");
  cmd->add_option("preset", a.preset, "Preset name (fig1, fig2, fig3, table1) or JSON file")->required();
  cmd->add_option("-o,--out", a.out, "Output directory (default bench_<name>)");
  cmd->add_option("--data", a.data, "Dataset path for real-data presets");
  cmd->add_option("--jobs", a.jobs, "Parallel trials");
  cmd->add_option("--trials", a.trials, "Override the trial count");
  cmd->add_option("--seed", a.seed, "Override the seed");
  cmd->add_flag("--quiet", a.quiet, "No per-trial progress");
}

fs::path resolve_preset(const std::string& name) {
  if (fs::exists(name)) return name;
  for (const fs::path& dir : {fs::path("presets"), fs::path(DSC_PRESET_DIR)}) {
    const fs::path candidate = dir / (name + ".json");
    if (fs::exists(candidate)) return candidate;
  }
  throw UsageError("no preset or file named '" + name + "'");
}

int run_bench(const CLI::App& cmd, const BenchArgs& a) {
  ExperimentSpec spec;
  try {
    spec = load_experiment(resolve_preset(a.preset));
    if (a.jobs > 0) spec.jobs = a.jobs;
    if (a.trials > 0) spec.trials = a.trials;
    if (a.seed >= 0) spec.seed = static_cast<std::uint64_t>(a.seed);
    if (!a.data.empty()) spec.data_path = a.data;
    spec.validate();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (spec.kind == ExperimentKind::RealData && !fs::exists(spec.data_path)) {
    throw UsageError("dataset not found: " + spec.data_path.string() + " (pass --data)");
  }
  const fs::path out = a.out.empty() ? fs::path("bench_" + spec.name) : fs::path(a.out);

  ExperimentResult result;
  try {
    result = run_experiment(spec, [&](const TrialRecord& r) {
      if (a.quiet) return;
      std::cerr << spec.name << ' ' << (r.series.empty() ? "" : r.series + ' ') << to_string(spec.sweep)
                << '=' << r.sweep << " trial " << r.trial << ' ' << r.algorithm << ": ";
      if (r.failure.empty()) {
        std::cerr << fixed(r.error_pct, 2) << "% (" << fixed(r.seconds, 1) << " s)\n";
      } else {
        std::cerr << "FAILED " << r.failure << '\n';
      }
    });
  } catch (const std::exception& e) {
    std::cerr << "dsc: bench failed: " << e.what() << '\n';
    return kComputeFailure;
  }
  try {
    write_experiment(out, result, repro_header(cmd, {"seed=" + std::to_string(spec.seed)}));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }

  std::cout << "series,sweep,algorithm,mean_error_pct,std_error_pct,trials\n";
  for (const auto& row : result.summary) {
    std::cout << row.series << ',' << row.sweep << ',' << row.algorithm << ',' << fixed(row.mean, 2)
              << ',' << fixed(row.stddev, 2) << ',' << row.count << '\n';
  }
  std::cerr << "wrote " << out.string() << " in " << fixed(result.seconds, 1) << " s\n";
  if (result.failures > 0) std::cerr << "warning: " << result.failures << " failed trial(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direction-search subspace clustering"};
  app.set_version_flag("--version", DSC_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  SynthArgs synth;
  ClusterArgs cluster;
  EvaluateArgs evaluate;
  BenchArgs bench;
  add_synth(app, synth);
  add_cluster(app, cluster);
  add_evaluate(app, evaluate);
  add_bench(app, bench);
  for (CLI::App* sub : app.get_subcommands({})) bind_environment(*sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    const CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (name == "synth") return run_synth(*cmd, synth);
    if (name == "cluster") return run_cluster(*cmd, cluster);
    if (name == "evaluate") return run_evaluate(evaluate);
    return run_bench(*cmd, bench);
  } catch (const UsageError& e) {
    std::cerr << "dsc: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "dsc: " << e.what() << '\n';
    return kComputeFailure;
  }
}
