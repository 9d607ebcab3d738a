#ifndef DSC_EXPERIMENT_HPP
#define DSC_EXPERIMENT_HPP

#include "dsc/datamodel.hpp"
#include "dsc/pipeline.hpp"
#include "dsc/synthgen.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dsc {

enum class ExperimentKind {
  Clustering,  // synthetic data, clustering error per trial
  Purity,      // synthetic data, neighborhood impurity of one point
  RealData,    // labelled dataset, random class subsets per trial
};

enum class SweepVariable { Intersection, Clusters, Noise, Ambient, Subjects };

ExperimentKind parse_experiment_kind(const std::string& text);
std::string to_string(ExperimentKind kind);
SweepVariable parse_sweep_variable(const std::string& text);
std::string to_string(SweepVariable variable);

struct AlgorithmSpec {
  std::string label;
  Algorithm algorithm = Algorithm::Dsc;
  AdmmConfig admm;
  bool exclude_self = false;
  bool renormalize_x = false;
};

/// One curve of a figure: the shared synthetic setup with some fields
/// overridden.
struct SeriesSpec {
  std::string name;
  SynthConfig synth;
  double tau = 0.0;
  std::vector<double> values;  // sweep values; empty means the spec's list
};

struct ExperimentSpec {
  std::string name;
  ExperimentKind kind = ExperimentKind::Clustering;
  SweepVariable sweep = SweepVariable::Intersection;
  std::vector<double> values;
  std::vector<SeriesSpec> series;
  std::vector<AlgorithmSpec> algorithms;
  int trials = 10;
  std::uint64_t seed = 0;
  std::optional<Index> neighborhood_size;
  /// Empty means exact rank for noiseless data and energy(0.95) otherwise.
  std::optional<RankPolicy> rank;
  int restarts = 20;
  int jobs = 1;

  Index purity_point = 0;  // Purity only

  // RealData only.
  std::filesystem::path data_path;
  InputFormat data_format = InputFormat::Csv;
  int subjects = 5;
  Index projection_rank = 500;

  const std::vector<double>& sweep_values(const SeriesSpec& s) const {
    return s.values.empty() ? values : s.values;
  }
  void validate() const;
};

/// JSON layout (all keys except `kind`, `sweep` and `algorithms` optional):
///   {"name", "kind": "clustering|purity|real",
///    "synth": {"m1", "n", "d", "y", "per_cluster"}, "tau",
///    "sweep": {"variable": "y|n|tau|m1|subjects", "values": [...]},
///    "series": [{"name", <synth keys>, "tau", "values"}, ...],
///    "algorithms": [{"label", "algo", "p", "mu", "gamma", "a_update",
///                    "max_iters", "tol", "exclude_self", "renorm_x"}, ...],
///    "trials", "seed", "g", "rank", "restarts", "jobs", "purity_point",
///    "data": {"path", "format": "csv|pgm", "subjects", "projection_rank"}}
/// Without a series list the top-level synth block forms a single series.
ExperimentSpec parse_experiment(const std::string& json_text);
ExperimentSpec load_experiment(const std::filesystem::path& path);
/// Canonical JSON of a fully resolved spec; parses back to the same spec.
std::string experiment_to_json(const ExperimentSpec& spec);

struct TrialRecord {
  std::string series;
  double sweep = 0.0;
  int trial = 0;
  std::string algorithm;
  /// Clustering error in percent; for Purity, the percentage of the chosen
  /// point's neighborhood outside its cluster. NaN when the trial failed.
  double error_pct = 0.0;
  int iterations = 0;
  bool converged = true;
  Index rank = 0;
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::string failure;  // empty on success
};

struct SummaryRow {
  std::string series;
  double sweep = 0.0;
  std::string algorithm;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  int count = 0;        // successful trials
  int failures = 0;
  double mean_iterations = 0.0;
  double mean_seconds = 0.0;
};

/// Response profile of the purity point in the first trial of each
/// (series, sweep, algorithm); the data behind a response-magnitude plot.
struct ResponseProfile {
  std::string series;
  double sweep = 0.0;
  std::string algorithm;
  Vector responses;
  Labels truth;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<TrialRecord> trials;  // series, sweep, trial, algorithm order
  std::vector<SummaryRow> summary;
  std::vector<ResponseProfile> profiles;
  int failures = 0;
  double seconds = 0.0;
};

/// Seed of trial t at sweep point s of series k; data, noise and k-means
/// streams of the trial all derive from it.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t series, std::size_t sweep, int trial);

/// The synthetic setup of one sweep point.
SeriesSpec apply_sweep(const SeriesSpec& series, SweepVariable variable, double value);

using TrialCallback = std::function<void(const TrialRecord&)>;

/// Runs every (series, sweep value, trial) job on up to spec.jobs threads.
/// All algorithms see the same data within a trial. A throwing trial is
/// recorded with its message and the sweep continues. `on_trial` is called
/// under a lock as records complete.
ExperimentResult run_experiment(const ExperimentSpec& spec, const TrialCallback& on_trial = {});

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& trials);

/// Per series `<series>results.csv` and `<series>summary.csv` (series name
/// plus '_' as prefix when there is more than one series), `plot.csv` in long
/// format, `responses.csv` for Purity runs, and `spec.json`. Every CSV starts
/// with `# ` comment lines carrying `header`.
void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result,
                      const std::vector<std::string>& header = {});

}  // namespace dsc

#endif  // DSC_EXPERIMENT_HPP
