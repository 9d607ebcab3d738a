#include "dsc/experiment.hpp"

#include "dsc/evalbench.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace dsc {

using json = nlohmann::json;

ExperimentKind parse_experiment_kind(const std::string& text) {
  if (text == "clustering") return ExperimentKind::Clustering;
  if (text == "purity") return ExperimentKind::Purity;
  if (text == "real") return ExperimentKind::RealData;
  throw std::invalid_argument("unknown experiment kind '" + text + "' (clustering | purity | real)");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Clustering: return "clustering";
    case ExperimentKind::Purity: return "purity";
    case ExperimentKind::RealData: return "real";
  }
  return "?";
}

SweepVariable parse_sweep_variable(const std::string& text) {
  if (text == "y") return SweepVariable::Intersection;
  if (text == "n") return SweepVariable::Clusters;
  if (text == "tau") return SweepVariable::Noise;
  if (text == "m1") return SweepVariable::Ambient;
  if (text == "subjects") return SweepVariable::Subjects;
  throw std::invalid_argument("unknown sweep variable '" + text + "' (y | n | tau | m1 | subjects)");
}

std::string to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::Intersection: return "y";
    case SweepVariable::Clusters: return "n";
    case SweepVariable::Noise: return "tau";
    case SweepVariable::Ambient: return "m1";
    case SweepVariable::Subjects: return "subjects";
  }
  return "?";
}

namespace {

bool is_count(double v) { return v >= 0.0 && std::floor(v) == v && v < 1e9; }

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument(where + ": unknown key '" + item.key() + "'");
    }
  }
}

void read_synth_keys(const json& j, SynthConfig& cfg, double& tau) {
  if (j.contains("m1")) cfg.ambient_dim = j.at("m1").get<Index>();
  if (j.contains("n")) cfg.num_subspaces = j.at("n").get<Index>();
  if (j.contains("d")) cfg.subspace_dim = j.at("d").get<Index>();
  if (j.contains("y")) cfg.intersection_dim = j.at("y").get<Index>();
  if (j.contains("per_cluster")) cfg.points_per_cluster = j.at("per_cluster").get<Index>();
  if (j.contains("tau")) tau = j.at("tau").get<double>();
}

json synth_json(const SynthConfig& cfg) {
  return {{"m1", cfg.ambient_dim},
          {"n", cfg.num_subspaces},
          {"d", cfg.subspace_dim},
          {"y", cfg.intersection_dim},
          {"per_cluster", cfg.points_per_cluster}};
}

AlgorithmSpec read_algorithm(const json& j) {
  reject_unknown_keys(j,
                      {"label", "algo", "p", "mu", "gamma", "a_update", "max_iters", "tol",
                       "dual_tol", "exclude_self", "renorm_x"},
                      "algorithm");
  AlgorithmSpec a;
  a.algorithm = parse_algorithm(j.at("algo").get<std::string>());
  a.label = j.value("label", to_string(a.algorithm));
  a.admm.p = j.value("p", a.admm.p);
  a.admm.mu = j.value("mu", a.admm.mu);
  a.admm.gamma = j.value("gamma", a.admm.gamma);
  a.admm.max_iters = j.value("max_iters", a.admm.max_iters);
  a.admm.tol = j.value("tol", a.admm.tol);
  a.admm.dual_tol = j.value("dual_tol", a.admm.dual_tol);
  if (j.contains("a_update")) a.admm.a_update = parse_a_update_mode(j.at("a_update").get<std::string>());
  a.exclude_self = j.value("exclude_self", false);
  a.renormalize_x = j.value("renorm_x", false);
  return a;
}

json algorithm_json(const AlgorithmSpec& a) {
  return {{"label", a.label},
          {"algo", to_string(a.algorithm)},
          {"p", a.admm.p},
          {"mu", a.admm.mu},
          {"gamma", a.admm.gamma},
          {"a_update", to_string(a.admm.a_update)},
          {"max_iters", a.admm.max_iters},
          {"tol", a.admm.tol},
          {"dual_tol", a.admm.dual_tol},
          {"exclude_self", a.exclude_self},
          {"renorm_x", a.renormalize_x}};
}

ExperimentSpec from_json(const json& j) {
  reject_unknown_keys(j,
                      {"name", "kind", "synth", "tau", "sweep", "series", "algorithms", "trials",
                       "seed", "g", "rank", "restarts", "jobs", "purity_point", "data"},
                      "experiment");
  ExperimentSpec spec;
  spec.name = j.value("name", std::string("experiment"));
  spec.kind = parse_experiment_kind(j.at("kind").get<std::string>());

  SynthConfig base;
  double base_tau = 0.0;
  if (j.contains("synth")) {
    reject_unknown_keys(j.at("synth"), {"m1", "n", "d", "y", "per_cluster"}, "synth");
    read_synth_keys(j.at("synth"), base, base_tau);
  }
  base_tau = j.value("tau", base_tau);

  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    reject_unknown_keys(sw, {"variable", "values"}, "sweep");
    spec.sweep = parse_sweep_variable(sw.at("variable").get<std::string>());
    spec.values = sw.at("values").get<std::vector<double>>();
  } else if (spec.kind == ExperimentKind::RealData) {
    spec.sweep = SweepVariable::Subjects;
  } else {
    throw std::invalid_argument("experiment: missing sweep");
  }

  if (j.contains("series")) {
    for (const json& s : j.at("series")) {
      reject_unknown_keys(s, {"name", "m1", "n", "d", "y", "per_cluster", "tau", "values"}, "series");
      SeriesSpec series{s.value("name", std::string()), base, base_tau, {}};
      read_synth_keys(s, series.synth, series.tau);
      if (s.contains("values")) series.values = s.at("values").get<std::vector<double>>();
      spec.series.push_back(series);
    }
  } else {
    spec.series.push_back({"", base, base_tau, {}});
  }

  for (const json& a : j.at("algorithms")) spec.algorithms.push_back(read_algorithm(a));
  spec.trials = j.value("trials", spec.trials);
  spec.seed = j.value("seed", spec.seed);
  if (j.contains("g") && !j.at("g").is_null()) spec.neighborhood_size = j.at("g").get<Index>();
  if (j.contains("rank")) {
    const std::string rank = j.at("rank").get<std::string>();
    if (rank != "auto") spec.rank = RankPolicy::parse(rank);
  }
  spec.restarts = j.value("restarts", spec.restarts);
  spec.jobs = j.value("jobs", spec.jobs);
  spec.purity_point = j.value("purity_point", spec.purity_point);

  if (j.contains("data")) {
    const json& d = j.at("data");
    reject_unknown_keys(d, {"path", "format", "subjects", "projection_rank"}, "data");
    spec.data_path = d.at("path").get<std::string>();
    const std::string format = d.value("format", std::string("csv"));
    if (format == "csv") {
      spec.data_format = InputFormat::Csv;
    } else if (format == "pgm") {
      spec.data_format = InputFormat::PgmDir;
    } else {
      throw std::invalid_argument("data: unknown format '" + format + "' (csv | pgm)");
    }
    spec.subjects = d.value("subjects", spec.subjects);
    spec.projection_rank = d.value("projection_rank", spec.projection_rank);
  }
  if (spec.kind == ExperimentKind::RealData && spec.values.empty() && !j.contains("sweep")) {
    spec.values = {static_cast<double>(spec.subjects)};
  }
  return spec;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct TrialData {
  DataMatrix data;
  Labels truth;
  int num_clusters = 0;
  std::optional<Index> subspace_dim;
  double tau = 0.0;
};

TrialData synthetic_trial(const SeriesSpec& point, std::uint64_t seed) {
  SynthConfig cfg = point.synth;
  cfg.seed = seed;
  TrialData t;
  t.data = add_noise(generate(cfg), {point.tau, seed});
  t.truth = *t.data.labels;
  t.num_clusters = static_cast<int>(cfg.num_subspaces);
  t.subspace_dim = cfg.subspace_dim;
  t.tau = point.tau;
  return t;
}

TrialData subject_subset(const DataMatrix& full, int subjects, std::uint64_t seed) {
  const Labels& labels = *full.labels;
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (subjects > static_cast<int>(classes.size())) {
    throw std::invalid_argument("dataset has " + std::to_string(classes.size()) + " classes, " +
                                std::to_string(subjects) + " requested");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(classes.begin(), classes.end(), rng);
  std::vector<int> chosen(classes.begin(), classes.begin() + subjects);
  std::sort(chosen.begin(), chosen.end());

  std::vector<Index> columns;
  TrialData t;
  for (Index i = 0; i < full.num_points(); ++i) {
    const auto it = std::find(chosen.begin(), chosen.end(), labels[static_cast<std::size_t>(i)]);
    if (it == chosen.end()) continue;
    columns.push_back(i);
    t.truth.push_back(static_cast<int>(it - chosen.begin()));
  }
  t.data.D.resize(full.ambient_dim(), static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) t.data.D.col(static_cast<Index>(c)) = full.D.col(columns[c]);
  t.data.labels = t.truth;
  t.data.source = full.source;
  t.num_clusters = subjects;
  t.tau = 1.0;  // real data counts as noisy for the rank default
  return t;
}

struct JobOutput {
  std::vector<TrialRecord> records;
  std::vector<ResponseProfile> profiles;
};

}  // namespace

void ExperimentSpec::validate() const {
  if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithms");
  if (series.empty()) throw std::invalid_argument("experiment: no series");
  for (const auto& s : series) {
    if (sweep_values(s).empty()) throw std::invalid_argument("experiment: empty sweep list");
  }
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (jobs < 1) throw std::invalid_argument("experiment: jobs must be >= 1");
  if (restarts < 1) throw std::invalid_argument("experiment: restarts must be >= 1");
  if (neighborhood_size && *neighborhood_size < 1) throw std::invalid_argument("experiment: g must be >= 1");

  std::set<std::string> labels;
  for (const auto& a : algorithms) {
    a.admm.validate();
    if (!labels.insert(a.label).second) {
      throw std::invalid_argument("experiment: duplicate algorithm label '" + a.label + "'");
    }
  }
  std::set<std::string> names;
  for (const auto& s : series) {
    if (!names.insert(s.name).second) {
      throw std::invalid_argument("experiment: duplicate series name '" + s.name + "'");
    }
  }
  if (series.size() > 1 && names.count("")) {
    throw std::invalid_argument("experiment: series need names when there are several");
  }

  if (kind == ExperimentKind::RealData) {
    if (sweep != SweepVariable::Subjects) {
      throw std::invalid_argument("experiment: real-data runs sweep 'subjects'");
    }
    if (data_path.empty()) throw std::invalid_argument("experiment: real-data run without data.path");
    if (projection_rank < 1) throw std::invalid_argument("experiment: projection_rank must be >= 1");
    for (double v : sweep_values(series.front())) {
      if (!is_count(v) || v < 1) throw std::invalid_argument("experiment: subject counts must be positive integers");
    }
    return;
  }
  if (sweep == SweepVariable::Subjects) {
    throw std::invalid_argument("experiment: 'subjects' sweeps need kind 'real'");
  }
  for (const auto& s : series) {
    for (double v : sweep_values(s)) {
      if (sweep == SweepVariable::Noise ? !(v >= 0.0) : !is_count(v)) {
        throw std::invalid_argument("experiment: invalid " + to_string(sweep) + " value " +
                                    format_number(v));
      }
    }
  }
  for (const auto& s : series) {
    for (double v : sweep_values(s)) {
      const SeriesSpec point = apply_sweep(s, sweep, v);
      point.synth.validate();
      if (!(point.tau >= 0.0)) throw std::invalid_argument("experiment: tau must be >= 0");
      if (kind == ExperimentKind::Purity &&
          (purity_point < 0 || purity_point >= point.synth.num_points())) {
        throw std::invalid_argument("experiment: purity_point out of range");
      }
    }
  }
}

ExperimentSpec parse_experiment(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("experiment: invalid JSON: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    spec = from_json(j);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("experiment: ") + e.what());
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment(buf.str());
}

std::string experiment_to_json(const ExperimentSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["kind"] = to_string(spec.kind);
  j["sweep"] = {{"variable", to_string(spec.sweep)}, {"values", spec.values}};
  json series = json::array();
  for (const auto& s : spec.series) {
    json entry = synth_json(s.synth);
    entry["name"] = s.name;
    entry["tau"] = s.tau;
    if (!s.values.empty()) entry["values"] = s.values;
    series.push_back(entry);
  }
  j["series"] = series;
  json algorithms = json::array();
  for (const auto& a : spec.algorithms) algorithms.push_back(algorithm_json(a));
  j["algorithms"] = algorithms;
  j["trials"] = spec.trials;
  j["seed"] = spec.seed;
  j["g"] = spec.neighborhood_size ? json(*spec.neighborhood_size) : json(nullptr);
  j["rank"] = spec.rank ? spec.rank->to_string() : std::string("auto");
  j["restarts"] = spec.restarts;
  j["jobs"] = spec.jobs;
  j["purity_point"] = spec.purity_point;
  if (spec.kind == ExperimentKind::RealData) {
    j["data"] = {{"path", spec.data_path.string()},
                 {"format", spec.data_format == InputFormat::Csv ? "csv" : "pgm"},
                 {"subjects", spec.subjects},
                 {"projection_rank", spec.projection_rank}};
  }
  return j.dump(2);
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t series, std::size_t sweep, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(series), static_cast<std::uint32_t>(sweep),
                    static_cast<std::uint32_t>(trial)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

SeriesSpec apply_sweep(const SeriesSpec& series, SweepVariable variable, double value) {
  SeriesSpec out = series;
  const auto count = static_cast<Index>(value);
  switch (variable) {
    case SweepVariable::Intersection: out.synth.intersection_dim = count; break;
    case SweepVariable::Clusters: out.synth.num_subspaces = count; break;
    case SweepVariable::Noise: out.tau = value; break;
    case SweepVariable::Ambient: out.synth.ambient_dim = count; break;
    case SweepVariable::Subjects: break;
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const TrialCallback& on_trial) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  std::optional<DataMatrix> real;
  if (spec.kind == ExperimentKind::RealData) {
    real = load_matrix(spec.data_path, spec.data_format);
    if (!real->labels) throw std::invalid_argument("experiment: " + spec.data_path.string() + " has no labels");
  }

  struct Job {
    std::size_t series, sweep;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    for (std::size_t v = 0; v < spec.sweep_values(spec.series[s]).size(); ++v) {
      for (int t = 0; t < spec.trials; ++t) jobs.push_back({s, v, t});
    }
  }

  std::vector<JobOutput> outputs(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;

  auto run_job = [&](const Job& job, JobOutput& out) {
    const SeriesSpec& series = spec.series[job.series];
    const double value = spec.sweep_values(series)[job.sweep];
    const std::uint64_t seed = trial_seed(spec.seed, job.series, job.sweep, job.trial);

    auto base_record = [&](const AlgorithmSpec& a) {
      TrialRecord r;
      r.series = series.name;
      r.sweep = value;
      r.trial = job.trial;
      r.algorithm = a.label;
      r.seed = seed;
      return r;
    };

    std::optional<TrialData> data;
    std::string data_failure;
    try {
      data = real ? subject_subset(*real, static_cast<int>(value), seed)
                  : synthetic_trial(apply_sweep(series, spec.sweep, value), seed);
    } catch (const std::exception& e) {
      data_failure = std::string("data: ") + e.what();
    }

    for (const AlgorithmSpec& a : spec.algorithms) {
      TrialRecord r = base_record(a);
      if (!data) {
        r.error_pct = std::numeric_limits<double>::quiet_NaN();
        r.failure = data_failure;
        out.records.push_back(r);
        continue;
      }
      PipelineOptions opts;
      opts.algorithm = a.algorithm;
      opts.admm = a.admm;
      opts.num_clusters = data->num_clusters;
      opts.neighborhood_size = spec.neighborhood_size;
      opts.subspace_dim = data->subspace_dim;
      opts.restarts = spec.restarts;
      opts.seed = seed;
      opts.exclude_self = a.exclude_self;
      opts.renormalize_x = a.renormalize_x;
      if (spec.rank) {
        opts.rank = *spec.rank;
      } else if (real) {
        opts.rank = RankPolicy::fixed(std::min({spec.projection_rank, data->data.ambient_dim(),
                                                data->data.num_points()}));
      } else {
        opts.rank = data->tau == 0.0 ? RankPolicy::exact() : RankPolicy::energy(0.95);
      }
      try {
        if (spec.kind == ExperimentKind::Purity) {
          Matrix responses;
          const PipelineResult res = build_graph(data->data, opts, &responses);
          const auto& nbhd = res.neighborhoods.per_point[static_cast<std::size_t>(spec.purity_point)];
          r.error_pct = 100.0 * (1.0 - neighborhood_purity(nbhd, data->truth, spec.purity_point));
          r.iterations = res.iterations;
          r.converged = res.converged;
          r.rank = res.rank;
          r.seconds = res.seconds;
          if (job.trial == 0) {
            out.profiles.push_back({series.name, value, a.label,
                                    responses.row(spec.purity_point).transpose(), data->truth});
          }
        } else {
          const PipelineResult res = run_pipeline(data->data, opts);
          r.error_pct = clustering_error(res.clusters.labels, data->truth);
          r.iterations = res.iterations;
          r.converged = res.converged;
          r.rank = res.rank;
          r.seconds = res.seconds;
        }
      } catch (const std::exception& e) {
        r.error_pct = std::numeric_limits<double>::quiet_NaN();
        r.failure = e.what();
      }
      if (on_trial) {
        std::lock_guard<std::mutex> lock(report);
        on_trial(r);
      }
      out.records.push_back(std::move(r));
    }
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(jobs[i], outputs[i]);
  };
  const int threads = std::min<int>(spec.jobs, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  result.spec = spec;
  for (auto& out : outputs) {
    for (auto& r : out.records) {
      if (!r.failure.empty()) ++result.failures;
      result.trials.push_back(std::move(r));
    }
    for (auto& p : out.profiles) result.profiles.push_back(std::move(p));
  }
  result.summary = summarize(result.trials);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& trials) {
  std::vector<SummaryRow> rows;
  std::map<std::tuple<std::string, double, std::string>, std::size_t> index;
  std::vector<std::vector<const TrialRecord*>> members;
  for (const auto& t : trials) {
    const auto key = std::make_tuple(t.series, t.sweep, t.algorithm);
    auto [it, inserted] = index.emplace(key, rows.size());
    if (inserted) {
      rows.push_back({t.series, t.sweep, t.algorithm});
      members.emplace_back();
    }
    members[it->second].push_back(&t);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    SummaryRow& row = rows[k];
    double sum = 0.0, iters = 0.0, secs = 0.0;
    for (const TrialRecord* t : members[k]) {
      if (!t->failure.empty()) {
        ++row.failures;
        continue;
      }
      ++row.count;
      sum += t->error_pct;
      iters += t->iterations;
      secs += t->seconds;
    }
    if (row.count == 0) {
      row.mean = row.stddev = row.mean_iterations = row.mean_seconds =
          std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    row.mean = sum / row.count;
    row.mean_iterations = iters / row.count;
    row.mean_seconds = secs / row.count;
    double ss = 0.0;
    for (const TrialRecord* t : members[k]) {
      if (t->failure.empty()) ss += (t->error_pct - row.mean) * (t->error_pct - row.mean);
    }
    row.stddev = row.count > 1 ? std::sqrt(ss / (row.count - 1)) : 0.0;
  }
  return rows;
}

void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result,
                      const std::vector<std::string>& header) {
  std::filesystem::create_directories(dir);
  const ExperimentSpec& spec = result.spec;

  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    for (const auto& line : header) out << "# " << line << '\n';
    out << "# experiment=" << spec.name << " kind=" << to_string(spec.kind)
        << " sweep=" << to_string(spec.sweep) << '\n';
    return out;
  };

  for (const SeriesSpec& series : spec.series) {
    const std::string prefix = spec.series.size() > 1 ? series.name + "_" : std::string();
    std::ofstream results = open(prefix + "results.csv");
    results << "sweep,trial,algorithm,error_pct,iters,seconds,seed\n";
    for (const auto& t : result.trials) {
      if (t.series != series.name) continue;
      results << format_number(t.sweep) << ',' << t.trial << ',' << t.algorithm << ','
              << format_fixed(t.error_pct, 6) << ',' << t.iterations << ','
              << format_fixed(t.seconds, 3) << ',' << t.seed << '\n';
    }
    std::ofstream summary = open(prefix + "summary.csv");
    summary << "sweep,algorithm,mean_error_pct,std_error_pct,trials,failures,mean_iters,mean_seconds\n";
    for (const auto& row : result.summary) {
      if (row.series != series.name) continue;
      summary << format_number(row.sweep) << ',' << row.algorithm << ',' << format_fixed(row.mean, 6)
              << ',' << format_fixed(row.stddev, 6) << ',' << row.count << ',' << row.failures << ','
              << format_fixed(row.mean_iterations, 1) << ',' << format_fixed(row.mean_seconds, 3)
              << '\n';
    }
  }

  std::ofstream plot = open("plot.csv");
  plot << "series,sweep_variable,sweep,algorithm,metric,value\n";
  for (const auto& row : result.summary) {
    const std::string lead = row.series + ',' + to_string(spec.sweep) + ',' +
                             format_number(row.sweep) + ',' + row.algorithm + ',';
    plot << lead << "mean_error_pct," << format_fixed(row.mean, 6) << '\n';
    plot << lead << "std_error_pct," << format_fixed(row.stddev, 6) << '\n';
  }

  if (!result.profiles.empty()) {
    std::ofstream profiles = open("responses.csv");
    profiles << "series,sweep,algorithm,index,cluster,response\n";
    for (const auto& p : result.profiles) {
      for (Index i = 0; i < p.responses.size(); ++i) {
        profiles << p.series << ',' << format_number(p.sweep) << ',' << p.algorithm << ',' << i
                 << ',' << p.truth[static_cast<std::size_t>(i)] << ','
                 << format_number(p.responses(i)) << '\n';
      }
    }
  }

  std::ofstream json_out(dir / "spec.json");
  if (!json_out) throw std::runtime_error("cannot write " + (dir / "spec.json").string());
  json_out << experiment_to_json(spec) << '\n';
}

}  // namespace dsc
