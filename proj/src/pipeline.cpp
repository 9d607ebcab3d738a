#include "dsc/pipeline.hpp"

#include "dsc/evalbench.hpp"

#include <chrono>
#include <stdexcept>

namespace dsc {

Algorithm parse_algorithm(const std::string& text) {
  if (text == "dsc") return Algorithm::Dsc;
  if (text == "tsc") return Algorithm::Tsc;
  throw std::invalid_argument("unknown algorithm '" + text + "' (dsc | tsc)");
}

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Dsc ? "dsc" : "tsc";
}

PipelineResult build_graph(const DataMatrix& data, const PipelineOptions& opts, Matrix* responses_out) {
  const auto start = std::chrono::steady_clock::now();
  const DataMatrix normalized = normalize_columns(data);
  const Index n = normalized.num_points();

  PipelineResult out;
  out.neighborhood_size = opts.neighborhood_size.value_or(
      default_neighborhood_size(opts.subspace_dim, n, std::max(1, opts.num_clusters)));

  if (opts.algorithm == Algorithm::Tsc) {
    out.neighborhoods = tsc_neighborhoods(normalized.D, out.neighborhood_size);
    out.graph = symmetrize(angular_weights(normalized.D, out.neighborhoods));
    out.rank = normalized.ambient_dim();
    if (responses_out) *responses_out = (normalized.D.transpose() * normalized.D).cwiseAbs();
  } else {
    const ProjectedData projected = project_to_span(normalized, opts.rank);
    const DirectionSet directions = solve_directions(projected.X, opts.admm);
    out.neighborhoods =
        select_neighborhoods(directions.responses, out.neighborhood_size, opts.exclude_self);
    out.graph = symmetrize(angular_weights(projected.X, out.neighborhoods, opts.renormalize_x));
    out.rank = projected.rank;
    out.energy_captured = projected.energy_captured;
    out.iterations = directions.iterations;
    out.converged = directions.converged;
    out.residuals = directions.final_residuals;
    if (responses_out) *responses_out = directions.responses;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

PipelineResult run_pipeline(const DataMatrix& data, const PipelineOptions& opts) {
  if (opts.num_clusters < 1 || opts.num_clusters > data.num_points()) {
    throw std::invalid_argument("run_pipeline: cluster count " + std::to_string(opts.num_clusters) +
                                " outside [1, " + std::to_string(data.num_points()) + "]");
  }
  const auto start = std::chrono::steady_clock::now();
  PipelineResult out = build_graph(data, opts);
  out.clusters = spectral_cluster(out.graph, opts.num_clusters, opts.restarts, opts.seed);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace dsc
