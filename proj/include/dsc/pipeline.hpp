#ifndef DSC_PIPELINE_HPP
#define DSC_PIPELINE_HPP

#include "dsc/affinity.hpp"
#include "dsc/datamodel.hpp"
#include "dsc/dirsearch.hpp"
#include "dsc/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace dsc {

enum class Algorithm { Dsc, Tsc };

Algorithm parse_algorithm(const std::string& text);
std::string to_string(Algorithm algorithm);

struct PipelineOptions {
  Algorithm algorithm = Algorithm::Dsc;
  AdmmConfig admm;
  RankPolicy rank = RankPolicy::energy(0.95);
  int num_clusters = 0;
  std::optional<Index> neighborhood_size;  // g; defaulted when absent
  std::optional<Index> subspace_dim;       // feeds the default g
  int restarts = 20;
  std::uint64_t seed = 0;
  bool exclude_self = false;  // DSC only; TSC always excludes i
  bool renormalize_x = false;
};

struct PipelineResult {
  ClusterLabels clusters;
  SimilarityGraph graph;
  NeighborhoodSet neighborhoods;
  Index neighborhood_size = 0;
  Index rank = 0;               // DSC projection rank
  double energy_captured = 1.0;
  int iterations = 0;           // ADMM iterations (0 for TSC)
  bool converged = true;
  Residuals residuals;
  double seconds = 0.0;
};

/// Neighborhoods and symmetrized similarity graph without the clustering step.
/// `responses_out`, when given, receives the per-point response matrix.
PipelineResult build_graph(const DataMatrix& data, const PipelineOptions& opts,
                           Matrix* responses_out = nullptr);

/// Normalize, build the graph, then spectral clustering into
/// opts.num_clusters groups.
PipelineResult run_pipeline(const DataMatrix& data, const PipelineOptions& opts);

}  // namespace dsc

#endif  // DSC_PIPELINE_HPP
