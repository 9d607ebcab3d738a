#ifndef DSC_SPECTRAL_HPP
#define DSC_SPECTRAL_HPP

#include "dsc/affinity.hpp"
#include "dsc/numkernel.hpp"

#include <cstdint>
#include <vector>

namespace dsc {

struct ClusterLabels {
  std::vector<int> labels;  // in [0, num_clusters)
  int num_clusters = 0;
  bool degenerate = false;  // some cluster ended up empty
};

struct KMeansResult {
  ClusterLabels clusters;
  Matrix centroids;  // k x dim
  double cost = 0.0;
  int iterations = 0;
  std::vector<double> cost_history;  // per Lloyd iteration, best restart
};

/// Lloyd's algorithm on the rows of `points` with farthest-point seeding.
/// Each restart draws its first seed from a stream derived from
/// (seed, restart); the lowest-cost restart wins.
KMeansResult kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed);

/// I - D^-1/2 W D^-1/2 with isolated vertices given degree 1e-12.
Matrix normalized_laplacian(const Matrix& W);

/// Ng-Jordan-Weiss spectral clustering of a symmetrized graph.
ClusterLabels spectral_cluster(const SimilarityGraph& graph, int num_clusters, int restarts = 20,
                               std::uint64_t seed = 0);

/// Connected components of the nonzero pattern of W.
int count_components(const Matrix& W);

/// Eigengap estimate of the cluster count, for diagnostics only: the k in
/// [1, max_clusters] maximizing lambda_{k+1} - lambda_k of the normalized
/// Laplacian.
int estimate_cluster_count(const SimilarityGraph& graph, int max_clusters);

}  // namespace dsc

#endif  // DSC_SPECTRAL_HPP
