#ifndef DSC_AFFINITY_HPP
#define DSC_AFFINITY_HPP

#include "dsc/numkernel.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace dsc {

/// Zero-based column indices chosen for each point.
struct NeighborhoodSet {
  std::vector<std::vector<Index>> per_point;
  Index g = 0;
};

struct SimilarityGraph {
  Matrix W;  // M2 x M2, nonnegative
  bool symmetrized = false;
};

/// Row i keeps the indices of the g largest entries of responses.row(i),
/// ties going to the lower column index. With exclude_self the diagonal entry
/// is never chosen.
NeighborhoodSet select_neighborhoods(const Matrix& responses, Index g, bool exclude_self = false);

/// W(i, j) = exp(-2 acos(x_i . x_j)) for j in the neighborhood of i, zero
/// elsewhere. Inner products are clamped to [-1, 1]; with renormalize the
/// columns of X are scaled to unit norm first.
SimilarityGraph angular_weights(const Matrix& X, const NeighborhoodSet& nbrs,
                                bool renormalize = false);

/// W + W^T. Throws if the graph is already symmetric.
SimilarityGraph symmetrize(SimilarityGraph graph);

/// Kernel used for every edge weight.
double angular_weight(double inner_product);

/// max(3, d + 1) when the subspace dimension is known, otherwise
/// ceil(M2 / (4 N)) clamped to [3, 50]; never more than M2.
Index default_neighborhood_size(std::optional<Index> subspace_dim, Index num_points,
                                Index num_clusters);

/// Upper-triangle edges (i, j, weight) of a symmetrized graph, or every
/// nonzero entry of an unsymmetrized one. Indices are zero-based.
void write_edge_list(std::ostream& out, const SimilarityGraph& graph);

}  // namespace dsc

#endif  // DSC_AFFINITY_HPP
