#ifndef DSC_EVALBENCH_HPP
#define DSC_EVALBENCH_HPP

#include "dsc/affinity.hpp"
#include "dsc/datamodel.hpp"
#include "dsc/spectral.hpp"

#include <stdexcept>
#include <vector>

namespace dsc {

/// 100 * (misclassified points) / M2, where the misclassification count is
/// minimized over label bijections by optimal assignment on the confusion
/// matrix. Throws on length mismatch.
double clustering_error(const Labels& predicted, const Labels& truth);
double clustering_error(const ClusterLabels& predicted, const ClusterLabels& truth);

/// Thresholding neighborhoods: the g largest entries of |d_i^T D| with i
/// itself excluded.
NeighborhoodSet tsc_neighborhoods(const Matrix& D, Index g);

/// Thresholding baseline: the neighborhood of point i is the g largest
/// entries of |d_i^T D| excluding i itself, weighted with the same angular
/// kernel as DSC and symmetrized. D is expected column-normalized.
SimilarityGraph tsc_similarity(const Matrix& D, Index g);

/// Fraction of the neighborhood of `point` sharing its label.
double neighborhood_purity(const std::vector<Index>& neighborhood, const Labels& truth, Index point);

class NoInnovationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct InnovationBasis {
  Matrix basis;  // orthonormal columns spanning Innov(S_i)
};

/// Orthonormal basis of the direct sum of every subspace except `skip`.
Matrix direct_sum_basis(const std::vector<Matrix>& bases, Index skip);

/// Orthonormalized columns of (I - C_i C_i^T) V_i, where C_i spans the direct
/// sum of the other subspaces. Throws NoInnovationError when S_i lies inside
/// that sum.
InnovationBasis innovation_basis(const std::vector<Matrix>& bases, Index i);

/// ||B^T v|| / ||v|| for a basis B with orthonormal columns.
double projection_ratio(const Matrix& basis, const Vector& v);

}  // namespace dsc

#endif  // DSC_EVALBENCH_HPP
