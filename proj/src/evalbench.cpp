#include "dsc/evalbench.hpp"

#include "dsc/hungarian.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace dsc {

namespace {

constexpr double kInnovationTol = 1e-8;

std::map<int, Index> dense_ids(const Labels& labels) {
  std::map<int, Index> ids;
  for (int l : labels) ids.emplace(l, 0);
  Index next = 0;
  for (auto& [label, id] : ids) id = next++;
  return ids;
}

}  // namespace

double clustering_error(const Labels& predicted, const Labels& truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("clustering_error: " + std::to_string(predicted.size()) +
                                " predicted labels vs " + std::to_string(truth.size()) + " true");
  }
  if (truth.empty()) return 0.0;
  const auto pred_ids = dense_ids(predicted);
  const auto true_ids = dense_ids(truth);
  const Index k = static_cast<Index>(std::max(pred_ids.size(), true_ids.size()));
  Matrix confusion = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    confusion(pred_ids.at(predicted[i]), true_ids.at(truth[i])) += 1.0;
  }
  const std::vector<Index> match = solve_assignment(-confusion);
  double agreed = 0.0;
  for (Index r = 0; r < k; ++r) agreed += confusion(r, match[static_cast<std::size_t>(r)]);
  const double n = static_cast<double>(truth.size());
  return 100.0 * (n - agreed) / n;
}

double clustering_error(const ClusterLabels& predicted, const ClusterLabels& truth) {
  return clustering_error(predicted.labels, truth.labels);
}

NeighborhoodSet tsc_neighborhoods(const Matrix& D, Index g) {
  require_finite(D, "tsc_neighborhoods");
  const Matrix responses = (D.transpose() * D).cwiseAbs();
  return select_neighborhoods(responses, g, /*exclude_self=*/true);
}

SimilarityGraph tsc_similarity(const Matrix& D, Index g) {
  return symmetrize(angular_weights(D, tsc_neighborhoods(D, g)));
}

double neighborhood_purity(const std::vector<Index>& neighborhood, const Labels& truth, Index point) {
  if (neighborhood.empty()) return 1.0;
  const int own = truth.at(static_cast<std::size_t>(point));
  const auto same = std::count_if(neighborhood.begin(), neighborhood.end(), [&](Index j) {
    return truth.at(static_cast<std::size_t>(j)) == own;
  });
  return static_cast<double>(same) / static_cast<double>(neighborhood.size());
}

Matrix direct_sum_basis(const std::vector<Matrix>& bases, Index skip) {
  if (bases.empty()) throw std::invalid_argument("direct_sum_basis: no bases");
  const Index m1 = bases.front().rows();
  Index total = 0;
  for (Index k = 0; k < static_cast<Index>(bases.size()); ++k) {
    if (bases[static_cast<std::size_t>(k)].rows() != m1) {
      throw std::invalid_argument("direct_sum_basis: bases live in different ambient spaces");
    }
    if (k != skip) total += bases[static_cast<std::size_t>(k)].cols();
  }
  if (total == 0) return Matrix(m1, 0);
  Matrix stacked(m1, total);
  Index at = 0;
  for (Index k = 0; k < static_cast<Index>(bases.size()); ++k) {
    if (k == skip) continue;
    const Matrix& b = bases[static_cast<std::size_t>(k)];
    stacked.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  const SvdResult svd = thin_svd(stacked, std::min(stacked.rows(), stacked.cols()));
  const Index rank = numerical_rank(svd.s);
  return svd.U.leftCols(rank);
}

InnovationBasis innovation_basis(const std::vector<Matrix>& bases, Index i) {
  if (i < 0 || i >= static_cast<Index>(bases.size())) {
    throw std::invalid_argument("innovation_basis: subspace index out of range");
  }
  const Matrix& V = bases[static_cast<std::size_t>(i)];
  const Matrix C = direct_sum_basis(bases, i);
  Matrix residual = V;
  if (C.cols() > 0) residual -= C * (C.transpose() * V);
  const SvdResult svd = thin_svd(residual, std::min(residual.rows(), residual.cols()));
  Index dim = 0;
  while (dim < svd.s.size() && svd.s(dim) > kInnovationTol) ++dim;
  if (dim == 0) {
    throw NoInnovationError("innovation_basis: subspace " + std::to_string(i) +
                            " lies in the direct sum of the others (no innovation)");
  }
  return {svd.U.leftCols(dim)};
}

double projection_ratio(const Matrix& basis, const Vector& v) {
  const double norm = v.norm();
  if (norm == 0.0) throw std::invalid_argument("projection_ratio: zero vector");
  if (basis.cols() == 0) return 0.0;
  return (basis.transpose() * v).norm() / norm;
}

}  // namespace dsc
