#include "dsc/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dsc {

NeighborhoodSet select_neighborhoods(const Matrix& responses, Index g, bool exclude_self) {
  const Index n = responses.rows();
  if (responses.cols() != n) throw std::invalid_argument("select_neighborhoods: responses must be square");
  const Index available = exclude_self ? n - 1 : n;
  if (g < 1 || g > available) {
    throw std::invalid_argument("select_neighborhoods: g=" + std::to_string(g) + " outside [1, " +
                                std::to_string(available) + "]");
  }
  NeighborhoodSet out;
  out.g = g;
  out.per_point.resize(static_cast<std::size_t>(n));
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    if (exclude_self) order.erase(order.begin() + i);
    const auto row = responses.row(i);
    std::partial_sort(order.begin(), order.begin() + g, order.end(), [&](Index a, Index b) {
      return row(a) > row(b) || (row(a) == row(b) && a < b);
    });
    out.per_point[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + g);
  }
  return out;
}

double angular_weight(double inner_product) {
  return std::exp(-2.0 * std::acos(std::clamp(inner_product, -1.0, 1.0)));
}

SimilarityGraph angular_weights(const Matrix& X, const NeighborhoodSet& nbrs, bool renormalize) {
  const Index n = X.cols();
  if (static_cast<Index>(nbrs.per_point.size()) != n) {
    throw std::invalid_argument("angular_weights: neighborhood count does not match X");
  }
  Matrix points = X;
  if (renormalize) {
    for (Index j = 0; j < n; ++j) {
      const double norm = points.col(j).norm();
      if (norm > 0.0) points.col(j) /= norm;
    }
  }
  SimilarityGraph graph;
  graph.W = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j : nbrs.per_point[static_cast<std::size_t>(i)]) {
      graph.W(i, j) = angular_weight(points.col(i).dot(points.col(j)));
    }
  }
  return graph;
}

SimilarityGraph symmetrize(SimilarityGraph graph) {
  if (graph.symmetrized) throw std::logic_error("symmetrize: graph is already symmetrized");
  if (graph.W.rows() != graph.W.cols()) throw std::invalid_argument("symmetrize: W must be square");
  graph.W += graph.W.transpose().eval();
  graph.symmetrized = true;
  return graph;
}

Index default_neighborhood_size(std::optional<Index> subspace_dim, Index num_points,
                                Index num_clusters) {
  Index g = 0;
  if (subspace_dim) {
    g = std::max<Index>(3, *subspace_dim + 1);
  } else {
    const Index denom = 4 * std::max<Index>(1, num_clusters);
    g = std::clamp<Index>((num_points + denom - 1) / denom, 3, 50);
  }
  return std::min(g, num_points);
}

void write_edge_list(std::ostream& out, const SimilarityGraph& graph) {
  out << "i,j,weight\n";
  out.precision(17);
  const Index n = graph.W.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = graph.symmetrized ? i : 0; j < n; ++j) {
      if (graph.W(i, j) != 0.0) out << i << ',' << j << ',' << graph.W(i, j) << '\n';
    }
  }
}

}  // namespace dsc
