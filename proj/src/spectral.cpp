#include "dsc/spectral.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace dsc {

namespace {

constexpr int kMaxLloydIterations = 300;
constexpr double kCentroidShiftTol = 1e-9;
constexpr double kIsolatedDegree = 1e-12;

std::mt19937_64 restart_stream(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

// Squared distance from every point to every centroid: n x k.
Matrix squared_distances(const Matrix& points, const Matrix& centroids) {
  Matrix d = -2.0 * points * centroids.transpose();
  d.colwise() += points.rowwise().squaredNorm();
  d.rowwise() += centroids.rowwise().squaredNorm().transpose();
  return d.cwiseMax(0.0);
}

Matrix farthest_point_seeds(const Matrix& points, int k, std::mt19937_64& rng) {
  const Index n = points.rows();
  Matrix centroids(k, points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centroids.row(0) = points.row(pick(rng));
  Vector nearest = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    Index far = 0;
    nearest.maxCoeff(&far);
    centroids.row(c) = points.row(far);
    nearest = nearest.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

struct Assignment {
  std::vector<int> labels;
  Vector distance;  // squared distance to the assigned centroid
  double cost = 0.0;
};

Assignment assign(const Matrix& points, const Matrix& centroids) {
  const Matrix d = squared_distances(points, centroids);
  Assignment a;
  a.labels.resize(static_cast<std::size_t>(points.rows()));
  a.distance.resize(points.rows());
  for (Index i = 0; i < points.rows(); ++i) {
    Index best = 0;
    a.distance(i) = d.row(i).minCoeff(&best);
    a.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  a.cost = a.distance.sum();
  return a;
}

KMeansResult lloyd(const Matrix& points, Matrix centroids) {
  const int k = static_cast<int>(centroids.rows());
  KMeansResult out;
  Assignment a = assign(points, centroids);
  out.cost_history.push_back(a.cost);
  int iter = 0;
  for (; iter < kMaxLloydIterations; ++iter) {
    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < points.rows(); ++i) {
      const int l = a.labels[static_cast<std::size_t>(i)];
      sums.row(l) += points.row(i);
      ++counts[static_cast<std::size_t>(l)];
    }
    Matrix next = centroids;
    Vector distance = a.distance;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        next.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: move it onto the point worst served by its centroid.
        Index far = 0;
        distance.maxCoeff(&far);
        next.row(c) = points.row(far);
        distance(far) = 0.0;
      }
    }
    const double shift = (next - centroids).rowwise().norm().maxCoeff();
    centroids = std::move(next);
    a = assign(points, centroids);
    out.cost_history.push_back(a.cost);
    if (shift < kCentroidShiftTol) break;
  }
  out.iterations = iter + 1;
  out.centroids = std::move(centroids);
  out.cost = a.cost;
  out.clusters.labels = std::move(a.labels);
  out.clusters.num_clusters = k;
  std::vector<bool> used(static_cast<std::size_t>(k), false);
  for (int l : out.clusters.labels) used[static_cast<std::size_t>(l)] = true;
  out.clusters.degenerate = std::find(used.begin(), used.end(), false) != used.end();
  return out;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, int restarts, std::uint64_t seed) {
  require_finite(points, "kmeans");
  if (k < 1 || k > points.rows()) {
    throw std::invalid_argument("kmeans: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(points.rows()) + "]");
  }
  if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
  KMeansResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng = restart_stream(seed, r);
    KMeansResult run = lloyd(points, farthest_point_seeds(points, k, rng));
    if (run.cost < best.cost) best = std::move(run);
  }
  return best;
}

Matrix normalized_laplacian(const Matrix& W) {
  if (W.rows() != W.cols()) throw std::invalid_argument("normalized_laplacian: W must be square");
  if ((W.array() < 0.0).any()) throw std::invalid_argument("normalized_laplacian: negative weight");
  const Vector degree = W.rowwise().sum();
  const Vector inv_sqrt =
      degree.unaryExpr([](double d) { return 1.0 / std::sqrt(d > 0.0 ? d : kIsolatedDegree); });
  Matrix L = -(inv_sqrt.asDiagonal() * W * inv_sqrt.asDiagonal());
  L.diagonal().array() += 1.0;
  return L;
}

ClusterLabels spectral_cluster(const SimilarityGraph& graph, int num_clusters, int restarts,
                               std::uint64_t seed) {
  if (!graph.symmetrized) throw std::invalid_argument("spectral_cluster: graph is not symmetrized");
  const Index n = graph.W.rows();
  if (num_clusters < 1 || num_clusters > n) {
    throw std::invalid_argument("spectral_cluster: N=" + std::to_string(num_clusters) +
                                " outside [1, " + std::to_string(n) + "]");
  }
  const EigResult eig = sym_eig(normalized_laplacian(graph.W), num_clusters, SpectrumEnd::Smallest);
  Matrix embedding = eig.vectors;
  for (Index i = 0; i < n; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 0.0) embedding.row(i) /= norm;
  }
  return kmeans(embedding, num_clusters, restarts, seed).clusters;
}

int count_components(const Matrix& W) {
  const Index n = W.rows();
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  std::vector<Index> stack;
  int count = 0;
  for (Index start = 0; start < n; ++start) {
    if (component[static_cast<std::size_t>(start)] >= 0) continue;
    component[static_cast<std::size_t>(start)] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (Index u = 0; u < n; ++u) {
        if ((W(v, u) != 0.0 || W(u, v) != 0.0) && component[static_cast<std::size_t>(u)] < 0) {
          component[static_cast<std::size_t>(u)] = count;
          stack.push_back(u);
        }
      }
    }
    ++count;
  }
  return count;
}

int estimate_cluster_count(const SimilarityGraph& graph, int max_clusters) {
  const Index n = graph.W.rows();
  const int limit = static_cast<int>(std::min<Index>(max_clusters, n - 1));
  if (limit < 1) return 1;
  const EigResult eig = sym_eig(normalized_laplacian(graph.W), limit + 1, SpectrumEnd::Smallest);
  int best = 1;
  double best_gap = -1.0;
  for (int k = 1; k <= limit; ++k) {
    const double gap = eig.values(k) - eig.values(k - 1);
    if (gap > best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  return best;
}

}  // namespace dsc
