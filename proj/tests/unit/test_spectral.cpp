#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include "dsc/evalbench.hpp"
#include "dsc/spectral.hpp"

#include <set>

using namespace dsc;

namespace {

// Two cliques with weight w inside, optionally joined by one weak edge.
SimilarityGraph two_blocks(Index a, Index b, double bridge = 0.0) {
  Matrix W = Matrix::Zero(a + b, a + b);
  W.topLeftCorner(a, a).setConstant(0.8);
  W.bottomRightCorner(b, b).setConstant(0.6);
  W(0, a) = W(a, 0) = bridge;
  return {W, true};
}

int distinct(const std::vector<int>& v) { return static_cast<int>(std::set<int>(v.begin(), v.end()).size()); }

}  // namespace

TEST_CASE("disconnected blocks are recovered exactly") {
  const ClusterLabels c = spectral_cluster(two_blocks(5, 7), 2, 5, 1);
  CHECK(c.num_clusters == 2);
  CHECK_FALSE(c.degenerate);
  for (Index i = 1; i < 5; ++i) CHECK(c.labels[i] == c.labels[0]);
  for (Index i = 6; i < 12; ++i) CHECK(c.labels[i] == c.labels[5]);
  CHECK(c.labels[0] != c.labels[5]);
}

TEST_CASE("weakly bridged blocks still split") {
  const ClusterLabels c = spectral_cluster(two_blocks(6, 6, 0.01), 2);
  Labels truth(12, 0);
  for (Index i = 6; i < 12; ++i) truth[i] = 1;
  CHECK(clustering_error(Labels(c.labels.begin(), c.labels.end()), truth) == 0.0);
}

TEST_CASE("laplacian zero eigenvalues count components") {
  Matrix W = Matrix::Zero(9, 9);
  W.block(0, 0, 3, 3).setOnes();
  W.block(3, 3, 4, 4).setConstant(0.3);
  W(7, 8) = W(8, 7) = 1.0;
  CHECK(count_components(W) == 3);
  const Matrix L = normalized_laplacian(W);
  const EigResult e = sym_eig(L, 9, SpectrumEnd::Smallest);
  int zeros = 0;
  for (Index k = 0; k < 9; ++k) zeros += std::abs(e.values(k)) < 1e-10;
  CHECK(zeros == 3);

  // An isolated vertex is its own component and keeps a unit diagonal.
  Matrix V = Matrix::Zero(3, 3);
  V(0, 1) = V(1, 0) = 1.0;
  CHECK(count_components(V) == 2);
  CHECK(normalized_laplacian(V)(2, 2) == 1.0);
  CHECK(normalized_laplacian(V)(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("spectral input checks") {
  SimilarityGraph g = two_blocks(2, 2);
  CHECK_THROWS_AS(spectral_cluster(g, 5), std::invalid_argument);
  CHECK_THROWS_AS(spectral_cluster(g, 0), std::invalid_argument);
  g.symmetrized = false;
  CHECK_THROWS_AS(spectral_cluster(g, 2), std::invalid_argument);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 1) = neg(1, 0) = -1.0;
  CHECK_THROWS_AS(normalized_laplacian(neg), std::invalid_argument);
}

TEST_CASE("eigengap estimate") {
  Matrix W = Matrix::Zero(9, 9);
  for (Index b = 0; b < 3; ++b) W.block(3 * b, 3 * b, 3, 3).setOnes();
  CHECK(estimate_cluster_count({W, true}, 6) == 3);
}

TEST_CASE("kmeans small cases") {
  Matrix line(4, 1);
  line << 0, 1, 10, 11;
  const KMeansResult r = kmeans(line, 2, 3, 0);
  CHECK(r.clusters.labels[0] == r.clusters.labels[1]);
  CHECK(r.clusters.labels[2] == r.clusters.labels[3]);
  CHECK(r.clusters.labels[0] != r.clusters.labels[2]);
  CHECK(r.cost == doctest::Approx(1.0));

  const KMeansResult each = kmeans(line, 4, 1, 0);
  CHECK(each.cost == 0.0);
  CHECK(distinct(each.clusters.labels) == 4);

  std::mt19937_64 rng(41);
  Matrix clouds = 0.05 * fixture::gaussian(40, 3, rng);
  clouds.bottomRows(20).rowwise() += Eigen::RowVector3d(5, 5, 5);
  const KMeansResult split = kmeans(clouds, 2, 4, 9);
  for (Index i = 0; i < 40; ++i) CHECK(split.clusters.labels[i] == split.clusters.labels[i < 20 ? 0 : 20]);

  CHECK_THROWS_AS(kmeans(line, 5, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(kmeans(line, 2, 0, 0), std::invalid_argument);
}

TEST_CASE("property: Lloyd cost never increases") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix pts = fixture::gaussian(60, 3, rng);
    const KMeansResult r = kmeans(pts, 5, 3, trial);
    REQUIRE_FALSE(r.cost_history.empty());
    for (std::size_t k = 1; k < r.cost_history.size(); ++k) {
      CHECK(r.cost_history[k] <= r.cost_history[k - 1] * (1.0 + 1e-12));
    }
    CHECK(r.cost == doctest::Approx(r.cost_history.back()));
  }
}

TEST_CASE("property: fixed seed gives identical labels") {
  std::mt19937_64 rng(43);
  Matrix W = fixture::gaussian(30, 30, rng).cwiseAbs();
  W = (W + W.transpose()).eval();
  const SimilarityGraph g{W, true};
  const ClusterLabels a = spectral_cluster(g, 4, 10, 77);
  const ClusterLabels b = spectral_cluster(g, 4, 10, 77);
  CHECK(a.labels == b.labels);
  const Matrix pts = fixture::gaussian(50, 2, rng);
  CHECK(kmeans(pts, 3, 5, 8).clusters.labels == kmeans(pts, 3, 5, 8).clusters.labels);
}

TEST_CASE("property: labels stay in range") {
  std::mt19937_64 rng(44);
  for (int k = 1; k <= 6; ++k) {
    Matrix W = fixture::gaussian(20, 20, rng).cwiseAbs();
    W = (W + W.transpose()).eval();
    const ClusterLabels c = spectral_cluster({W, true}, k, 3, k);
    CHECK(c.num_clusters == k);
    CHECK(c.labels.size() == 20);
    for (int l : c.labels) CHECK((l >= 0 && l < k));
    CHECK(c.degenerate == (distinct(c.labels) < k));
  }
}

TEST_CASE("property: Laplacian null space counts connected components") {
  std::mt19937_64 rng(45);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<int> sizes(1 + trial % 5);
    int total = 0;
    for (int& s : sizes) total += s = size(rng);
    Matrix W = Matrix::Zero(total, total);
    int at = 0;
    for (int s : sizes) {
      // A path keeps each block connected; random chords add weight.
      for (int k = 1; k < s; ++k) W(at + k - 1, at + k) = W(at + k, at + k - 1) = 0.5;
      const Matrix extra = fixture::gaussian(s, s, rng).cwiseAbs();
      W.block(at, at, s, s) += extra + extra.transpose();
      at += s;
    }
    CAPTURE(trial);
    CHECK(count_components(W) == static_cast<int>(sizes.size()));
    const EigResult e = sym_eig(normalized_laplacian(W), total, SpectrumEnd::Smallest);
    CHECK((e.values.array().abs() < 1e-9).count() == static_cast<Index>(sizes.size()));
  }
}
