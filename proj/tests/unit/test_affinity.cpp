#include "doctest.h"
#include "support/fixtures.hpp"

#include "dsc/affinity.hpp"
#include "dsc/datamodel.hpp"
#include "dsc/dirsearch.hpp"
#include "dsc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

using namespace dsc;

namespace {

std::vector<Index> sorted(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Matrix unit_columns(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix m = fixture::gaussian(rows, cols, rng);
  m.colwise().normalize();
  return m;
}

}  // namespace

TEST_CASE("top-g selection") {
  Matrix R = Matrix::Identity(3, 3);
  R.row(0) << 1.0, 0.9, 0.1;
  CHECK(sorted(select_neighborhoods(R, 2).per_point[0]) == std::vector<Index>{0, 1});

  R.row(0) << 0.5, 0.5, 0.5;
  CHECK(sorted(select_neighborhoods(R, 2).per_point[0]) == std::vector<Index>{0, 1});

  Matrix S(3, 3);
  S << 1.0, 0.2, 0.7, 0.3, 1.0, 0.3, 0.1, 0.9, 1.0;
  const NeighborhoodSet with_self = select_neighborhoods(S, 2);
  CHECK(with_self.g == 2);
  CHECK(sorted(with_self.per_point[1]) == std::vector<Index>{0, 1});
  const NeighborhoodSet no_self = select_neighborhoods(S, 2, true);
  CHECK(sorted(no_self.per_point[0]) == std::vector<Index>{1, 2});
  CHECK(sorted(no_self.per_point[1]) == std::vector<Index>{0, 2});
  CHECK(sorted(no_self.per_point[2]) == std::vector<Index>{0, 1});
}

TEST_CASE("neighborhood size is checked") {
  const Matrix R = Matrix::Ones(3, 3);
  CHECK_THROWS_AS(select_neighborhoods(R, 0), std::invalid_argument);
  CHECK_THROWS_AS(select_neighborhoods(R, 4), std::invalid_argument);
  CHECK_NOTHROW(select_neighborhoods(R, 3));
  CHECK_THROWS_AS(select_neighborhoods(R, 3, true), std::invalid_argument);
}

TEST_CASE("angular kernel") {
  CHECK(angular_weight(1.0) == 1.0);
  CHECK(angular_weight(0.0) == doctest::Approx(std::exp(-std::numbers::pi)).epsilon(1e-15));
  CHECK(angular_weight(0.0) == doctest::Approx(0.04322).epsilon(1e-4));
  CHECK(angular_weight(-1.0) == doctest::Approx(0.001867).epsilon(1e-3));
  CHECK(angular_weight(1.0 + 1e-12) == 1.0);
  CHECK(angular_weight(-1.0 - 1e-12) == angular_weight(-1.0));
}

TEST_CASE("weights only on chosen neighbors") {
  Matrix X(2, 3);
  X << 1, 0, -1, 0, 1, 0;
  NeighborhoodSet n;
  n.g = 2;
  n.per_point = {{0, 1}, {1, 2}, {2, 0}};
  const SimilarityGraph G = angular_weights(X, n);
  CHECK_FALSE(G.symmetrized);
  CHECK(G.W(0, 0) == 1.0);
  CHECK(G.W(0, 1) == doctest::Approx(angular_weight(0.0)));
  CHECK(G.W(0, 2) == 0.0);
  CHECK(G.W(2, 0) == doctest::Approx(angular_weight(-1.0)));
}

TEST_CASE("renormalization changes short columns only") {
  Matrix X(2, 2);
  X << 0.5, 0.0, 0.0, 1.0;
  NeighborhoodSet n;
  n.g = 1;
  n.per_point = {{0}, {1}};
  CHECK(angular_weights(X, n).W(0, 0) == doctest::Approx(angular_weight(0.25)));
  CHECK(angular_weights(X, n, true).W(0, 0) == 1.0);
  CHECK(angular_weights(X, n, true).W(1, 1) == 1.0);
}

TEST_CASE("symmetrize") {
  SimilarityGraph g{Matrix::Zero(3, 3), false};
  g.W(0, 1) = 0.5;
  const SimilarityGraph s = symmetrize(g);
  CHECK(s.symmetrized);
  CHECK(s.W(0, 1) == 0.5);
  CHECK(s.W(1, 0) == 0.5);
  CHECK_THROWS_AS(symmetrize(s), std::logic_error);

  SimilarityGraph both{Matrix::Zero(2, 2), false};
  both.W(0, 1) = 0.25;
  both.W(1, 0) = 0.25;
  CHECK(symmetrize(both).W(0, 1) == 0.5);
  CHECK(symmetrize(SimilarityGraph{Matrix::Zero(2, 2), false}).W.isZero(0.0));
}

TEST_CASE("default neighborhood size") {
  CHECK(default_neighborhood_size(10, 400, 4) == 11);
  CHECK(default_neighborhood_size(1, 400, 4) == 3);
  CHECK(default_neighborhood_size(std::nullopt, 400, 4) == 25);
  CHECK(default_neighborhood_size(std::nullopt, 40, 20) == 3);
  CHECK(default_neighborhood_size(std::nullopt, 100000, 2) == 50);
  CHECK(default_neighborhood_size(10, 5, 1) == 5);
}

TEST_CASE("edge lists") {
  SimilarityGraph g{Matrix::Zero(2, 2), false};
  g.W(0, 1) = 0.5;
  std::ostringstream one_way;
  write_edge_list(one_way, g);
  CHECK(one_way.str().find("0,1,0.5") != std::string::npos);

  std::ostringstream sym;
  write_edge_list(sym, symmetrize(g));
  const std::string text = sym.str();
  CHECK(text.find("0,1,") != std::string::npos);
  CHECK(text.find("1,0,") == std::string::npos);
}

TEST_CASE("property: row support, weight range and symmetry") {
  const Matrix X = unit_columns(5, 30, 31);
  const Matrix responses = (X.transpose() * X).cwiseAbs();
  for (const Index g : {1, 4, 30}) {
    const NeighborhoodSet n = select_neighborhoods(responses, g);
    const SimilarityGraph G = angular_weights(X, n);
    for (Index i = 0; i < X.cols(); ++i) {
      const auto& idx = n.per_point[i];
      CHECK(static_cast<Index>(idx.size()) == g);
      CHECK(std::set<Index>(idx.begin(), idx.end()).size() == idx.size());
      CHECK((G.W.row(i).array() > 0.0).count() == g);
    }
    CHECK(G.W.maxCoeff() <= 1.0);
    const SimilarityGraph S = symmetrize(G);
    CHECK(S.W == S.W.transpose());
    CHECK(S.W.maxCoeff() <= 2.0);
    CHECK(S.W.minCoeff() >= 0.0);
  }
}

TEST_CASE("property: relabelling the points relabels the graph") {
  const Matrix X = unit_columns(4, 20, 32);
  std::vector<Index> perm(20);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(33);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix Xp(4, 20);
  for (Index j = 0; j < 20; ++j) Xp.col(j) = X.col(perm[j]);

  const auto graph = [](const Matrix& Y) {
    return symmetrize(angular_weights(Y, select_neighborhoods((Y.transpose() * Y).cwiseAbs(), 5)));
  };
  const Matrix W = graph(X).W;
  const Matrix Wp = graph(Xp).W;
  double worst = 0.0;
  for (Index a = 0; a < 20; ++a) {
    for (Index b = 0; b < 20; ++b) worst = std::max(worst, std::abs(Wp(a, b) - W(perm[a], perm[b])));
  }
  CHECK(worst <= 1e-15);
}

TEST_CASE("the first point's neighborhood stays in its subspace") {
  SynthConfig cfg;
  cfg.seed = 34;
  const DataMatrix data = generate(cfg);
  const Matrix X = project_to_span(data, RankPolicy::exact()).X;
  const DirectionSet d = solve_directions(X, AdmmConfig{});
  const NeighborhoodSet n = select_neighborhoods(d.responses, default_neighborhood_size(10, 400, 4));
  for (const Index j : n.per_point[0]) CHECK((*data.labels)[j] == (*data.labels)[0]);
}
