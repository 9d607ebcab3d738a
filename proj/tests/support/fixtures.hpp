// Deterministic test inputs that do not depend on any library RNG, plus the
// values the oracles produced for them (computed once, frozen here).
#pragma once

#include "dsc/numkernel.hpp"

#include <cmath>
#include <random>

namespace fixture {

using dsc::Index;
using dsc::Matrix;
using dsc::Vector;

/// M(i, j) = sin((i + 1)(j + 2)).
inline Matrix sin_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = std::sin((i + 1.0) * (j + 2.0));
  }
  return m;
}

/// Unit columns with entries cos(2 + 3i + 5j) before normalization.
inline Matrix cos_points(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = std::cos(2.0 + 3.0 * i + 5.0 * j);
  }
  m.colwise().normalize();
  return m;
}

/// S(i, j) = cos(1 + ij) + (i == j ? i / 2 : 0); symmetric 4 x 4.
inline Matrix cos_symmetric() {
  Matrix m(4, 4);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) m(i, j) = std::cos(1.0 + i * j) + (i == j ? 0.5 * i : 0.0);
  }
  return m;
}

// Jacobi SVD of sin_matrix(8, 5).
inline const double kSinSingularValues[5] = {2.3751113117241553, 2.2762043784058092,
                                             2.0940528536523422, 1.9473873449679371,
                                             1.2104273052397545};
// Characteristic-polynomial roots of cos_symmetric().
inline const double kCosEigenvalues[4] = {-0.98841249129447561, 0.13831473604425007,
                                          0.92005415994659867, 2.4987897210113981};
// sum_i min ||a^T X||_1 s.t. a^T x_i = 1 over cos_points(2, 5); subgradient
// and vertex enumeration agree on it.
inline const double kCosPointsL1Objective = 17.086671526390688;

inline Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  }
  return m;
}

inline Matrix random_symmetric(Index n, std::mt19937_64& rng) {
  const Matrix b = gaussian(n, n, rng);
  return b + b.transpose();
}

}  // namespace fixture
