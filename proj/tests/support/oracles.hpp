// Independent reference implementations used to check the library. None of
// them calls into dsc beyond the Matrix typedefs; they trade speed for
// obviousness.
#pragma once

#include "dsc/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using dsc::Index;
using dsc::Matrix;
using dsc::Vector;

struct Svd {
  Matrix U;
  Vector s;
  Matrix V;
};

/// One-sided Jacobi SVD of a tall or square matrix. Columns of A are rotated
/// pairwise until mutually orthogonal; the column norms are the singular
/// values.
inline Svd jacobi_svd(const Matrix& A) {
  if (A.rows() < A.cols()) {
    Svd t = jacobi_svd(A.transpose());
    return {t.V, t.s, t.U};
  }
  Matrix U = A;
  const Index n = A.cols();
  Matrix V = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = U.col(p).squaredNorm();
        const double beta = U.col(q).squaredNorm();
        const double gamma = U.col(p).dot(U.col(q));
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Index i = 0; i < U.rows(); ++i) {
          const double up = U(i, p), uq = U(i, q);
          U(i, p) = c * up - s * uq;
          U(i, q) = s * up + c * uq;
        }
        for (Index i = 0; i < n; ++i) {
          const double vp = V(i, p), vq = V(i, q);
          V(i, p) = c * vp - s * vq;
          V(i, q) = s * vp + c * vq;
        }
      }
    }
    if (off < 1e-15) break;
  }
  Vector s(n);
  for (Index j = 0; j < n; ++j) s(j) = U.col(j).norm();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return s(a) > s(b); });
  Svd out{Matrix(U.rows(), n), Vector(n), Matrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    const Index j = order[static_cast<std::size_t>(k)];
    out.s(k) = s(j);
    out.U.col(k) = s(j) > 0 ? Vector(U.col(j) / s(j)) : Vector(Vector::Zero(U.rows()));
    out.V.col(k) = V.col(j);
  }
  return out;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix direct_inverse(const Matrix& M) {
  const Index n = M.rows();
  Matrix a = M;
  Matrix inv = Matrix::Identity(n, n);
  for (Index c = 0; c < n; ++c) {
    Index pivot = c;
    for (Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(pivot, c))) pivot = r;
    }
    if (a(pivot, c) == 0.0) throw std::runtime_error("direct_inverse: singular");
    a.row(c).swap(a.row(pivot));
    inv.row(c).swap(inv.row(pivot));
    const double d = a(c, c);
    a.row(c) /= d;
    inv.row(c) /= d;
    for (Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      a.row(r) -= f * a.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

/// Characteristic polynomial det(lambda I - M) by Faddeev-LeVerrier,
/// coefficients from the leading one down.
inline std::vector<double> char_poly(const Matrix& M) {
  const Index n = M.rows();
  std::vector<double> c(static_cast<std::size_t>(n + 1));
  c[0] = 1.0;
  Matrix Mk = Matrix::Zero(n, n);
  for (Index k = 1; k <= n; ++k) {
    Mk = M * Mk + c[static_cast<std::size_t>(k - 1)] * Matrix::Identity(n, n);
    c[static_cast<std::size_t>(k)] = -(M * Mk).trace() / static_cast<double>(k);
  }
  return c;
}

/// Eigenvalues of a symmetric matrix with n <= 4 as the (real) roots of the
/// characteristic polynomial, found by Durand-Kerner and polished by Newton.
inline std::vector<double> symmetric_eigenvalues(const Matrix& M) {
  if (M.rows() > 4) throw std::invalid_argument("symmetric_eigenvalues: n <= 4 only");
  const std::vector<double> c = char_poly(M);
  const std::size_t n = c.size() - 1;
  auto eval = [&](std::complex<double> z) {
    std::complex<double> v = c[0];
    for (std::size_t k = 1; k <= n; ++k) v = v * z + c[k];
    return v;
  };
  std::vector<std::complex<double>> roots(n);
  const std::complex<double> seed(0.4, 0.9);
  for (std::size_t k = 0; k < n; ++k) roots[k] = std::pow(seed, static_cast<double>(k)) * (1.0 + M.norm());
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> denom = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) denom *= roots[k] - roots[j];
      }
      roots[k] -= eval(roots[k]) / denom;
    }
  }
  std::vector<double> out;
  for (auto z : roots) {
    double x = z.real();
    for (int it = 0; it < 50; ++it) {
      double p = c[0], dp = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        dp = dp * x + p;
        p = p * x + c[k];
      }
      if (dp == 0.0) break;
      x -= p / dp;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Misclassification percentage minimized over every injective map from
/// predicted labels to true labels (exhaustive; small label sets only).
inline double brute_force_error(const std::vector<int>& predicted, const std::vector<int>& truth) {
  std::vector<int> p_ids(predicted), t_ids(truth);
  std::sort(p_ids.begin(), p_ids.end());
  p_ids.erase(std::unique(p_ids.begin(), p_ids.end()), p_ids.end());
  std::sort(t_ids.begin(), t_ids.end());
  t_ids.erase(std::unique(t_ids.begin(), t_ids.end()), t_ids.end());
  // Pad the true side with phantom labels so every predicted label can map
  // somewhere distinct.
  std::vector<int> targets = t_ids;
  int phantom = std::numeric_limits<int>::min();
  while (targets.size() < p_ids.size()) targets.push_back(phantom++);
  std::sort(targets.begin(), targets.end());
  std::size_t best = predicted.size();
  do {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      const auto k = static_cast<std::size_t>(
          std::lower_bound(p_ids.begin(), p_ids.end(), predicted[i]) - p_ids.begin());
      if (targets[k] != truth[i]) ++wrong;
    }
    best = std::min(best, wrong);
  } while (std::next_permutation(targets.begin(), targets.end()));
  return predicted.empty() ? 0.0 : 100.0 * static_cast<double>(best) / static_cast<double>(predicted.size());
}

/// sum_j |x_j . a|
inline double l1_response(const Matrix& X, const Vector& a) { return (X.transpose() * a).cwiseAbs().sum(); }

/// min ||a^T X||_1 subject to a^T x_i = 1 by projected subgradient descent.
/// The budget is split into rounds; each round restarts from the best point
/// so far with a smaller diminishing step. Returns the best objective seen.
inline double subgradient_direction(const Matrix& X, Index i, int iterations, Vector* best_a = nullptr) {
  const Vector xi = X.col(i);
  const double xi2 = xi.squaredNorm();
  Vector best_point = xi / xi2;
  double best = l1_response(X, best_point);
  constexpr int kRounds = 10;
  double step0 = 1.0 / std::max(1.0, X.norm());
  for (int round = 0; round < kRounds; ++round, step0 *= 0.3) {
    Vector a = best_point;
    for (int k = 1; k <= iterations / kRounds; ++k) {
      const Vector signs = (X.transpose() * a).unaryExpr([](double v) { return double((v > 0) - (v < 0)); });
      // Subgradient restricted to the constraint plane a^T x_i = 1.
      Vector g = X * signs;
      g -= (g.dot(xi) / xi2) * xi;
      const double gn = g.norm();
      if (gn == 0.0) break;
      a -= (step0 / std::sqrt(static_cast<double>(k))) * g / gn;
      a += ((1.0 - a.dot(xi)) / xi2) * xi;
      const double f = l1_response(X, a);
      if (f < best) {
        best = f;
        best_point = a;
      }
    }
  }
  if (best_a) *best_a = best_point;
  return best;
}

/// Exact minimum of the same program for small r: the optimum of this LP sits
/// where r-1 responses vanish besides the constraint, so every such
/// subset is tried.
inline double vertex_direction(const Matrix& X, Index i) {
  const Index r = X.rows();
  const Index n = X.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<Index> pick;
  std::function<void(Index)> rec = [&](Index start) {
    if (static_cast<Index>(pick.size()) == r - 1) {
      Matrix sys(r, r);
      Vector rhs = Vector::Zero(r);
      sys.row(0) = X.col(i).transpose();
      rhs(0) = 1.0;
      for (Index k = 0; k < r - 1; ++k) sys.row(k + 1) = X.col(pick[static_cast<std::size_t>(k)]).transpose();
      Eigen::FullPivLU<Matrix> lu(sys);
      if (lu.rank() < r) return;
      best = std::min(best, l1_response(X, lu.solve(rhs)));
      return;
    }
    for (Index j = start; j < n; ++j) {
      if (j == i) continue;
      pick.push_back(j);
      rec(j + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

}  // namespace oracle
