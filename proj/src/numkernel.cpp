#include "dsc/numkernel.hpp"

#include <Eigen/SVD>

#ifdef DSC_HAVE_LAPACKE
#include <lapacke.h>
#endif

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsc {

void require_finite(const Matrix& m, std::string_view what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw std::invalid_argument(std::string(what) + ": empty matrix");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

SvdResult thin_svd(const Matrix& m, Index k) {
  require_finite(m, "thin_svd");
  if (k < 1 || k > std::min(m.rows(), m.cols())) {
    throw std::invalid_argument("thin_svd: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(std::min(m.rows(), m.cols())) + "]");
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU().leftCols(k), svd.singularValues().head(k), svd.matrixV().leftCols(k)};
}

Index numerical_rank(const Vector& singular_values) {
  if (singular_values.size() == 0 || singular_values(0) <= 0.0) return 0;
  const double cutoff = kRankTolerance * singular_values(0);
  Index rank = 0;
  while (rank < singular_values.size() && singular_values(rank) > cutoff) ++rank;
  return rank;
}

EigResult sym_eig(const Matrix& m, Index k, SpectrumEnd which) {
  require_finite(m, "sym_eig");
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  if (k < 1 || k > m.rows()) throw std::invalid_argument("sym_eig: k out of range");
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-10 * m.norm()) {
    throw std::invalid_argument("sym_eig: matrix is not symmetric (relative asymmetry " +
                                std::to_string(asym / m.norm()) + ")");
  }
  // Both halves are averaged so neither solver depends on which one it reads.
  Matrix sym = 0.5 * (m + m.transpose());
  const Index n = sym.rows();
  EigResult out;
#ifdef DSC_HAVE_LAPACKE
  // Partial spectrum: only the k requested eigenpairs are computed.
  const lapack_int il = which == SpectrumEnd::Smallest ? 1 : static_cast<lapack_int>(n - k + 1);
  const lapack_int iu = which == SpectrumEnd::Smallest ? static_cast<lapack_int>(k)
                                                       : static_cast<lapack_int>(n);
  Vector values(n);
  Matrix vectors(n, k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), sym.data(),
      static_cast<lapack_int>(n), 0.0, 0.0, il, iu, 0.0, &found, values.data(), vectors.data(),
      static_cast<lapack_int>(n), support.data());
  if (info != 0 || found != static_cast<lapack_int>(k)) {
    throw std::runtime_error("sym_eig: eigensolver failed (info " + std::to_string(info) + ")");
  }
  if (which == SpectrumEnd::Smallest) {
    out.values = values.head(k);
    out.vectors = std::move(vectors);
  } else {
    out.values = values.head(k).reverse();
    out.vectors = vectors.rowwise().reverse();
  }
#else
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("sym_eig: eigensolver failed");
  if (which == SpectrumEnd::Smallest) {
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
  } else {
    out.values = es.eigenvalues().tail(k).reverse();
    out.vectors = es.eigenvectors().rightCols(k).rowwise().reverse();
  }
#endif
  return out;
}

SpdSolveOperator::SpdSolveOperator(const Matrix& X, double coefficient, double mu, SolveSide side)
    : basis_(X), coefficient_(coefficient), scale_(0.0), side_(side) {
  if (!(coefficient > 0.0)) throw std::invalid_argument("make_spd_solver: coefficient must be > 0");
  if (!(mu > 0.0)) throw std::invalid_argument("make_spd_solver: mu must be > 0");
  require_finite(X, "make_spd_solver");
  scale_ = 1.0 / mu;
  covariance_ = X * X.transpose();
  inner_.compute(Matrix::Identity(X.rows(), X.rows()) + coefficient * covariance_);
  if (inner_.info() != Eigen::Success) {
    throw std::runtime_error("make_spd_solver: factorization failed");
  }
}

Matrix SpdSolveOperator::apply(const Matrix& rhs) const {
  if (rhs.rows() != size()) throw std::invalid_argument("SpdSolveOperator::apply: size mismatch");
  if (side_ == SolveSide::Covariance) return scale_ * inner_.solve(rhs);
  Matrix projected = basis_ * rhs;
  inner_.solveInPlace(projected);
  Matrix out = rhs;
  out.noalias() -= coefficient_ * (basis_.transpose() * projected);
  out *= scale_;
  return out;
}

Matrix SpdSolveOperator::apply_rank_one_updated(const Matrix& rhs, const Matrix& updates) const {
  if (side_ != SolveSide::Covariance) {
    throw std::logic_error("apply_rank_one_updated requires the covariance side");
  }
  if (rhs.rows() != size() || updates.rows() != size() || rhs.cols() != updates.cols()) {
    throw std::invalid_argument("apply_rank_one_updated: size mismatch");
  }
  Matrix z = inner_.solve(rhs);
  const Matrix w = inner_.solve(updates);
  for (Index i = 0; i < rhs.cols(); ++i) {
    const double num = updates.col(i).dot(z.col(i));
    const double den = 1.0 + updates.col(i).dot(w.col(i));
    z.col(i) -= (num / den) * w.col(i);
  }
  return scale_ * z;
}

LiftedSolve SpdSolveOperator::apply_lifted(const Matrix& W, Matrix S) const {
  if (side_ != SolveSide::Gram) throw std::logic_error("apply_lifted requires the Gram side");
  if (S.rows() != basis_.cols()) throw std::invalid_argument("apply_lifted: size mismatch");
  const Matrix basis_s = basis_ * S;
  const Matrix inner = lifted_correction(W, basis_s);

  LiftedSolve out;
  out.value = std::move(S);
  out.value.noalias() += basis_.transpose() * inner;
  out.value *= scale_;
  out.basis_times_value = basis_s;
  out.basis_times_value.noalias() += covariance_ * inner;
  out.basis_times_value *= scale_;
  return out;
}

Matrix SpdSolveOperator::lifted_correction(const Matrix& W, const Matrix& basis_times_s) const {
  if (side_ != SolveSide::Gram) throw std::logic_error("lifted_correction requires the Gram side");
  if (W.rows() != basis_.rows() || basis_times_s.rows() != basis_.rows() ||
      W.cols() != basis_times_s.cols()) {
    throw std::invalid_argument("lifted_correction: size mismatch");
  }
  Matrix inner = W - coefficient_ * basis_times_s;
  inner_.solveInPlace(inner);
  return inner;
}

Matrix SpdSolveOperator::to_dense() const {
  return apply(Matrix::Identity(size(), size()));
}

SpdSolveOperator make_spd_solver(const Matrix& X, double coefficient, double mu, SolveSide side) {
  return SpdSolveOperator(X, coefficient, mu, side);
}

}  // namespace dsc
