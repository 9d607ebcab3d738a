#ifndef DSC_NUMKERNEL_HPP
#define DSC_NUMKERNEL_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <string_view>

namespace dsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kRankTolerance = 1e-12;

/// Throws std::invalid_argument if `m` is empty or holds NaN/Inf.
void require_finite(const Matrix& m, std::string_view what);

struct SvdResult {
  Matrix U;  // rows x k, orthonormal columns
  Vector s;  // k values, non-increasing
  Matrix V;  // cols x k
};

/// Leading k singular triplets of `m`.
SvdResult thin_svd(const Matrix& m, Index k);

/// Number of singular values above kRankTolerance * s(0).
Index numerical_rank(const Vector& singular_values);

enum class SpectrumEnd { Smallest, Largest };

struct EigResult {
  Vector values;   // ascending for Smallest, descending for Largest
  Matrix vectors;  // one eigenvector per column, orthonormal
};

/// k eigenpairs of a symmetric matrix from one end of the spectrum.
EigResult sym_eig(const Matrix& m, Index k, SpectrumEnd which);

enum class SolveSide {
  Covariance,  // r x r operator on I + c X X^T, factored directly
  Gram,        // M2 x M2 operator on I + c X^T X, applied through Woodbury
};

/// Result of applying a Gram-side operator to X^T W + S.
struct LiftedSolve {
  Matrix value;            // G (X^T W + S), M2 x M2
  Matrix basis_times_value;  // X * value, r x M2
};

/// Immutable operator G = scale * (I + c * K)^-1 where K is X X^T or X^T X.
///
/// The Gram side never forms an M2 x M2 inverse: with B = I + c X X^T,
///   (I + c X^T X)^-1 = I - c X^T B^-1 X,
/// so one application costs O(r M2^2) and only the r x r matrix B is
/// factored.
class SpdSolveOperator {
 public:
  SpdSolveOperator(const Matrix& X, double coefficient, double mu, SolveSide side);

  /// G * rhs. rhs must have size() rows.
  Matrix apply(const Matrix& rhs) const;

  /// Covariance side only: column i of the result is
  /// scale * (I + c X X^T + u_i u_i^T)^-1 rhs_i, via Sherman-Morrison on the
  /// shared factorization.
  Matrix apply_rank_one_updated(const Matrix& rhs, const Matrix& updates) const;

  /// Gram side only: G (X^T W + S) and X G (X^T W + S) using two O(r M2^2)
  /// products instead of the four a naive evaluation needs.
  LiftedSolve apply_lifted(const Matrix& W, Matrix S) const;

  /// Gram side only: C = (I + c X X^T)^-1 (W - c X S) given X S, so that
  /// (I + c X^T X)^-1 (X^T W + S) = S + X^T C. Lets callers stream S in
  /// column blocks without storing it.
  Matrix lifted_correction(const Matrix& W, const Matrix& basis_times_s) const;

  const Matrix& basis() const { return basis_; }
  const Matrix& covariance() const { return covariance_; }

  /// The operator as a dense matrix. O(n^3) for the Gram side; tests only.
  Matrix to_dense() const;

  Index size() const { return side_ == SolveSide::Gram ? basis_.cols() : basis_.rows(); }
  double scale() const { return scale_; }
  double coefficient() const { return coefficient_; }
  SolveSide side() const { return side_; }
  bool uses_woodbury() const { return side_ == SolveSide::Gram; }

 private:
  Matrix basis_;
  Matrix covariance_;  // X X^T
  double coefficient_;
  double scale_;
  SolveSide side_;
  Eigen::LLT<Matrix> inner_;  // I + c X X^T
};

SpdSolveOperator make_spd_solver(const Matrix& X, double coefficient, double mu, SolveSide side);

}  // namespace dsc

#endif  // DSC_NUMKERNEL_HPP
