#ifndef DSC_DIRSEARCH_HPP
#define DSC_DIRSEARCH_HPP

#include "dsc/numkernel.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace dsc {

/// How the A-subproblem is solved inside each ADMM iteration.
enum class AUpdateMode {
  /// Shared operator mu^-1 (I + 2 X X^T)^-1 for every column.
  Paper,
  /// Per-column minimizer mu^-1 (I + X X^T + x_i x_i^T)^-1 via a rank-one
  /// update of the shared (I + X X^T) factorization.
  Exact,
};

struct AdmmConfig {
  int p = 2;            // 1: elementwise l1 on X^T A; 2: sum of column l2 norms
  double mu = 3.3;
  double gamma = 0.01;  // weight on ||Z||_1
  int max_iters = 300;
  double tol = 1e-5;    // on the max of the four constraint residuals
  /// When > 0, convergence also needs Residuals::dual <= dual_tol. The
  /// constraint residuals alone can reach tol while the objective is still
  /// drifting.
  double dual_tol = 0.0;
  AUpdateMode a_update = AUpdateMode::Paper;

  void validate() const;
};

AUpdateMode parse_a_update_mode(const std::string& text);
std::string to_string(AUpdateMode mode);

/// Max-norms of the four constraint violations.
struct Residuals {
  double lift = 0.0;      // ||A - X U||
  double diagonal = 0.0;  // ||diag(A^T X) - 1||
  double response = 0.0;  // ||T - X^T A||
  double split = 0.0;     // ||Z - U||
  double dual = 0.0;      // mu times the largest change of T, Z or U in the last step

  /// Largest of the four constraint residuals (dual excluded).
  double max() const;
};

/// Primal variables and multipliers for
///   min ||T||_{1,p} + gamma ||Z||_1
///   s.t. A = X U, U = Z, T = X^T A, diag(A^T X) = 1.
struct AdmmState {
  Matrix A;   // r x M2
  Matrix U;   // M2 x M2
  Matrix Z;   // M2 x M2
  Matrix T;   // M2 x M2
  Matrix Y1;  // r x M2
  Vector y2;  // M2
  Matrix Y3;  // M2 x M2
  Matrix Y4;  // M2 x M2
  int iteration = 0;
  Residuals residuals;

  /// r x M2 products carried from one step to the next so the step streams
  /// each M2 x M2 matrix a minimal number of times. admm_step recomputes
  /// them when `valid` is false; clear it after editing U, T or Y3 by hand.
  struct Cache {
    Matrix lifted;     // X U
    Matrix projected;  // X (mu T + Y3)
    double mu = 0.0;
    bool valid = false;
  } cache;
};

struct DirectionSet {
  Matrix directions;  // r x M2, column i is the direction for point i
  Matrix responses;   // M2 x M2, |directions^T X|; row i scores every point for point i
  bool converged = false;
  int iterations = 0;
  Residuals final_residuals;
};

/// Raised when an iterate stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& variable, int iteration);
  const std::string& variable() const { return variable_; }
  int iteration() const { return iteration_; }

 private:
  std::string variable_;
  int iteration_;
};

/// sgn(c) max(|c| - eps, 0).
inline double soft_threshold(double c, double eps) {
  if (c > eps) return c - eps;
  if (c < -eps) return c + eps;
  return 0.0;
}

Matrix soft_threshold(const Matrix& C, double eps);

/// Column-wise group shrinkage: column i becomes zero when ||c_i|| <= eps and
/// c_i (1 - eps / ||c_i||) otherwise.
Matrix column_shrink(const Matrix& C, double eps);

/// Operators the iteration needs for a given X. The A-side operator carries
/// coefficient 2 in Paper mode and 1 in Exact mode.
struct AdmmOperators {
  SpdSolveOperator a_side;  // r x r
  SpdSolveOperator u_side;  // M2 x M2 (Woodbury)
};

AdmmOperators make_admm_operators(const Matrix& X, const AdmmConfig& cfg);

/// A = X, U = Z = I, T = X^T A, multipliers zero.
AdmmState initial_state(const Matrix& X);

/// All-zero state of the right shape.
AdmmState zero_state(const Matrix& X);

/// One sweep of the A, T, Z, U updates followed by the four multiplier
/// ascent steps. Throws DivergenceError on a non-finite iterate.
AdmmState admm_step(AdmmState state, const Matrix& X, const AdmmConfig& cfg,
                    const AdmmOperators& ops);

/// Called after every iteration; return false to stop early.
using IterationObserver = std::function<bool(const AdmmState&)>;

/// Iterates from initial_state(X) until every residual is <= tol or
/// max_iters is reached.
DirectionSet solve_directions(const Matrix& X, const AdmmConfig& cfg,
                              const IterationObserver& observer = {});

/// ||X^T A||_{1,p}.
double direction_objective(const Matrix& X, const Matrix& A, int p);

}  // namespace dsc

#endif  // DSC_DIRSEARCH_HPP
