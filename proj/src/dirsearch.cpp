#include "dsc/dirsearch.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dsc {

void AdmmConfig::validate() const {
  if (p != 1 && p != 2) throw std::invalid_argument("AdmmConfig: p must be 1 or 2");
  if (!(mu > 0.0)) throw std::invalid_argument("AdmmConfig: mu must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("AdmmConfig: gamma must be >= 0");
  if (max_iters < 1) throw std::invalid_argument("AdmmConfig: max_iters must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("AdmmConfig: tol must be > 0");
  if (!(dual_tol >= 0.0)) throw std::invalid_argument("AdmmConfig: dual_tol must be >= 0");
}

AUpdateMode parse_a_update_mode(const std::string& text) {
  if (text == "paper") return AUpdateMode::Paper;
  if (text == "exact") return AUpdateMode::Exact;
  throw std::invalid_argument("unknown A-update mode '" + text + "' (paper | exact)");
}

std::string to_string(AUpdateMode mode) {
  return mode == AUpdateMode::Paper ? "paper" : "exact";
}

double Residuals::max() const {
  return std::max({lift, diagonal, response, split});
}

DivergenceError::DivergenceError(const std::string& variable, int iteration)
    : std::runtime_error("ADMM diverged: non-finite " + variable + " at iteration " +
                         std::to_string(iteration)),
      variable_(variable),
      iteration_(iteration) {}

Matrix soft_threshold(const Matrix& C, double eps) {
  return (C.array() - eps).max(0.0) + (C.array() + eps).min(0.0);
}

Matrix column_shrink(const Matrix& C, double eps) {
  Matrix H = C;
  for (Index j = 0; j < H.cols(); ++j) {
    const double norm = H.col(j).norm();
    if (norm <= eps) {
      H.col(j).setZero();
    } else {
      H.col(j) *= 1.0 - eps / norm;
    }
  }
  return H;
}

AdmmOperators make_admm_operators(const Matrix& X, const AdmmConfig& cfg) {
  const double a_coefficient = cfg.a_update == AUpdateMode::Paper ? 2.0 : 1.0;
  return {make_spd_solver(X, a_coefficient, cfg.mu, SolveSide::Covariance),
          make_spd_solver(X, 1.0, cfg.mu, SolveSide::Gram)};
}

AdmmState zero_state(const Matrix& X) {
  const Index r = X.rows();
  const Index n = X.cols();
  AdmmState s;
  s.A = Matrix::Zero(r, n);
  s.U = Matrix::Zero(n, n);
  s.Z = Matrix::Zero(n, n);
  s.T = Matrix::Zero(n, n);
  s.Y1 = Matrix::Zero(r, n);
  s.y2 = Vector::Zero(n);
  s.Y3 = Matrix::Zero(n, n);
  s.Y4 = Matrix::Zero(n, n);
  return s;
}

AdmmState initial_state(const Matrix& X) {
  AdmmState s = zero_state(X);
  const Index n = X.cols();
  s.A = X;
  s.U = Matrix::Identity(n, n);
  s.Z = s.U;
  s.T.noalias() = X.transpose() * s.A;
  s.residuals.diagonal = (s.T.diagonal().array() - 1.0).abs().maxCoeff();
  return s;
}

namespace {

void check_shapes(const AdmmState& s, const Matrix& X) {
  const Index r = X.rows();
  const Index n = X.cols();
  const bool ok = s.A.rows() == r && s.A.cols() == n && s.Y1.rows() == r && s.Y1.cols() == n &&
                  s.y2.size() == n && s.U.rows() == n && s.U.cols() == n && s.Z.rows() == n &&
                  s.Z.cols() == n && s.T.rows() == n && s.T.cols() == n && s.Y3.rows() == n &&
                  s.Y3.cols() == n && s.Y4.rows() == n && s.Y4.cols() == n;
  if (!ok) throw std::invalid_argument("admm_step: state dimensions do not match X");
}

constexpr Index kBlock = 16;

void refresh_cache(AdmmState& s, const Matrix& X, double mu) {
  auto& c = s.cache;
  if (c.valid && c.mu == mu && c.lifted.rows() == X.rows() && c.lifted.cols() == X.cols()) return;
  c.lifted.noalias() = X * s.U;
  c.projected.noalias() = X * (mu * s.T + s.Y3);
  c.mu = mu;
  c.valid = true;
}

}  // namespace

AdmmState admm_step(AdmmState s, const Matrix& X, const AdmmConfig& cfg, const AdmmOperators& ops) {
  check_shapes(s, X);
  const Index r = X.rows();
  const Index n = X.cols();
  const double mu = cfg.mu;
  const double inv_mu = 1.0 / mu;
  const double z_eps = cfg.gamma * inv_mu;
  refresh_cache(s, X, mu);
  ++s.iteration;

  // The step is bandwidth bound, so each M2 x M2 matrix is streamed in
  // column blocks and only the r x M2 products travel between passes.

  // A: G1 (mu X U + X (mu T + Y3) + X diag(mu - y2) - Y1)
  Matrix rhs = mu * s.cache.lifted + s.cache.projected;
  rhs.noalias() += X * (mu * Vector::Ones(n) - s.y2).asDiagonal();
  rhs -= s.Y1;
  s.A = cfg.a_update == AUpdateMode::Paper ? ops.a_side.apply(rhs)
                                           : ops.a_side.apply_rank_one_updated(rhs, X);

  Vector diagonal(n);
  Matrix basis_s(r, n);  // X (mu Z + Y4)
  Matrix resp(n, kBlock), lifted_t(n, kBlock), lifted_s(n, kBlock);
  Vector fresh(n);
  double response_residual = 0.0;
  double change = 0.0;
  double sum_t = 0.0, sum_y3 = 0.0, sum_z = 0.0;

  for (Index j0 = 0; j0 < n; j0 += kBlock) {
    const Index b = std::min(kBlock, n - j0);
    resp.leftCols(b).noalias() = X.transpose() * s.A.middleCols(j0, b);
    for (Index k = 0; k < b; ++k) {
      const Index j = j0 + k;
      diagonal(j) = resp(j, k) - 1.0;
      auto t = s.T.col(j);
      auto y3 = s.Y3.col(j);
      fresh = resp.col(k) - inv_mu * y3;
      if (cfg.p == 1) {
        fresh = (fresh.array() - inv_mu).max(0.0) + (fresh.array() + inv_mu).min(0.0);
      } else {
        const double norm = fresh.norm();
        if (norm <= inv_mu) {
          fresh.setZero();
        } else {
          fresh *= 1.0 - inv_mu / norm;
        }
      }
      change = std::max(change, (fresh - t).lpNorm<Eigen::Infinity>());
      t = fresh;
      response_residual = std::max(response_residual, (t - resp.col(k)).lpNorm<Eigen::Infinity>());
      y3 += mu * (t - resp.col(k));
      lifted_t.col(k) = mu * t + y3;
      sum_t += t.sum();
      sum_y3 += y3.sum();

      auto z = s.Z.col(j);
      fresh = s.U.col(j) - inv_mu * s.Y4.col(j);
      fresh = (fresh.array() - z_eps).max(0.0) + (fresh.array() + z_eps).min(0.0);
      change = std::max(change, (fresh - z).lpNorm<Eigen::Infinity>());
      z = fresh;
      lifted_s.col(k) = mu * z + s.Y4.col(j);
      sum_z += z.sum();
    }
    s.cache.projected.middleCols(j0, b).noalias() = X * lifted_t.leftCols(b);
    basis_s.middleCols(j0, b).noalias() = X * lifted_s.leftCols(b);
  }

  // U: G2 (X^T (mu A + Y1) + (mu Z + Y4)) = (S + X^T C) / mu.
  const Matrix inner = ops.u_side.lifted_correction(mu * s.A + s.Y1, basis_s);
  s.cache.lifted = basis_s;
  s.cache.lifted.noalias() += ops.u_side.covariance() * inner;
  s.cache.lifted *= inv_mu;

  double split_residual = 0.0;
  double sum_u = 0.0, sum_y4 = 0.0;
  Matrix u_next(n, kBlock);
  for (Index j0 = 0; j0 < n; j0 += kBlock) {
    const Index b = std::min(kBlock, n - j0);
    auto u = s.U.middleCols(j0, b);
    u_next.leftCols(b).noalias() = X.transpose() * inner.middleCols(j0, b);
    for (Index k = 0; k < b; ++k) {
      const Index j = j0 + k;
      auto uj = u.col(k);
      auto z = s.Z.col(j);
      auto y4 = s.Y4.col(j);
      fresh = inv_mu * (mu * z + y4 + u_next.col(k));
      change = std::max(change, (fresh - uj).lpNorm<Eigen::Infinity>());
      uj = fresh;
      split_residual = std::max(split_residual, (z - uj).lpNorm<Eigen::Infinity>());
      y4 += mu * (z - uj);
      sum_u += uj.sum();
      sum_y4 += y4.sum();
    }
  }

  const Matrix lift = s.A - s.cache.lifted;
  s.Y1 += mu * lift;
  s.y2 += mu * diagonal;

  s.residuals.lift = lift.lpNorm<Eigen::Infinity>();
  s.residuals.diagonal = diagonal.lpNorm<Eigen::Infinity>();
  s.residuals.response = response_residual;
  s.residuals.split = split_residual;
  s.residuals.dual = mu * change;

  // A NaN or Inf anywhere makes the running sum non-finite.
  const std::array<std::pair<const char*, double>, 8> sums{{{"A", s.A.sum()},
                                                             {"T", sum_t},
                                                             {"Z", sum_z},
                                                             {"U", sum_u},
                                                             {"Y1", s.Y1.sum()},
                                                             {"y2", s.y2.sum()},
                                                             {"Y3", sum_y3},
                                                             {"Y4", sum_y4}}};
  for (const auto& [name, total] : sums) {
    if (!std::isfinite(total)) throw DivergenceError(name, s.iteration);
  }
  return s;
}

DirectionSet solve_directions(const Matrix& X, const AdmmConfig& cfg,
                              const IterationObserver& observer) {
  cfg.validate();
  require_finite(X, "solve_directions");
  if (X.norm() == 0.0) throw std::invalid_argument("solve_directions: X is all zero");

  const AdmmOperators ops = make_admm_operators(X, cfg);
  AdmmState state = initial_state(X);
  DirectionSet out;
  for (int it = 0; it < cfg.max_iters; ++it) {
    state = admm_step(std::move(state), X, cfg, ops);
    out.converged = state.residuals.max() <= cfg.tol &&
                    (cfg.dual_tol == 0.0 || state.residuals.dual <= cfg.dual_tol);
    if (observer && !observer(state)) break;
    if (out.converged) break;
  }
  out.iterations = state.iteration;
  out.final_residuals = state.residuals;
  out.directions = std::move(state.A);
  out.responses = (out.directions.transpose() * X).cwiseAbs();
  return out;
}

double direction_objective(const Matrix& X, const Matrix& A, int p) {
  const Matrix responses = X.transpose() * A;
  if (p == 1) return responses.cwiseAbs().sum();
  if (p == 2) return responses.colwise().norm().sum();
  throw std::invalid_argument("direction_objective: p must be 1 or 2");
}

}  // namespace dsc
