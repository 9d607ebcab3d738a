#include "dsc/synthgen.hpp"

#include <Eigen/QR>

#include <random>
#include <stdexcept>
#include <string>

namespace dsc {

namespace {

Matrix standard_normal(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Fill column by column so the draw order is fixed by the storage order.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    purpose};
  return std::mt19937_64(seq);
}

}  // namespace

void SynthConfig::validate() const {
  const auto fail = [](const std::string& what) { throw std::invalid_argument("SynthConfig: " + what); };
  if (num_subspaces < 1) fail("N must be >= 1");
  if (points_per_cluster < 1) fail("points per cluster must be >= 1");
  if (intersection_dim < 0) fail("y must be >= 0");
  if (intersection_dim >= subspace_dim) {
    fail("intersection dimension y=" + std::to_string(intersection_dim) +
         " must be smaller than d=" + std::to_string(subspace_dim));
  }
  if (subspace_dim > ambient_dim) {
    fail("subspace dimension d=" + std::to_string(subspace_dim) + " exceeds M1=" +
         std::to_string(ambient_dim));
  }
}

Matrix orthonormal_basis(const Matrix& m) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

SynthDataset generate_dataset(const SynthConfig& cfg) {
  cfg.validate();
  const Index m1 = cfg.ambient_dim;
  const Index d = cfg.subspace_dim;
  const Index y = cfg.intersection_dim;
  const Index n_per = cfg.points_per_cluster;

  std::mt19937_64 rng = make_stream(cfg.seed, 0);
  SynthDataset out;
  out.shared_basis = orthonormal_basis(standard_normal(m1, y, rng));

  DataMatrix& data = out.data;
  data.D.resize(m1, cfg.num_points());
  data.labels = Labels(static_cast<std::size_t>(cfg.num_points()));
  for (Index c = 0; c < cfg.num_subspaces; ++c) {
    // R_i lives in the orthogonal complement of M, so S_i and S_j meet exactly in M.
    Matrix draw = standard_normal(m1, d - y, rng);
    if (y > 0) draw -= out.shared_basis * (out.shared_basis.transpose() * draw);
    Matrix basis(m1, d);
    basis.leftCols(y) = out.shared_basis;
    basis.rightCols(d - y) = orthonormal_basis(draw);
    const Matrix coefficients = standard_normal(d, n_per, rng);
    data.D.middleCols(c * n_per, n_per) = basis * coefficients;
    for (Index k = 0; k < n_per; ++k) (*data.labels)[static_cast<std::size_t>(c * n_per + k)] = static_cast<int>(c);
    out.bases.push_back(std::move(basis));
  }
  data = normalize_columns(data);
  data.source = "synth m1=" + std::to_string(m1) + " n=" + std::to_string(cfg.num_subspaces) +
                " d=" + std::to_string(d) + " y=" + std::to_string(y) +
                " per_cluster=" + std::to_string(n_per) + " seed=" + std::to_string(cfg.seed);
  return out;
}

DataMatrix generate(const SynthConfig& cfg) {
  return generate_dataset(cfg).data;
}

DataMatrix add_noise(const DataMatrix& data, const NoiseSpec& spec) {
  if (!(spec.tau >= 0.0)) throw std::invalid_argument("add_noise: tau must be >= 0");
  if (spec.tau == 0.0) return data;
  std::mt19937_64 rng = make_stream(spec.seed, 1);
  const Matrix E = standard_normal(data.D.rows(), data.D.cols(), rng);
  const double alpha = spec.tau * data.D.norm() / E.norm();
  DataMatrix out = data;
  out.D += alpha * E;
  return out;
}

}  // namespace dsc
