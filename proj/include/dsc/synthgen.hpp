#ifndef DSC_SYNTHGEN_HPP
#define DSC_SYNTHGEN_HPP

#include "dsc/datamodel.hpp"

#include <cstdint>
#include <vector>

namespace dsc {

/// Union of N subspaces S_i = M (+) R_i in R^M1, each of dimension d, sharing
/// the y-dimensional subspace M.
struct SynthConfig {
  Index ambient_dim = 40;         // M1
  Index num_subspaces = 4;        // N
  Index subspace_dim = 10;        // d
  Index intersection_dim = 0;     // y
  Index points_per_cluster = 100;
  std::uint64_t seed = 0;

  /// Requires 0 <= y < d <= M1, N >= 1 and at least one point per cluster.
  void validate() const;
  Index num_points() const { return num_subspaces * points_per_cluster; }
};

struct NoiseSpec {
  double tau = 0.0;  // ||alpha E||_F / ||D||_F
  std::uint64_t seed = 0;
};

struct SynthDataset {
  DataMatrix data;              // columns unit-normalized, clusters contiguous
  Matrix shared_basis;          // M1 x y
  std::vector<Matrix> bases;    // V_i = [M R_i], M1 x d, orthonormal
};

SynthDataset generate_dataset(const SynthConfig& cfg);
DataMatrix generate(const SynthConfig& cfg);

/// D + alpha E with E standard normal and alpha chosen so the Frobenius
/// ratio equals tau. tau = 0 returns the input unchanged.
DataMatrix add_noise(const DataMatrix& data, const NoiseSpec& spec);

/// Orthonormal basis for the column span of a full-column-rank matrix.
Matrix orthonormal_basis(const Matrix& m);

}  // namespace dsc

#endif  // DSC_SYNTHGEN_HPP
