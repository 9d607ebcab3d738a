#ifndef DSC_DATAMODEL_HPP
#define DSC_DATAMODEL_HPP

#include "dsc/numkernel.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dsc {

using Labels = std::vector<int>;

/// Column-per-point dataset: D is M1 x M2 (ambient dimension x points).
struct DataMatrix {
  Matrix D;
  std::optional<Labels> labels;
  std::string source;

  Index ambient_dim() const { return D.rows(); }
  Index num_points() const { return D.cols(); }
};

/// How many leading left singular vectors span the projected data.
struct RankPolicy {
  enum class Kind { Exact, Fixed, Energy };
  Kind kind = Kind::Energy;
  Index rank = 0;          // Fixed
  double threshold = 0.95;  // Energy

  static RankPolicy exact() { return {Kind::Exact, 0, 0.0}; }
  static RankPolicy fixed(Index r) { return {Kind::Fixed, r, 0.0}; }
  static RankPolicy energy(double t) { return {Kind::Energy, 0, t}; }

  /// "exact", "fixed:<r>" or "energy:<fraction>".
  static RankPolicy parse(const std::string& text);
  std::string to_string() const;
};

struct ProjectedData {
  Matrix Q;  // M1 x r, orthonormal columns
  Matrix X;  // r x M2, X = Q^T D
  Index rank = 0;
  double energy_captured = 0.0;
  Vector singular_values;  // all of them, for diagnostics
};

/// Scales every column to unit l2 norm. Throws on an all-zero column.
DataMatrix normalize_columns(const DataMatrix& data);

ProjectedData project_to_span(const DataMatrix& data, const RankPolicy& policy);

enum class InputFormat { Csv, PgmDir };

/// CSV: one point per row, optional `# has_labels=true` comment line, labels
/// in the last column. PGM directory: one image per column, pixels scaled to
/// [0, 1], label from the file-name prefix before the first '_'.
DataMatrix load_matrix(const std::filesystem::path& path, InputFormat format);

/// Writes `data` as CSV with 17 significant digits. `header` lines are emitted
/// as `# ` comments after the has_labels line.
void write_matrix(const std::filesystem::path& path, const DataMatrix& data,
                  const std::vector<std::string>& header = {});

/// Single-column label file with a `label` header.
void write_labels(const std::filesystem::path& path, const Labels& labels,
                  const std::vector<std::string>& header = {});
Labels read_labels(const std::filesystem::path& path);

/// Distinct label count, or 0 for an empty vector.
int count_classes(const Labels& labels);

}  // namespace dsc

#endif  // DSC_DATAMODEL_HPP
