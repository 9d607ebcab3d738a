#ifndef DSC_HUNGARIAN_HPP
#define DSC_HUNGARIAN_HPP

#include "dsc/numkernel.hpp"

#include <vector>

namespace dsc {

/// Minimum-cost assignment of rows to distinct columns (rows <= cols).
/// Returns the column assigned to each row.
std::vector<Index> solve_assignment(const Matrix& cost);

}  // namespace dsc

#endif  // DSC_HUNGARIAN_HPP
