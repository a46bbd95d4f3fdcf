#pragma once

#include <string>
#include <vector>

#include "orthoreg/types.hpp"

namespace orthoreg {

/// Dense regression design. Columns are named so downstream causal extraction
/// can find treatment coefficients without positional bookkeeping.
struct DesignMatrix {
  Matrix values;
  std::vector<std::string> column_names;
  bool has_intercept = false;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  /// Empty design with an intercept column of ones.
  static DesignMatrix with_intercept(Index n);

  void add_column(const std::string& name, const Vector& column);

  Index column_index(const std::string& name) const;  // -1 if absent

  /// Throws DataError on non-finite entries or name/shape mismatches.
  void validate() const;
};

}  // namespace orthoreg
