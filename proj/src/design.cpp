#include "orthoreg/design.hpp"

#include <algorithm>

#include "orthoreg/errors.hpp"

namespace orthoreg {

DesignMatrix DesignMatrix::with_intercept(Index n) {
  DesignMatrix d;
  d.values = Matrix::Ones(n, 1);
  d.column_names = {"intercept"};
  d.has_intercept = true;
  return d;
}

void DesignMatrix::add_column(const std::string& name, const Vector& column) {
  if (values.size() == 0 && values.cols() == 0) {
    values.resize(column.size(), 0);
  }
  if (column.size() != values.rows())
    throw DataError("design column '" + name + "' has length " + std::to_string(column.size()) +
                    ", expected " + std::to_string(values.rows()));
  values.conservativeResize(Eigen::NoChange, values.cols() + 1);
  values.col(values.cols() - 1) = column;
  column_names.push_back(name);
}

Index DesignMatrix::column_index(const std::string& name) const {
  auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) return -1;
  return static_cast<Index>(it - column_names.begin());
}

void DesignMatrix::validate() const {
  if (static_cast<Index>(column_names.size()) != values.cols())
    throw DataError("design has " + std::to_string(values.cols()) + " columns but " +
                    std::to_string(column_names.size()) + " names");
  if (!values.allFinite()) throw DataError("design matrix contains non-finite entries");
}

}  // namespace orthoreg
