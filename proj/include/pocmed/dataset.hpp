#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pocmed/errors.hpp"

namespace pocmed {

/// Column-role assignment by index into Dataset::columns.
struct Roles {
  std::vector<std::size_t> x;  // treatment columns
  std::size_t m = 0;           // first mediator
  std::size_t n = 0;           // second mediator
  std::size_t y = 0;           // outcome
  std::vector<std::size_t> c;  // covariate columns
};

/// In-memory numeric table (row-major), with no missing values after
/// ingestion.
struct Dataset {
  std::vector<std::string> columns;
  std::vector<double> data;  // n_rows * columns.size(), row-major
  std::size_t n_rows = 0;
  Roles roles;

  double at(std::size_t row, std::size_t col) const {
    return data[row * columns.size() + col];
  }
};

}  // namespace pocmed
