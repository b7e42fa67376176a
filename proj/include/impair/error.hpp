#pragma once

#include <stdexcept>
#include <string>

namespace impair {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. row/column are 1-based; 0 means "not applicable".
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : Error(describe(what, row, column)), row_(row), column_(column) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  static std::string describe(const std::string& what, std::size_t row, std::size_t column) {
    std::string s = what;
    if (row != 0) s += " (row " + std::to_string(row);
    if (row != 0 && column != 0) s += ", column " + std::to_string(column);
    if (row != 0) s += ")";
    return s;
  }

  std::size_t row_;
  std::size_t column_;
};

}  // namespace impair
