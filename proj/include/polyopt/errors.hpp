#pragma once

#include <stdexcept>
#include <string>

namespace polyopt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Requested operation needs a higher truncation degree than available.
struct DegreeTooSmall : Error {
  using Error::Error;
};

// Pivoting / rank decisions fell below tolerance; data is numerically degenerate.
struct NumericalBreakdown : Error {
  using Error::Error;
};

struct TooManyProducts : Error {
  using Error::Error;
};

struct SubsetTooLarge : Error {
  using Error::Error;
};

struct NonGenericCombination : Error {
  using Error::Error;
};

struct ComplexEigenvalue : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : Error(msg + " (line " + std::to_string(line_) + ", column " + std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

}  // namespace polyopt
