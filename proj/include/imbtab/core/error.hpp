#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imbtab {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- ingestion ---

class MissingFileError : public Error {
 public:
  explicit MissingFileError(const std::string& path)
      : Error("missing file: " + path), path(path) {}
  std::string path;
};

class MissingLabelColumnError : public Error {
 public:
  explicit MissingLabelColumnError(const std::string& column)
      : Error("label column not found: " + column) {}
};

class NonNumericCellError : public Error {
 public:
  NonNumericCellError(std::size_t row, std::size_t col, const std::string& cell)
      : Error("non-numeric cell \"" + cell + "\" at row " + std::to_string(row) +
              ", column " + std::to_string(col)),
        row(row),
        col(col) {}
  std::size_t row, col;  // 1-based data row (header excluded), 1-based column
};

class MissingValueError : public Error {
 public:
  MissingValueError(std::size_t row, std::size_t col)
      : Error("missing value at row " + std::to_string(row) + ", column " +
              std::to_string(col)),
        row(row),
        col(col) {}
  std::size_t row, col;
};

class InvalidLabelError : public Error {
 public:
  InvalidLabelError(std::size_t row, const std::string& cell)
      : Error("label must be 0 or 1, got \"" + cell + "\" at row " +
              std::to_string(row)),
        row(row) {}
  std::size_t row;
};

// --- splitting / sampling ---

class TooFewRowsPerClassError : public Error {
 public:
  using Error::Error;
};

class DegenerateSplitError : public Error {
 public:
  using Error::Error;
};

class ClassTooSmallError : public Error {
 public:
  using Error::Error;
};

// --- numerics / models ---

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

class NonFiniteLossError : public Error {
 public:
  explicit NonFiniteLossError(std::size_t epoch)
      : Error("non-finite loss at epoch " + std::to_string(epoch)), epoch(epoch) {}
  std::size_t epoch;
};

class SingleClassInputError : public Error {
 public:
  using Error::Error;
};

// --- hyperparameter search ---

class SpecConflictError : public Error {
 public:
  using Error::Error;
};

class OutOfOrderStepError : public Error {
 public:
  using Error::Error;
};

class NoCompleteTrialsError : public Error {
 public:
  using Error::Error;
};

// --- ensembles / metrics ---

class AllZeroScoresError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace imbtab
