#pragma once

#include <stdexcept>
#include <string>

namespace jetseg {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can map a whole family to a single exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// A parsed value that violates its domain (non-numeric, non-finite, <= 0 K).
// Carries the 0-based position when it comes from a grid file.
class ValueError : public Error {
 public:
  explicit ValueError(const std::string& what, int row = -1, int col = -1);
  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }

 private:
  int row_;
  int col_;
};

class LabelError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class MathError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NoFlameError : public Error {
 public:
  using Error::Error;
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

class DivisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace jetseg
