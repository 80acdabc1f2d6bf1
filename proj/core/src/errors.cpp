#include "jetseg/errors.hpp"

namespace jetseg {

namespace {
std::string with_position(const std::string& what, int row, int col) {
  if (row < 0 && col < 0) {
    return what;
  }
  return what + " (row " + std::to_string(row) + ", col " + std::to_string(col) + ")";
}
}  // namespace

ValueError::ValueError(const std::string& what, int row, int col)
    : Error(with_position(what, row, col)), row_(row), col_(col) {}

}  // namespace jetseg
