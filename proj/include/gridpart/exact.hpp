#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gridpart {

using Rational = boost::multiprecision::cpp_rational;

/// Nearest multiple of 1e-9. Decimal inputs with at most nine fractional
/// digits come back exactly.
Rational to_rational(double x);

double to_double(const Rational& r);

/// Dense row-major rational matrix, just enough for determinants and solves.
class RationalMatrix {
 public:
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> data_;
};

/// Exact determinant by fraction-aware Gaussian elimination.
Rational determinant(RationalMatrix a);

/// Solves A x = b exactly; throws `Error(SingularSystem)` when A is singular.
std::vector<Rational> solve_exact(RationalMatrix a, std::vector<Rational> b);

}  // namespace gridpart
