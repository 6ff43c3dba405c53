#pragma once

#include <cstddef>
#include <vector>

#include "varpen/rational.hpp"

namespace varpen {

/// Dense square system A·x = b over the rationals.
class LinearSystem {
 public:
  explicit LinearSystem(std::size_t dimension)
      : dimension_(dimension), coefficients_(dimension * dimension), rhs_(dimension) {}
  LinearSystem(std::size_t dimension, std::vector<Rational> coefficients, std::vector<Rational> rhs);

  std::size_t dimension() const noexcept { return dimension_; }

  Rational& at(std::size_t row, std::size_t col) { return coefficients_[row * dimension_ + col]; }
  const Rational& at(std::size_t row, std::size_t col) const {
    return coefficients_[row * dimension_ + col];
  }
  Rational& rhs(std::size_t row) { return rhs_[row]; }
  const Rational& rhs(std::size_t row) const { return rhs_[row]; }

  static LinearSystem identity(std::size_t dimension);

 private:
  std::size_t dimension_;
  std::vector<Rational> coefficients_;  // row-major
  std::vector<Rational> rhs_;
};

/// Gaussian elimination with first-nonzero pivoting. The returned solution is
/// checked against the original system before it is handed back.
/// Throws SingularMatrix when some column has no pivot.
std::vector<Rational> solve_linear_system(const LinearSystem& system);

}  // namespace varpen
