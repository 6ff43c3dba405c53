#include "varpen/linear_system.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "varpen/errors.hpp"

namespace varpen {

LinearSystem::LinearSystem(std::size_t dimension, std::vector<Rational> coefficients,
                           std::vector<Rational> rhs)
    : dimension_(dimension), coefficients_(std::move(coefficients)), rhs_(std::move(rhs)) {
  if (coefficients_.size() != dimension_ * dimension_ || rhs_.size() != dimension_) {
    throw Error(ErrorKind::InvalidArgument, "linear system shape mismatch");
  }
}

LinearSystem LinearSystem::identity(std::size_t dimension) {
  LinearSystem sys(dimension);
  for (std::size_t i = 0; i < dimension; ++i) sys.at(i, i) = 1;
  return sys;
}

std::vector<Rational> solve_linear_system(const LinearSystem& system) {
  const std::size_t n = system.dimension();
  // Work on raw mpq values; the Rational wrapper re-canonicalizes on every op.
  std::vector<mpq_class> a(n * n);
  std::vector<mpq_class> b(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] = system.at(r, c).raw();
    b[r] = system.rhs(r).raw();
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a[pivot * n + col]) == 0) ++pivot;
    if (pivot == n) {
      throw Error(ErrorKind::SingularMatrix, "no pivot in column " + std::to_string(col));
    }
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
      std::swap(b[pivot], b[col]);
    }
    const mpq_class inv = 1 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(a[r * n + col]) == 0) continue;
      const mpq_class factor = a[r * n + col] * inv;
      a[r * n + col] = 0;
      for (std::size_t c = col + 1; c < n; ++c) {
        if (sgn(a[col * n + c]) != 0) a[r * n + c] -= factor * a[col * n + c];
      }
      b[r] -= factor * b[col];
    }
  }

  std::vector<mpq_class> x(n);
  for (std::size_t i = n; i-- > 0;) {
    mpq_class acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) {
      if (sgn(a[i * n + c]) != 0) acc -= a[i * n + c] * x[c];
    }
    x[i] = acc / a[i * n + i];
  }

  std::vector<Rational> result;
  result.reserve(n);
  for (auto& v : x) result.emplace_back(std::move(v));

  for (std::size_t r = 0; r < n; ++r) {
    mpq_class acc = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!system.at(r, c).is_zero()) acc += system.at(r, c).raw() * result[c].raw();
    }
    if (acc != system.rhs(r).raw()) {
      throw std::logic_error("linear solve failed verification at row " + std::to_string(r));
    }
  }
  return result;
}

}  // namespace varpen
