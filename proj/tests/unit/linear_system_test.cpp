#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_models.hpp"
#include "varpen/errors.hpp"
#include "varpen/linear_system.hpp"

namespace varpen {
namespace {

TEST(LinearSystem, IdentityReturnsRhs) {
  LinearSystem sys = LinearSystem::identity(2);
  sys.rhs(0) = Rational(3, 2);
  sys.rhs(1) = Rational(10, 9);
  EXPECT_EQ(solve_linear_system(sys), (std::vector<Rational>{Rational(3, 2), Rational(10, 9)}));
}

TEST(LinearSystem, OneByOne) {
  const LinearSystem sys(1, {Rational(1, 2)}, {Rational(1)});
  EXPECT_EQ(solve_linear_system(sys), std::vector<Rational>{Rational(2)});
}

TEST(LinearSystem, GeoTailExpectation) {
  // x = 1 + (x + y)/2, y = 0  <=>  x/2 - y/2 = 1, y = 0
  const LinearSystem sys(2, {Rational(1, 2), Rational(-1, 2), Rational(0), Rational(1)}, {Rational(1), Rational(0)});
  EXPECT_EQ(solve_linear_system(sys), (std::vector<Rational>{Rational(2), Rational(0)}));
}

TEST(LinearSystem, NeedsRowSwap) {
  const LinearSystem sys(2, {Rational(0), Rational(1), Rational(1), Rational(0)}, {Rational(5), Rational(7)});
  EXPECT_EQ(solve_linear_system(sys), (std::vector<Rational>{Rational(7), Rational(5)}));
}

TEST(LinearSystem, SingularIsReported) {
  const LinearSystem sys(2, {Rational(1), Rational(2), Rational(2), Rational(4)}, {Rational(1), Rational(2)});
  try {
    solve_linear_system(sys);
    FAIL() << "expected SingularMatrix";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
  }
}

TEST(LinearSystem, ShapeMismatchRejected) {
  EXPECT_THROW(LinearSystem(2, {Rational(1)}, {Rational(1), Rational(2)}), Error);
}

TEST(LinearSystemProperty, RandomSystemsSolveExactly) {
  std::mt19937_64 rng(11);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    LinearSystem sys(n);
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
    std::vector<mpq_class> b(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        // sparse-ish entries make singular draws and zero pivots likely
        const Rational v = (rng() % 3 == 0) ? Rational(0) : testing::random_rational(rng, 9, 7);
        sys.at(r, c) = v;
        a[r][c] = v.raw();
      }
      sys.rhs(r) = testing::random_rational(rng, 9, 7);
      b[r] = sys.rhs(r).raw();
    }
    std::vector<Rational> x;
    try {
      x = solve_linear_system(sys);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::SingularMatrix);
      EXPECT_THROW(testing::gauss_jordan(a, b), std::runtime_error);
      continue;
    }
    ++solved;
    for (std::size_t r = 0; r < n; ++r) {
      Rational acc = 0;
      for (std::size_t c = 0; c < n; ++c) acc += sys.at(r, c) * x[c];
      EXPECT_EQ(acc, sys.rhs(r));
    }
  }
  EXPECT_GT(solved, 100);
}

}  // namespace
}  // namespace varpen
