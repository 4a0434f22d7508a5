#include <gtest/gtest.h>

#include <cmath>

#include "runtrim/error.hpp"
#include "runtrim/nnls.hpp"
#include "runtrim/rng.hpp"

namespace runtrim {
namespace {

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = rng.normal();
  }
  return a;
}

TEST(Nnls, IdentityClampsNegativeEntries) {
  Matrix a(3, 3);
  for (std::size_t i = 0; i < 3; ++i) a(i, i) = 1.0;
  const std::vector<double> b = {1, -2, 3};
  const auto x = nnls_solve(a, b);
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_EQ(x[1], 0.0);
  EXPECT_NEAR(x[2], 3.0, 1e-12);
}

TEST(Nnls, SingleColumnIsTheMean) {
  Matrix a(2, 1, 1.0);
  const std::vector<double> b = {2, 4};
  const auto x = nnls_solve(a, b);
  EXPECT_NEAR(x[0], 3.0, 1e-12);
}

TEST(Nnls, RecoversPlantedSolutions) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const Matrix a = random_matrix(rng, 20, 4);
    std::vector<double> planted(4);
    for (auto& v : planted) v = rng.uniform() < 0.3 ? 0.0 : 5.0 * rng.uniform();
    std::vector<double> b(20, 0.0);
    for (std::size_t i = 0; i < 20; ++i) {
      for (std::size_t j = 0; j < 4; ++j) b[i] += a(i, j) * planted[j];
    }
    const auto x = nnls_solve(a, b);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(x[j], planted[j], 1e-6) << "seed " << seed;
  }
}

TEST(Nnls, SatisfiesKktConditions) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(500 + seed);
    const std::size_t m = 3 + rng.index(30);
    const std::size_t n = 1 + rng.index(8);
    const Matrix a = random_matrix(rng, m, n);
    std::vector<double> b(m);
    for (auto& v : b) v = 3.0 * rng.normal();
    const auto x = nnls_solve(a, b);

    std::vector<double> r(m);
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = -b[i];
      for (std::size_t j = 0; j < n; ++j) r[i] += a(i, j) * x[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      double g = 0.0;
      for (std::size_t i = 0; i < m; ++i) g += a(i, j) * r[i];
      ASSERT_GE(x[j], 0.0);
      if (x[j] > 0.0) EXPECT_NEAR(g, 0.0, 1e-8) << "seed " << seed;
      else EXPECT_GE(g, -1e-8) << "seed " << seed;
    }
  }
}

TEST(Nnls, RejectsBadInput) {
  Matrix a(2, 1, 1.0);
  EXPECT_THROW(nnls_solve(a, std::vector<double>{1.0}), ParameterError);
  EXPECT_THROW(nnls_solve(Matrix{}, std::vector<double>{}), ParameterError);
  EXPECT_THROW(nnls_solve(a, std::vector<double>{1.0, NAN}), ParameterError);
}

}  // namespace
}  // namespace runtrim
