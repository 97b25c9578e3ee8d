#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "fifspec/errors.hpp"
#include "fifspec/numerics.hpp"
#include "oracles.hpp"

using namespace fifspec;

namespace {

std::vector<Complex> random_sequence(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<Complex> x(n);
  for (Complex& v : x) v = {g(rng), g(rng)};
  return x;
}

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> g;
  ComplexMatrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = {g(rng), g(rng)};
  return a;
}

}  // namespace

TEST(Dft, ImpulseAndConstant) {
  const std::vector<double> impulse = {1.0, 0.0, 0.0, 0.0};
  for (const Complex& v : dft(impulse)) EXPECT_NEAR(std::abs(v - Complex{1.0, 0.0}), 0.0, 1e-15);
  const std::vector<double> ones = {1.0, 1.0, 1.0, 1.0};
  const ComplexSequence x = dft(ones);
  EXPECT_NEAR(std::abs(x[0] - Complex{4.0, 0.0}), 0.0, 1e-15);
  for (std::size_t k = 1; k < 4; ++k) EXPECT_NEAR(std::abs(x[k]), 0.0, 1e-15);
}

TEST(Dft, MatchesNaiveOracleForLengthsOneToSixtyFour) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 64; ++n) {
    const auto x = random_sequence(rng, n);
    EXPECT_LE(oracle::max_relative_error(dft(x), oracle::naive_dft(x)), 1e-9) << "length " << n;
  }
}

TEST(Dft, MatchesNaiveOracleForAwkwardLengths) {
  std::mt19937_64 rng(18);
  for (std::size_t n : {37u, 97u, 127u, 257u, 1000u, 1025u, 2050u, 3 * 1031u}) {
    const auto x = random_sequence(rng, n);
    EXPECT_LE(oracle::max_relative_error(dft(x), oracle::naive_dft(x)), 1e-9) << "length " << n;
  }
}

TEST(Dft, RealInputMatchesComplexPath) {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g;
  std::vector<double> x(45);
  for (double& v : x) v = g(rng);
  const std::vector<Complex> xc(x.begin(), x.end());
  EXPECT_LE(oracle::max_relative_error(dft(x), oracle::naive_dft(xc)), 1e-12);
}

TEST(Dft, ParsevalAndInverse) {
  std::mt19937_64 rng(20);
  for (std::size_t n : {8u, 30u, 61u, 100u}) {
    const auto x = random_sequence(rng, n);
    const auto spectrum = dft(x);
    double time = 0.0, freq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      time += std::norm(x[i]);
      freq += std::norm(spectrum[i]);
    }
    EXPECT_NEAR(freq / static_cast<double>(n), time, 1e-10 * time);
    EXPECT_LE(oracle::max_relative_error(idft(spectrum), x), 1e-12);
  }
}

TEST(Dft, EmptyInputIsRejected) { EXPECT_THROW(dft(std::vector<Complex>{}), DomainError); }

TEST(ZeroPad, LengthsAndContent) {
  const std::vector<double> x = {1.0, -2.0, 3.0, 0.5, 4.0};
  const ComplexSequence same = zero_pad(x, 5);
  ASSERT_EQ(same.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(same[i], Complex(x[i], 0.0));
  const ComplexSequence padded = zero_pad(x, 20);
  ASSERT_EQ(padded.size(), 20u);
  for (std::size_t i = 5; i < 20; ++i) EXPECT_EQ(padded[i], Complex(0.0, 0.0));
  EXPECT_THROW(zero_pad(x, 4), DomainError);
}

TEST(ZeroPad, PaddedDftSamplesTheDtft) {
  const std::vector<double> x = {1.0, -2.0, 3.0, 0.5, 4.0};
  const ComplexSequence bins = dft(std::span<const Complex>(zero_pad(x, 20)));
  for (std::size_t k = 0; k < 20; ++k) {
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) / 20.0;
    EXPECT_NEAR(std::abs(bins[k] - oracle::direct_dtft(x, omega)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(dtft(x, omega) - oracle::direct_dtft(x, omega)), 0.0, 1e-12);
  }
}

TEST(LeastSquares, Identity) {
  ComplexMatrix a(3, 3);
  for (std::size_t i = 0; i < 3; ++i) a(i, i) = 1.0;
  const std::vector<Complex> b = {{1.0, 2.0}, {-3.0, 0.5}, {0.0, 1.0}};
  const LeastSquaresResult r = least_squares(a, b);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(r.solution[i] - b[i]), 0.0, 1e-15);
  EXPECT_NEAR(r.residual_norm, 0.0, 1e-15);
  EXPECT_EQ(r.rank, 3u);
  EXPECT_NEAR(r.condition, 1.0, 1e-12);
}

TEST(LeastSquares, DuplicatedRowsAreConsistent) {
  std::mt19937_64 rng(21);
  const ComplexMatrix base = random_matrix(rng, 4, 4);
  const std::vector<Complex> x = random_sequence(rng, 4);
  ComplexMatrix a(12, 4);
  for (std::size_t r = 0; r < 12; ++r)
    for (std::size_t c = 0; c < 4; ++c) a(r, c) = base(r % 4, c);
  const ComplexSequence b = multiply(a, x);
  const LeastSquaresResult r = least_squares(a, b);
  EXPECT_LE(oracle::max_relative_error(r.solution, x), 1e-12);
  EXPECT_LE(r.residual_norm, 1e-12);
}

TEST(LeastSquares, RandomSystemsMatchNormalEquations) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 12, 4);
    const std::vector<Complex> b = random_sequence(rng, 12);
    const LeastSquaresResult r = least_squares(a, b);
    ASSERT_LT(r.condition, 1e6);
    EXPECT_LE(oracle::max_relative_error(r.solution, oracle::normal_equations(a, b)), 1e-8);
  }
}

TEST(LeastSquares, ResidualIsOrthogonalToColumns) {
  std::mt19937_64 rng(23);
  const ComplexMatrix a = random_matrix(rng, 20, 5);
  const std::vector<Complex> b = random_sequence(rng, 20);
  const LeastSquaresResult r = least_squares(a, b);
  const ComplexSequence fitted = multiply(a, r.solution);
  double norm = 0.0;
  for (std::size_t i = 0; i < 20; ++i) norm += std::norm(b[i] - fitted[i]);
  EXPECT_NEAR(std::sqrt(norm), r.residual_norm, 1e-12);
  for (std::size_t c = 0; c < 5; ++c) {
    Complex dot{0.0, 0.0};
    for (std::size_t i = 0; i < 20; ++i) dot += std::conj(a(i, c)) * (b[i] - fitted[i]);
    EXPECT_NEAR(std::abs(dot), 0.0, 1e-12);
  }
}

TEST(LeastSquares, RankDeficiencyAndShapes) {
  std::mt19937_64 rng(24);
  ComplexMatrix a = random_matrix(rng, 10, 3);
  for (std::size_t r = 0; r < 10; ++r) a(r, 2) = 2.0 * a(r, 0) - a(r, 1);
  const std::vector<Complex> b = random_sequence(rng, 10);
  try {
    least_squares(a, b);
    FAIL() << "expected SingularSystemError";
  } catch (const SingularSystemError& e) {
    EXPECT_EQ(e.numerical_rank(), 2u);
  }
  EXPECT_THROW(least_squares(random_matrix(rng, 2, 3), random_sequence(rng, 2)), UnderdeterminedError);
  EXPECT_THROW(least_squares(random_matrix(rng, 4, 2), random_sequence(rng, 3)), DomainError);
}
