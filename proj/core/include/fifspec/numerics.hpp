#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fifspec {

using Complex = std::complex<double>;
using ComplexSequence = std::vector<Complex>;

// Forward DFT, X[k] = sum_n x[n] exp(-2 pi i k n / L), for any L >= 1.
// Lengths whose prime factors are all small go through a mixed-radix
// Cooley-Tukey recursion; anything else is routed through Bluestein's
// chirp-z convolution on a power-of-two grid.
ComplexSequence dft(std::span<const Complex> input);
ComplexSequence dft(std::span<const double> input);

// Inverse transform with the 1/L normalisation.
ComplexSequence idft(std::span<const Complex> input);

// Original samples followed by zeros up to target_length.
ComplexSequence zero_pad(std::span<const double> values, std::size_t target_length);

// DTFT sum_n x[n] exp(-i omega n) by direct summation.
Complex dtft(std::span<const double> values, double omega);

// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexSequence multiply(const ComplexMatrix& matrix, std::span<const Complex> x);

struct LeastSquaresResult {
  ComplexSequence solution;
  double residual_norm = 0.0;
  // |R_11| / |R_nn| of the pivoted factorisation.
  double condition = 1.0;
  std::size_t rank = 0;
};

// Relative pivot magnitude below which a column is treated as dependent.
inline constexpr double kRankThreshold = 1e-10;

// min ||A x - b||_2 by Householder QR with column pivoting. Throws
// SingularSystemError (carrying the numerical rank) when A is rank deficient
// and DomainError when rows < cols or the shapes disagree.
LeastSquaresResult least_squares(const ComplexMatrix& matrix, std::span<const Complex> rhs);

}  // namespace fifspec
