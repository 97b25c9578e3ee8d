#include "fifspec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include "fifspec/errors.hpp"

namespace fifspec {

namespace {

// Largest prime radix handled by the generic butterfly before switching to Bluestein.
constexpr std::size_t kMaxDirectRadix = 31;

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> factors;
  while (n % 4 == 0) {
    factors.push_back(4);
    n /= 4;
  }
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      factors.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

Complex unit_root(std::uint64_t numerator, std::uint64_t denominator) {
  // exp(-2 pi i numerator / denominator) with the argument reduced first.
  const std::uint64_t r = numerator % denominator;
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(denominator);
  return {std::cos(angle), std::sin(angle)};
}

class FftPlan {
 public:
  explicit FftPlan(std::size_t length) : length_(length) {
    const std::vector<std::size_t> factors = factorize(length);
    const bool direct = std::all_of(factors.begin(), factors.end(), [](std::size_t p) { return p <= kMaxDirectRadix; });
    if (direct || length <= kMaxDirectRadix) {
      build_mixed_radix(factors);
    } else {
      build_bluestein();
    }
  }

  ComplexSequence forward(std::span<const Complex> in) const {
    ComplexSequence out(length_);
    if (length_ == 1) {
      out[0] = in[0];
      return out;
    }
    if (bluestein_) return run_bluestein(in);
    recurse(out.data(), in.data(), 1, 0);
    return out;
  }

 private:
  void build_mixed_radix(const std::vector<std::size_t>& factors) {
    // Stage list as (radix, remaining length) pairs.
    std::size_t remaining = length_;
    for (std::size_t p : factors) {
      remaining /= p;
      stages_.emplace_back(p, remaining);
    }
    twiddles_.resize(length_);
    for (std::size_t j = 0; j < length_; ++j) twiddles_[j] = unit_root(j, length_);
  }

  void build_bluestein() {
    std::size_t padded = 1;
    while (padded < 2 * length_ - 1) padded <<= 1;
    inner_ = std::make_unique<FftPlan>(padded);
    chirp_.resize(length_);
    const std::uint64_t modulus = 2 * static_cast<std::uint64_t>(length_);
    for (std::size_t n = 0; n < length_; ++n) {
      const std::uint64_t sq = (static_cast<std::uint64_t>(n) * n) % modulus;
      // exp(-i pi n^2 / L) = exp(-2 pi i (n^2 mod 2L) / 2L)
      chirp_[n] = unit_root(sq, modulus);
    }
    ComplexSequence kernel(padded, Complex{});
    kernel[0] = std::conj(chirp_[0]);
    for (std::size_t n = 1; n < length_; ++n) {
      kernel[n] = std::conj(chirp_[n]);
      kernel[padded - n] = std::conj(chirp_[n]);
    }
    kernel_spectrum_ = inner_->forward(kernel);
    bluestein_ = true;
  }

  ComplexSequence run_bluestein(std::span<const Complex> in) const {
    const std::size_t padded = kernel_spectrum_.size();
    ComplexSequence work(padded, Complex{});
    for (std::size_t n = 0; n < length_; ++n) work[n] = in[n] * chirp_[n];
    ComplexSequence spec = inner_->forward(work);
    for (std::size_t k = 0; k < padded; ++k) spec[k] = std::conj(spec[k] * kernel_spectrum_[k]);
    // Inverse via conjugation; the conj is folded into the final chirp product.
    ComplexSequence conv = inner_->forward(spec);
    ComplexSequence out(length_);
    const double scale = 1.0 / static_cast<double>(padded);
    for (std::size_t k = 0; k < length_; ++k) out[k] = std::conj(conv[k]) * scale * chirp_[k];
    return out;
  }

  // Decimation in time over the stage list, kissfft style.
  void recurse(Complex* out, const Complex* in, std::size_t fstride, std::size_t stage) const {
    const auto [radix, span] = stages_[stage];
    if (span == 1) {
      for (std::size_t q = 0; q < radix; ++q) out[q] = in[q * fstride];
    } else {
      for (std::size_t q = 0; q < radix; ++q) recurse(out + q * span, in + q * fstride, fstride * radix, stage + 1);
    }
    butterfly(out, fstride, radix, span);
  }

  void butterfly(Complex* out, std::size_t fstride, std::size_t radix, std::size_t span) const {
    if (radix == 2) {
      for (std::size_t u = 0; u < span; ++u) {
        const Complex t = out[u + span] * twiddles_[u * fstride];
        out[u + span] = out[u] - t;
        out[u] += t;
      }
      return;
    }
    Complex scratch[kMaxDirectRadix];
    for (std::size_t u = 0; u < span; ++u) {
      for (std::size_t q = 0; q < radix; ++q) scratch[q] = out[u + q * span];
      for (std::size_t q1 = 0; q1 < radix; ++q1) {
        const std::size_t k = u + q1 * span;
        Complex acc = scratch[0];
        const std::size_t step = (fstride * k) % length_;
        std::size_t idx = 0;
        for (std::size_t q = 1; q < radix; ++q) {
          idx += step;
          if (idx >= length_) idx -= length_;
          acc += scratch[q] * twiddles_[idx];
        }
        out[k] = acc;
      }
    }
  }

  std::size_t length_;
  std::vector<std::pair<std::size_t, std::size_t>> stages_;
  ComplexSequence twiddles_;

  bool bluestein_ = false;
  std::unique_ptr<FftPlan> inner_;
  ComplexSequence chirp_;
  ComplexSequence kernel_spectrum_;
};

const FftPlan& plan_for(std::size_t length) {
  thread_local std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto it = cache.find(length);
  if (it == cache.end()) {
    if (cache.size() > 64) cache.clear();
    it = cache.emplace(length, std::make_unique<FftPlan>(length)).first;
  }
  return *it->second;
}

}  // namespace

ComplexSequence dft(std::span<const Complex> input) {
  if (input.empty()) throw DomainError("dft of an empty sequence");
  return plan_for(input.size()).forward(input);
}

ComplexSequence dft(std::span<const double> input) {
  ComplexSequence promoted(input.begin(), input.end());
  return dft(promoted);
}

ComplexSequence idft(std::span<const Complex> input) {
  if (input.empty()) throw DomainError("idft of an empty sequence");
  ComplexSequence conj_in(input.size());
  std::transform(input.begin(), input.end(), conj_in.begin(), [](Complex z) { return std::conj(z); });
  ComplexSequence out = dft(conj_in);
  const double scale = 1.0 / static_cast<double>(input.size());
  for (Complex& z : out) z = std::conj(z) * scale;
  return out;
}

ComplexSequence zero_pad(std::span<const double> values, std::size_t target_length) {
  if (target_length < values.size()) {
    throw DomainError("zero_pad target " + std::to_string(target_length) + " is shorter than the input (" +
                      std::to_string(values.size()) + ")");
  }
  ComplexSequence out(target_length, Complex{});
  std::copy(values.begin(), values.end(), out.begin());
  return out;
}

Complex dtft(std::span<const double> values, double omega) {
  Complex acc{};
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (values[n] != 0.0) acc += values[n] * std::polar(1.0, -omega * static_cast<double>(n));
  }
  return acc;
}

ComplexSequence multiply(const ComplexMatrix& matrix, std::span<const Complex> x) {
  if (x.size() != matrix.cols()) throw DomainError("matrix-vector shape mismatch");
  ComplexSequence out(matrix.rows(), Complex{});
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const auto row = matrix.row(r);
    Complex acc{};
    for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
  return out;
}

LeastSquaresResult least_squares(const ComplexMatrix& matrix, std::span<const Complex> rhs) {
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();
  if (rhs.size() != rows) throw DomainError("least_squares: rhs length does not match the row count");
  if (cols == 0) throw DomainError("least_squares: matrix has no columns");
  if (rows < cols) {
    throw UnderdeterminedError("least_squares: " + std::to_string(rows) + " rows for " + std::to_string(cols) +
                               " unknowns");
  }

  // Column-major working copy.
  std::vector<ComplexSequence> col(cols, ComplexSequence(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) col[c][r] = matrix(r, c);
  }
  ComplexSequence b(rhs.begin(), rhs.end());
  std::vector<std::size_t> perm(cols);
  for (std::size_t c = 0; c < cols; ++c) perm[c] = c;

  auto tail_norm = [&](const ComplexSequence& v, std::size_t from) {
    double s = 0.0;
    for (std::size_t r = from; r < rows; ++r) s += std::norm(v[r]);
    return std::sqrt(s);
  };

  std::vector<Complex> diag(cols);
  double lead = 0.0;
  for (std::size_t k = 0; k < cols; ++k) {
    std::size_t pivot = k;
    double best = -1.0;
    for (std::size_t c = k; c < cols; ++c) {
      const double nrm = tail_norm(col[c], k);
      if (nrm > best) {
        best = nrm;
        pivot = c;
      }
    }
    std::swap(col[k], col[pivot]);
    std::swap(perm[k], perm[pivot]);
    if (k == 0) lead = best;
    if (!(best > kRankThreshold * lead) || best == 0.0) {
      throw SingularSystemError("least_squares: rank deficient, numerical rank " + std::to_string(k) + " of " +
                                    std::to_string(cols),
                                k);
    }

    // Householder reflector zeroing col[k][k+1..].
    ComplexSequence& x = col[k];
    const double phase_mag = std::abs(x[k]);
    const Complex phase = phase_mag > 0.0 ? x[k] / phase_mag : Complex{1.0, 0.0};
    const Complex alpha = -phase * best;
    ComplexSequence v(rows - k);
    v[0] = x[k] - alpha;
    for (std::size_t r = k + 1; r < rows; ++r) v[r - k] = x[r];
    double vnorm = 0.0;
    for (const Complex& z : v) vnorm += std::norm(z);
    vnorm = std::sqrt(vnorm);
    if (vnorm > 0.0) {
      for (Complex& z : v) z /= vnorm;
      auto reflect = [&](ComplexSequence& target) {
        Complex dot{};
        for (std::size_t r = k; r < rows; ++r) dot += std::conj(v[r - k]) * target[r];
        for (std::size_t r = k; r < rows; ++r) target[r] -= 2.0 * v[r - k] * dot;
      };
      for (std::size_t c = k + 1; c < cols; ++c) reflect(col[c]);
      reflect(b);
    }
    diag[k] = alpha;
    x[k] = alpha;
    for (std::size_t r = k + 1; r < rows; ++r) x[r] = Complex{};
  }

  // Back substitution on the upper triangle.
  ComplexSequence z(cols);
  for (std::size_t i = cols; i-- > 0;) {
    Complex acc = b[i];
    for (std::size_t c = i + 1; c < cols; ++c) acc -= col[c][i] * z[c];
    z[i] = acc / diag[i];
  }

  LeastSquaresResult result;
  result.solution.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) result.solution[perm[c]] = z[c];
  result.rank = cols;
  result.condition = std::abs(diag.front()) / std::abs(diag.back());

  const ComplexSequence fitted = multiply(matrix, result.solution);
  double res = 0.0;
  for (std::size_t r = 0; r < rows; ++r) res += std::norm(fitted[r] - rhs[r]);
  result.residual_norm = std::sqrt(res);
  return result;
}

}  // namespace fifspec
