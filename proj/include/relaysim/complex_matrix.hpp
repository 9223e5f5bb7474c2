#pragma once

// Dense complex matrices with the Hermitian factorizations needed for
// Gaussian mutual-information computations: conjugate Gram products,
// band-aware Cholesky, log-determinants and triangular solves.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace relaysim {

using Complex = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Complex> entries() const { return data_; }

  bool all_finite() const {
    for (const Complex& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  // Row index range [first, last) of the nonzero entries in column j;
  // returns {0, 0} for an all-zero column.
  std::pair<std::size_t, std::size_t> column_support(std::size_t j) const {
    std::size_t first = rows_, last = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if ((*this)(i, j) != 0.0) {
        first = std::min(first, i);
        last = i + 1;
      }
    }
    if (last == 0) return {0, 0};
    return {first, last};
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Complex> data_;
};

// A^H A (cols x cols Hermitian). Inner products run over the intersection of
// the column supports, which keeps structured (banded) inputs cheap without
// changing any computed value.
inline ComplexMatrix conjugate_gram_cols(const ComplexMatrix& a) {
  const std::size_t n = a.cols();
  std::vector<std::pair<std::size_t, std::size_t>> support(n);
  for (std::size_t j = 0; j < n; ++j) support[j] = a.column_support(j);

  ComplexMatrix g(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) {
      const std::size_t lo = std::max(support[j].first, support[k].first);
      const std::size_t hi = std::min(support[j].second, support[k].second);
      Complex sum = 0.0;
      for (std::size_t i = lo; i < hi; ++i)
        sum += std::conj(a(i, j)) * a(i, k);
      g(j, k) = sum;
      g(k, j) = std::conj(sum);
    }
  }
  return g;
}

// A A^H (rows x rows Hermitian).
inline ComplexMatrix conjugate_gram_rows(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) {
      Complex sum = 0.0;
      for (std::size_t j = 0; j < a.cols(); ++j)
        sum += a(i, j) * std::conj(a(k, j));
      g(i, k) = sum;
      g(k, i) = std::conj(sum);
    }
  }
  return g;
}

// Half-bandwidth of a Hermitian matrix: max |i - j| over nonzero entries.
inline std::size_t hermitian_bandwidth(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::size_t bw = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (a(i, j) != 0.0) {
        bw = std::max(bw, i - j);
        break;  // leftmost nonzero in the row fixes its contribution
      }
    }
  }
  return bw;
}

// Hermitian matrix in packed lower-band storage: entry (j + d, j) for
// diagonal offset d = 0..bw lives at band_[d * n + j]. A Cholesky factor of
// a band matrix keeps the same band, so factorization runs in place.
class HermitianBand {
 public:
  HermitianBand() = default;
  HermitianBand(std::size_t n, std::size_t bandwidth)
      : n_(n), bw_(std::min(bandwidth, n > 0 ? n - 1 : 0)),
        band_((bw_ + 1) * n) {}

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bw_; }

  Complex& at(std::size_t i, std::size_t j) { return band_[(i - j) * n_ + j]; }
  const Complex& at(std::size_t i, std::size_t j) const {
    return band_[(i - j) * n_ + j];
  }

  void set_zero() { std::fill(band_.begin(), band_.end(), Complex{0.0}); }

  // Load I + scale * S from the lower triangle of a full Hermitian matrix.
  void load_identity_plus(const ComplexMatrix& s, double scale) {
    set_zero();
    for (std::size_t j = 0; j < n_; ++j) {
      at(j, j) = 1.0 + scale * s(j, j);
      for (std::size_t d = 1; d <= bw_ && j + d < n_; ++d)
        at(j + d, j) = scale * s(j + d, j);
    }
  }

  // In-place lower Cholesky. Throws if the matrix is not numerically
  // positive definite or a non-finite value appears.
  void cholesky_in_place() {
    for (std::size_t j = 0; j < n_; ++j) {
      double diag = at(j, j).real();
      const std::size_t k0 = j > bw_ ? j - bw_ : 0;
      for (std::size_t k = k0; k < j; ++k) diag -= std::norm(at(j, k));
      if (!(diag > 0.0) || !std::isfinite(diag))
        throw std::runtime_error(
            "cholesky: matrix not positive definite or non-finite");
      const double pivot = std::sqrt(diag);
      at(j, j) = pivot;
      const std::size_t ilim = std::min(n_, j + bw_ + 1);
      for (std::size_t i = j + 1; i < ilim; ++i) {
        Complex sum = at(i, j);
        const std::size_t kk0 = std::max(k0, i > bw_ ? i - bw_ : 0);
        for (std::size_t k = kk0; k < j; ++k)
          sum -= at(i, k) * std::conj(at(j, k));
        at(i, j) = sum / pivot;
      }
    }
  }

  // 2 * sum(log2 L_jj): log2 det of the factored matrix.
  double log2_det_of_factor() const {
    double sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sum += std::log(at(j, j).real());
    return 2.0 * sum / std::numbers::ln2;
  }

  // Solve L y = b with the factor computed by cholesky_in_place().
  void forward_solve(std::span<const Complex> b, std::vector<Complex>& y) const {
    y.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      Complex sum = b[i];
      const std::size_t k0 = i > bw_ ? i - bw_ : 0;
      for (std::size_t k = k0; k < i; ++k) sum -= at(i, k) * y[k];
      y[i] = sum / at(i, i);
    }
  }

 private:
  std::size_t n_ = 0, bw_ = 0;
  std::vector<Complex> band_;
};

}  // namespace relaysim
