#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace opineq {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Dense row-major complex matrix.
///
/// Zero-sized dimensions are allowed so that empty subspace bases (for
/// example the kernel of an invertible operator) have a representation.
/// Every constructor rejects non-finite entries with ErrorCode::NonFinite.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static Matrix diagonal(std::span<const Complex> diag);
  static Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  /// Columns of the result are the given vectors (all of length `rows`).
  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const Complex> v);
  /// Columns [first, first + count).
  Matrix columns(std::size_t first, std::size_t count) const;

  bool is_finite() const noexcept;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(Complex s, Matrix a);
Matrix operator*(Matrix a, Complex s);
Vector operator*(const Matrix& a, std::span<const Complex> x);

/// Conjugate transpose.
Matrix adjoint(const Matrix& a);

/// a* a, exactly Hermitian (upper triangle computed, lower mirrored).
Matrix gram(const Matrix& a);
/// a a*, exactly Hermitian.
Matrix outer_gram(const Matrix& a);

/// (a + a*) / 2.
Matrix hermitian_part(const Matrix& a);

/// [a | b]; row counts must agree.
Matrix hstack(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);
double max_abs_entry(const Matrix& a);

// Vector helpers. inner(x, y) is linear in x and conjugate-linear in y,
// so <Tx, x> = inner(T x, x) = x^H T x.
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
double norm(std::span<const Complex> x);
double norm_sq(std::span<const Complex> x);
Vector add(std::span<const Complex> x, std::span<const Complex> y);
Vector sub(std::span<const Complex> x, std::span<const Complex> y);
Vector scale(Complex s, std::span<const Complex> x);
/// s*x + t*y
Vector combine(Complex s, std::span<const Complex> x, Complex t, std::span<const Complex> y);
Vector normalized(std::span<const Complex> x);

}  // namespace opineq
