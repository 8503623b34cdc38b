#pragma once

// Small dense complex linear algebra. Everything here targets d <= 16;
// matrices are stored row-major in a flat vector.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ctxgeom {

using Complex = std::complex<double>;

class StateVector;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix of size dim x dim.
  explicit ComplexMatrix(std::size_t dim);
  /// Row-major entries; throws InvalidArgument unless entries.size() == dim*dim
  /// and every entry is finite.
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |a><b|
  static ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b);

  std::size_t dim() const { return dim_; }
  Complex operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const;
  /// Entrywise complex conjugate in the stored basis.
  ComplexMatrix conjugate() const;
  Complex trace() const;
  double hs_norm_sq() const;
  double hs_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
  friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

  /// M|v>, unnormalized.
  std::vector<Complex> apply(std::span<const Complex> v) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
double hs_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// A Hermitian matrix. Construction symmetrizes (H + H^dagger)/2.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.dim(); }
  /// <v|H|v> (real part; the imaginary part vanishes for Hermitian H).
  double expectation(std::span<const Complex> v) const;

 private:
  ComplexMatrix matrix_;
};

/// A unit vector with a fixed global phase: the component of largest
/// magnitude (lowest index on ties) is real and non-negative.
class StateVector {
 public:
  StateVector() = default;
  /// Normalizes and applies the phase convention; throws InvalidArgument on a
  /// zero or non-finite vector.
  explicit StateVector(std::vector<Complex> amplitudes);

  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }
  /// |v><v|
  ComplexMatrix projector() const;

 private:
  std::vector<Complex> amplitudes_;
};

/// <a|b>
Complex inner(std::span<const Complex> a, std::span<const Complex> b);

struct EigenSystem {
  std::vector<double> values;        // ascending
  std::vector<StateVector> vectors;  // vectors[k] belongs to values[k]
};

/// Cyclic complex Jacobi eigendecomposition. Eigenvectors inside a degenerate
/// cluster (gap < 1e-9) are re-orthonormalized. Throws NumericalError naming
/// `name` if the off-diagonal mass does not fall below 1e-14 * ||H|| within
/// 100 sweeps.
EigenSystem hermitian_eig(const HermitianOperator& h, std::string_view name = "matrix");

double largest_singular_value(const ComplexMatrix& m);

/// Singular values of M in descending order (one-sided Jacobi, so small
/// values keep absolute accuracy near machine epsilon).
std::vector<double> singular_values(const ComplexMatrix& m);

/// Singular values, descending, of the (rows x columns.size()) matrix whose
/// columns are given. All columns must have the same length.
std::vector<double> column_singular_values(std::vector<std::vector<Complex>> columns);

/// ||[P,Q]||_HS^2 for projectors P, Q. Throws InvalidArgument if either input
/// fails ||X^2 - X||_HS <= 1e-10.
double commutator_hs_norm_sq(const HermitianOperator& p, const HermitianOperator& q);

bool is_projector(const ComplexMatrix& m, double tol = 1e-10);

}  // namespace ctxgeom
