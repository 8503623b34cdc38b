#include "ctxgeom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "ctxgeom/error.hpp"

namespace ctxgeom {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalThreshold = 1e-14;
constexpr double kDegeneracyGap = 1e-9;
constexpr double kPhaseTieTolerance = 1e-12;

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw InvalidArgument(msg.str());
  }
}

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

// Frobenius norm of the strictly off-diagonal part.
double off_diagonal_norm(const std::vector<Complex>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(a[i * n + j]);
  return std::sqrt(s);
}

// Orthonormalize columns [begin, end) of the eigenvector list in place.
void gram_schmidt(std::vector<std::vector<Complex>>& vecs, std::size_t begin, std::size_t end) {
  for (std::size_t k = begin; k < end; ++k) {
    auto& v = vecs[k];
    for (std::size_t j = begin; j < k; ++j) {
      const Complex c = inner(vecs[j], v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * vecs[j][i];
    }
    const double nv = norm(v);
    if (nv < 1e-12) throw NumericalError("hermitian_eig: degenerate cluster lost rank during re-orthonormalization");
    for (auto& x : v) x /= nv;
  }
}

}  // namespace

// ---------------------------------------------------------------- ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) {
    std::ostringstream msg;
    msg << "ComplexMatrix: expected " << dim_ * dim_ << " entries, got " << data_.size();
    throw InvalidArgument(msg.str());
  }
  if (!all_finite()) throw InvalidArgument("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw InvalidArgument("outer: vector length mismatch");
  ComplexMatrix m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m = *this;
  for (auto& x : m.data_) x = std::conj(x);
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::hs_norm_sq() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return s;
}

double ComplexMatrix::hs_norm() const { return std::sqrt(hs_norm_sq()); }

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& x : data_) x *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

std::vector<Complex> ComplexMatrix::apply(std::span<const Complex> v) const {
  if (v.size() != dim_) throw InvalidArgument("apply: vector length mismatch");
  std::vector<Complex> out(dim_, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double hs_distance(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).hs_norm(); }

// ------------------------------------------------------------ HermitianOperator

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  if (!m.all_finite()) throw InvalidArgument("HermitianOperator: non-finite entry");
  matrix_ = (m + m.adjoint()) * Complex{0.5, 0.0};
}

double HermitianOperator::expectation(std::span<const Complex> v) const {
  const auto hv = matrix_.apply(v);
  return inner(v, hv).real();
}

// ------------------------------------------------------------------ StateVector

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  for (const auto& x : amplitudes_)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw InvalidArgument("StateVector: non-finite amplitude");
  const double n = norm(amplitudes_);
  if (amplitudes_.empty() || n < 1e-300) throw InvalidArgument("StateVector: zero vector");

  double max_mag = 0.0;
  for (const auto& x : amplitudes_) max_mag = std::max(max_mag, std::abs(x));
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (std::abs(amplitudes_[i]) >= max_mag - kPhaseTieTolerance * max_mag) {
      pivot = i;
      break;
    }
  }
  const Complex phase = std::conj(amplitudes_[pivot]) / std::abs(amplitudes_[pivot]);
  for (auto& x : amplitudes_) x *= phase / n;
  amplitudes_[pivot] = Complex{amplitudes_[pivot].real(), 0.0};
}

ComplexMatrix StateVector::projector() const { return ComplexMatrix::outer(amplitudes_, amplitudes_); }

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw InvalidArgument("inner: vector length mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ---------------------------------------------------------------- hermitian_eig

EigenSystem hermitian_eig(const HermitianOperator& h, std::string_view name) {
  const std::size_t n = h.dim();
  if (n == 0) throw InvalidArgument("hermitian_eig: empty matrix");
  const auto src = h.matrix().data();
  std::vector<Complex> a(src.begin(), src.end());
  std::vector<Complex> v(n * n, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double scale = h.matrix().hs_norm();
  const double threshold = kOffDiagonalThreshold * std::max(scale, 1e-300);

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a, n) <= threshold) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex g = a[p * n + q];
        const double mag = std::abs(g);
        if (mag < 1e-300) continue;
        const Complex phase = g / mag;  // e^{i phi}
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        // Real Jacobi on [[app, mag], [mag, aqq]] after the phase change
        // diag(1, e^{-i phi}); U = diag(1, e^{-i phi}) * [[c, s], [-s, c]].
        const double zeta = (aqq - app) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);

        // A <- A U
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a[k * n + p];
          const Complex akq = a[k * n + q];
          a[k * n + p] = akp * upp + akq * uqp;
          a[k * n + q] = akp * upq + akq * uqq;
        }
        // A <- U^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a[p * n + k];
          const Complex aqk = a[q * n + k];
          a[p * n + k] = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a[q * n + k] = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a[p * n + q] = a[q * n + p] = Complex{0.0, 0.0};
        a[p * n + p] = Complex{a[p * n + p].real(), 0.0};
        a[q * n + q] = Complex{a[q * n + q].real(), 0.0};
        // V <- V U
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v[k * n + p];
          const Complex vkq = v[k * n + q];
          v[k * n + p] = vkp * upp + vkq * uqp;
          v[k * n + q] = vkp * upq + vkq * uqq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps && off_diagonal_norm(a, n) > threshold) {
    std::ostringstream msg;
    msg << "hermitian_eig: no convergence after " << kMaxSweeps << " sweeps for '" << name << "' (dim " << n << ")";
    throw NumericalError(msg.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x].real() < a[y * n + y].real(); });

  std::vector<double> values(n);
  std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(n));
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = a[order[k] * n + order[k]].real();
    for (std::size_t i = 0; i < n; ++i) cols[k][i] = v[i * n + order[k]];
  }

  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin + 1;
    while (end < n && values[end] - values[end - 1] < kDegeneracyGap) ++end;
    if (end - begin > 1) gram_schmidt(cols, begin, end);
    begin = end;
  }

  EigenSystem out;
  out.values = std::move(values);
  out.vectors.reserve(n);
  for (auto& c : cols) out.vectors.emplace_back(std::move(c));
  return out;
}

std::vector<double> column_singular_values(std::vector<std::vector<Complex>> cols) {
  const std::size_t k = cols.size();
  for (const auto& c : cols) {
    if (c.size() != cols.front().size()) throw InvalidArgument("column_singular_values: ragged columns");
    for (const auto& x : c)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw InvalidArgument("column_singular_values: non-finite entry");
  }
  auto norm_sq = [](const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return s;
  };
  double frob_sq = 0.0;
  for (const auto& col : cols) frob_sq += norm_sq(col);
  // Columns reduced to rounding noise would otherwise be rotated forever.
  const double negligible = 1e-26 * frob_sq;
  // Hestenes: rotate column pairs until they are mutually orthogonal.
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const double alpha = norm_sq(cols[p]);
        const double beta = norm_sq(cols[q]);
        const Complex gamma = inner(cols[p], cols[q]);
        const double g = std::abs(gamma);
        if (g <= 1e-14 * std::sqrt(alpha * beta) || std::min(alpha, beta) <= negligible) continue;
        rotated = true;
        const Complex phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < cols[p].size(); ++i) {
          const Complex a = cols[p][i];
          const Complex b = cols[q][i] * std::conj(phase);
          cols[p][i] = c * a - s * b;
          cols[q][i] = s * a + c * b;
        }
      }
    }
    if (!rotated) {
      std::vector<double> out;
      out.reserve(k);
      for (const auto& col : cols) out.push_back(std::sqrt(norm_sq(col)));
      std::sort(out.begin(), out.end(), std::greater<>());
      return out;
    }
  }
  throw NumericalError("column_singular_values: one-sided Jacobi did not converge");
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  if (!m.all_finite()) throw InvalidArgument("singular_values: non-finite entry");
  std::vector<std::vector<Complex>> cols(m.dim(), std::vector<Complex>(m.dim()));
  for (std::size_t j = 0; j < m.dim(); ++j)
    for (std::size_t i = 0; i < m.dim(); ++i) cols[j][i] = m(i, j);
  return column_singular_values(std::move(cols));
}

double largest_singular_value(const ComplexMatrix& m) { return singular_values(m).front(); }

bool is_projector(const ComplexMatrix& m, double tol) { return hs_distance(m * m, m) <= tol; }

double commutator_hs_norm_sq(const HermitianOperator& p, const HermitianOperator& q) {
  if (p.dim() != q.dim()) throw InvalidArgument("commutator_hs_norm_sq: dimension mismatch");
  if (!is_projector(p.matrix()) || !is_projector(q.matrix()))
    throw InvalidArgument("commutator_hs_norm_sq: inputs must be idempotent projectors");
  return commutator(p.matrix(), q.matrix()).hs_norm_sq();
}

}  // namespace ctxgeom
