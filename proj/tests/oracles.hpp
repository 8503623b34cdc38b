#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "ctxgeom/linalg.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;

inline Mat to_eigen(const ctxgeom::ComplexMatrix& m) {
  Mat out(m.dim(), m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = m(i, j);
  return out;
}

inline ctxgeom::ComplexMatrix from_eigen(const Mat& m) {
  ctxgeom::ComplexMatrix out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline ctxgeom::ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ctxgeom::ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = g(rng);
    for (std::size_t j = i + 1; j < d; ++j) {
      m(i, j) = {g(rng), g(rng)};
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

// Unitary from Eigen's Householder QR of a complex Gaussian matrix.
inline Mat random_unitary(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  return Eigen::HouseholderQR<Mat>(a).householderQ();
}

// E from Eigen arithmetic: sum_ij Tr[(P_i Q_j)^2] / d.
inline double energy(const std::vector<Mat>& p, const std::vector<Mat>& q) {
  double e = 0.0;
  for (const auto& a : p)
    for (const auto& b : q) {
      const Mat ab = a * b;
      e += (ab * ab).trace().real();
    }
  return e / static_cast<double>(p.front().rows());
}

inline double golden() { return (1.0 + std::sqrt(5.0)) / 2.0; }

}  // namespace oracle
