#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ctxgeom/projectors.hpp"

namespace ctxgeom {

/// T_ij = Tr[(P_i Q_j)^2] / d for a left family {P_i} and right family {Q_j}.
/// Entry (i, j) lies in [0, min(rank P_i, rank Q_j)/d]; the total lies in [1/d, 1].
struct OverlapMatrix {
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;  // row-major
  std::vector<std::string> left_labels;
  std::vector<std::string> right_labels;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  double total() const;
};

/// Scalar contractions of the overlap matrix for one context.
struct ContextInvariants {
  double energy = 0.0;   // E = sum_ij T_ij
  double s2_bits = 0.0;  // -log2 E
  double c_mu = 0.0;     // max_ij largest singular value of P_i Q_j
  bool saturated = false;                // |E - c_mu^2| <= 1e-9
  std::vector<double> principal_angles;  // pooled over all (i, j), ascending
};

OverlapMatrix overlap_matrix(const ProjectorFamily& left, const ProjectorFamily& right);

ContextInvariants context_invariants(const ProjectorFamily& left, const ProjectorFamily& right);

/// Principal angles between range(P) and range(Q): arccos of the singular
/// values of U^dagger V, min(rank P, rank Q) of them, ascending in [0, pi/2].
std::vector<double> principal_angles(const LabeledProjector& p, const LabeledProjector& q);

/// |(1 - E) - (2d)^-1 sum_ij ||[P_i, Q_j]||_HS^2|
double commutator_identity_residual(const ProjectorFamily& left, const ProjectorFamily& right);

}  // namespace ctxgeom
