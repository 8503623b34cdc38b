#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ctxgeom/linalg.hpp"

namespace ctxgeom {

/// Joint eigenvalue pair (a, b) of a commuting observable pair.
struct EigenPair {
  double first = 0.0;
  double second = 0.0;

  friend auto operator<=>(const EigenPair&, const EigenPair&) = default;
};

std::string to_string(const EigenPair& label);

/// Projector onto one joint eigenspace. After coarse-graining a member carries
/// every constituent label (sorted descending); no merged eigenvalue is assigned.
struct LabeledProjector {
  HermitianOperator projector;
  std::vector<EigenPair> labels;
  std::vector<StateVector> basis;  // orthonormal basis of the range

  std::size_t rank() const { return basis.size(); }
  bool is_merged() const { return labels.size() > 1; }
  /// The single eigenvalue pair; throws InvalidArgument on a merged member.
  const EigenPair& label() const;
  std::string label_string() const;
};

/// Complete family of mutually orthogonal projectors, sorted by label in
/// descending lexicographic order.
class ProjectorFamily {
 public:
  ProjectorFamily() = default;
  /// Validates idempotence, trace = rank, completeness and pairwise
  /// orthogonality (1e-10); throws InvalidArgument otherwise.
  ProjectorFamily(std::size_t dim, std::vector<LabeledProjector> members);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<LabeledProjector>& members() const { return members_; }
  const LabeledProjector& operator[](std::size_t i) const { return members_[i]; }

  /// ||sum_k P_k - 1||_HS
  double completeness_defect() const;

 private:
  std::size_t dim_ = 0;
  std::vector<LabeledProjector> members_;
};

/// Joint eigenspace projectors of a commuting pair, found by diagonalizing
/// A + lambda*B and grouping eigenvectors by their (a, b) labels. Empty joint
/// eigenspaces are omitted. Throws InvalidArgument if ||[A,B]||_HS > 1e-10 or
/// the dimensions differ, NumericalError if no lambda yields verified labels.
ProjectorFamily joint_eigenprojectors(const HermitianOperator& a, const HermitianOperator& b);

/// Replaces members i and j by their sum.
ProjectorFamily coarse_grain(const ProjectorFamily& family, std::size_t i, std::size_t j);

/// Rank-1 family built from an orthonormal basis; member k is labeled (k, 0).
ProjectorFamily rank_one_family(std::span<const StateVector> basis);

/// Distinct eigenvalues of H (clustered at 1e-6), ascending.
std::vector<double> spectrum(const HermitianOperator& h);

/// Spectral projectors of H paired with their eigenvalues, ascending.
struct SpectralProjector {
  double eigenvalue = 0.0;
  ComplexMatrix projector;
};
std::vector<SpectralProjector> spectral_projectors(const HermitianOperator& h);

}  // namespace ctxgeom
