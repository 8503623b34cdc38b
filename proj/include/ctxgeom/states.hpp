#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ctxgeom/linalg.hpp"

namespace ctxgeom {

/// A quantum state: Hermitian, unit trace, positive semidefinite (eigenvalues
/// >= -1e-10). Construction validates all three.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(const ComplexMatrix& m);

  static DensityMatrix pure(const StateVector& v);
  static DensityMatrix maximally_mixed(std::size_t dim);

  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  std::size_t dim() const { return op_.dim(); }

  /// Tr(X rho) for an arbitrary operator X.
  Complex expectation(const ComplexMatrix& x) const;
  double purity() const;
  /// Entrywise complex conjugation in the stored basis.
  DensityMatrix time_reversed() const;

 private:
  HermitianOperator op_;
};

/// Spin-1 time reversal R rho* R^T with R = exp(-i pi S_y); sends |+1_z> to |-1_z>.
DensityMatrix spin1_time_reversed(const DensityMatrix& rho);

/// rho(p) = p |0_z><0_z| + (1 - p) 1/3; throws InvalidArgument for p outside [0, 1].
DensityMatrix kcbs_mixing_state(double p);

/// Pure state cos s |0_z> + sin s |+1_z>.
DensityMatrix sweep_state(double s);

/// One of mixed3, 0z, 0x, +1z, -1z, +1x, phi_plus. Throws InvalidArgument with
/// the list of valid names otherwise.
DensityMatrix named_state(std::string_view name);

const std::vector<std::string>& named_state_names();

}  // namespace ctxgeom
