#include "ctxgeom/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ctxgeom/error.hpp"
#include "ctxgeom/scenarios.hpp"

namespace ctxgeom {

namespace {

// Spin-1 basis order is {|+1>, |0>, |-1>}.
StateVector spin1_basis(std::size_t index) {
  std::vector<Complex> amps(3, Complex{0.0, 0.0});
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

StateVector zero_z() { return spin1_basis(1); }
StateVector plus_one_z() { return spin1_basis(0); }

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : op_(m) {
  if (m.dim() == 0) throw InvalidArgument("DensityMatrix: empty matrix");
  if (hs_distance(m, m.adjoint()) > 1e-10) throw InvalidArgument("DensityMatrix: matrix is not Hermitian");
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << tr << " differs from 1";
    throw InvalidArgument(msg.str());
  }
  const auto eig = hermitian_eig(op_, "density matrix");
  if (eig.values.front() < -1e-10) {
    std::ostringstream msg;
    msg << "DensityMatrix: negative eigenvalue " << eig.values.front();
    throw InvalidArgument(msg.str());
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& v) { return DensityMatrix(v.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(ComplexMatrix::identity(dim) * Complex{1.0 / static_cast<double>(dim), 0.0});
}

Complex DensityMatrix::expectation(const ComplexMatrix& x) const { return (x * matrix()).trace(); }

double DensityMatrix::purity() const { return (matrix() * matrix()).trace().real(); }

DensityMatrix DensityMatrix::time_reversed() const { return DensityMatrix(matrix().conjugate()); }

DensityMatrix spin1_time_reversed(const DensityMatrix& rho) {
  if (rho.dim() != 3) throw InvalidArgument("spin1_time_reversed: state is not a qutrit");
  ComplexMatrix r(3);
  r(0, 2) = 1.0;
  r(1, 1) = -1.0;
  r(2, 0) = 1.0;
  return DensityMatrix(r * rho.matrix().conjugate() * r);
}

DensityMatrix kcbs_mixing_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "kcbs_mixing_state: p must lie in [0, 1] (got " << p << ")";
    throw InvalidArgument(msg.str());
  }
  return DensityMatrix(zero_z().projector() * Complex{p, 0.0} +
                       ComplexMatrix::identity(3) * Complex{(1.0 - p) / 3.0, 0.0});
}

DensityMatrix sweep_state(double s) {
  return DensityMatrix::pure(StateVector({std::sin(s), std::cos(s), 0.0}));
}

const std::vector<std::string>& named_state_names() {
  static const std::vector<std::string> names{"mixed3", "0z", "0x", "+1z", "-1z", "+1x", "phi_plus"};
  return names;
}

DensityMatrix named_state(std::string_view name) {
  if (name == "mixed3") return DensityMatrix::maximally_mixed(3);
  if (name == "0z") return DensityMatrix::pure(zero_z());
  if (name == "0x") return DensityMatrix::pure(ms0_eigenstate({1.0, 0.0, 0.0}));
  if (name == "+1z") return DensityMatrix::pure(plus_one_z());
  if (name == "-1z") return DensityMatrix::pure(spin1_basis(2));
  if (name == "+1x") {
    // Top eigenvector of S_x (spectrum -1, 0, +1).
    return DensityMatrix::pure(hermitian_eig(spin1_operators().x, "S_x").vectors[2]);
  }
  if (name == "phi_plus") {
    const double r = 1.0 / std::numbers::sqrt2;
    return DensityMatrix::pure(StateVector({r, 0.0, 0.0, r}));
  }
  std::ostringstream msg;
  msg << "named_state: unknown state '" << name << "'; valid names:";
  for (const auto& n : named_state_names()) msg << " " << n;
  throw InvalidArgument(msg.str());
}

}  // namespace ctxgeom
