#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctxgeom/projectors.hpp"

namespace ctxgeom {

using Vec3 = std::array<double, 3>;

struct SpinOperators {
  HermitianOperator x;
  HermitianOperator y;
  HermitianOperator z;
};

/// Spin-1 generators in the {|+1>, |0>, |-1>} basis.
SpinOperators spin1_operators();

/// S.l for a direction l (not required to be normalized).
HermitianOperator spin1_along(const Vec3& direction);

/// The m_s = 0 eigenstate of S.l. Throws InvalidArgument for a zero or
/// non-unit (beyond 1e-10) direction.
StateVector ms0_eigenstate(const Vec3& direction);

/// Three observables {left, mid, right} where mid commutes with both
/// neighbours. left_family comes from (left, mid), right_family from (right, mid).
struct Context {
  std::size_t index = 0;
  HermitianOperator left_obs;
  HermitianOperator mid_obs;
  HermitianOperator right_obs;
  ProjectorFamily left_family;
  ProjectorFamily right_family;
};

/// Noncontextual bound and no-signalling extremum of the cycle correlator.
struct CycleBounds {
  double chi_nc = 0.0;
  double chi_ns = 0.0;
};

/// A cyclic scenario: observables A_0..A_{n-1} with context alpha built on
/// {A_{alpha-1}, A_alpha, A_{alpha+1}} (indices mod n).
struct Scenario {
  std::string name;
  std::size_t dim = 0;
  std::vector<HermitianOperator> observables;
  std::vector<Context> contexts;
  /// Correlator term alpha (A_alpha A_{alpha+1}) carrying a minus sign.
  std::optional<std::size_t> sign_flip_index;
  std::optional<CycleBounds> bounds;
  std::map<std::string, double> parameters;

  std::size_t n() const { return observables.size(); }
};

/// Assembles a cyclic scenario from its observables; checks that adjacent
/// observables commute.
Scenario build_cycle_scenario(std::string name, std::vector<HermitianOperator> observables,
                              std::optional<std::size_t> sign_flip_index, std::optional<CycleBounds> bounds);

/// Geometry of the spin-1 odd n-cycle: n axes on a cone around +z with
/// azimuthal spacing pi(n+1)/n and adjacent axes orthogonal.
struct NCycleConfig {
  int n = 0;
  double theta = 0.0;      // polar angle, radians
  double delta_phi = 0.0;  // azimuthal spacing, radians
  std::vector<Vec3> axes;

  /// Throws InvalidArgument unless n is odd and >= 5.
  static NCycleConfig make(int n);
};

/// Spin-1 odd n-cycle with A_alpha = 1 - 2|0_alpha><0_alpha|. Only n = 5
/// (KCBS) carries correlator bounds (-3, -5).
Scenario build_ncycle(int n);

/// Measurement angles for the CHSH 4-cycle; sigma_t = cos t sigma_z + sin t sigma_x.
struct ChshConfig {
  double a0 = 0.0;
  double b0 = 0.0;
  double a1 = 0.0;
  double b1 = 0.0;

  static ChshConfig bell_optimal();
  /// The literal entropic-optimal angles (0, 0.916, 0.524, -2.880).
  static ChshConfig entropic_optimal();
};

/// Equatorial Pauli observable at angle t.
HermitianOperator pauli_at(double t);

/// Two-qubit 4-cycle (sigma_a0 x 1, 1 x sigma_b0, sigma_a1 x 1, 1 x sigma_b1)
/// with the minus sign on <A_2 A_3> and bounds (2, 4).
Scenario build_chsh(const ChshConfig& config);

}  // namespace ctxgeom
